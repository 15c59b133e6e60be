import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from brightdark.correlations import UNDEFINED
from brightdark.records import (
    OutputRecord,
    format_cell,
    make_provenance,
    parse_cell,
    parse_record,
    read_record,
    render,
    write_record,
)


def _record(**kw):
    base = dict(
        command="demo",
        parameters={"beta": 0.1, "source": "fock:2"},
        columns=["a", "b", "c"],
        rows=[[1, 0.1, UNDEFINED], [np.int64(-3), np.float64(1 / 3), None]],
        provenance=make_provenance("0.1.0", seed=7, timestamp=False),
        footer={"total": 4},
    )
    base.update(kw)
    return OutputRecord(**base)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_cells_round_trip(x):
    assert parse_cell(format_cell(x)) == x


def test_cell_types():
    assert format_cell(True) == "true" and parse_cell("false") is False
    assert format_cell(None) == "" and parse_cell("") is None
    assert format_cell(UNDEFINED) == "undefined" and parse_cell("undefined") is UNDEFINED
    assert parse_cell("-12") == -12 and isinstance(parse_cell("-12"), int)
    assert format_cell(0.5) == "5.0000000000000000e-01"


def test_csv_layout():
    text = render(_record(), "csv")
    lines = text.splitlines()
    assert lines[0] == '#schema_version="1"'
    assert lines[1] == '#command="demo"'
    assert lines[4] == "a,b,c"
    assert lines[-1] == '#footer={"total": 4}'


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip(fmt):
    rec = _record()
    back = parse_record(render(rec, fmt))
    assert back.command == "demo" and back.schema_version == "1"
    assert back.columns == rec.columns
    assert back.rows == [[1, 0.1, UNDEFINED], [-3, 1 / 3, None]]
    assert back.footer == {"total": 4}
    assert back.provenance == {"tool_version": "0.1.0", "seed": 7}
    assert back.parameters == rec.parameters


def test_json_shape():
    obj = json.loads(render(_record(), "json"))
    assert set(obj) == {"schema_version", "command", "parameters", "columns", "rows", "footer", "provenance"}
    assert obj["rows"][0] == [1, 0.1, "undefined"]


def test_timestamp_is_iso_utc():
    ts = make_provenance("x")["timestamp"]
    assert ts.endswith("+00:00") and "T" in ts


def test_non_finite_values_are_strings():
    text = render(_record(rows=[[math.inf, 0.0, 0.0]]), "json")
    assert json.loads(text)["rows"][0][0] == "inf"


def test_unknown_format():
    with pytest.raises(ValueError):
        render(_record(), "xml")


def test_atomic_write(tmp_path):
    target = tmp_path / "out.csv"
    write_record(_record(), target)
    assert read_record(target).rows[0][0] == 1
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


def test_failed_write_leaves_nothing(tmp_path):
    with pytest.raises(OSError):
        write_record(_record(), tmp_path / "missing" / "out.csv")
    assert list(tmp_path.iterdir()) == []


def test_failed_render_keeps_old_file(tmp_path):
    target = tmp_path / "out.json"
    target.write_text("old")
    with pytest.raises(ValueError):
        write_record(_record(), target, "xml")
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]
