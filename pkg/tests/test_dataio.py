import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcamlp.dataio import (BCCD_SCHEMA, Dataset, EmptyDatasetError, LabelError, ParseError,
                           SchemaError, class_counts, parse_bccd, render_bccd)

HEADER = "Age,BMI,Glucose,Insulin,HOMA,Leptin,Adiponectin,Resistin,MCP.1,Classification"
ROW = "48,23.5,70,2.707,0.467,8.8071,9.7024,7.99585,417.114,1"


def test_schema_matches_table_order_and_units():
    assert BCCD_SCHEMA.names == ["Age", "BMI", "Glucose", "Insulin", "HOMA", "Leptin",
                                 "Adiponectin", "Resistin", "MCP.1"]
    assert [f.unit for f in BCCD_SCHEMA.features] == [
        "years", "kg/m2", "mg/dL", "µU/mL", "ng/mL", "ng/mL", "µg/mL", "ng/mL", "pg/mL"]
    assert [f.name for f in BCCD_SCHEMA.features if f.integral] == ["Age", "Glucose"]


def test_single_row():
    ds = parse_bccd(f"{HEADER}\n{ROW}\n")
    assert len(ds) == 1
    assert ds.labels.tolist() == [0]
    assert ds.features[0, 3] == 2.707
    assert ds.features[0].tolist() == [48, 23.5, 70, 2.707, 0.467, 8.8071, 9.7024, 7.99585, 417.114]


def test_columns_matched_by_name():
    cols = HEADER.split(",")
    vals = ROW.split(",")
    perm = [9, 8, 0, 3, 1, 2, 7, 5, 6, 4]
    header = ",".join(cols[i] for i in perm).lower().replace("mcp.1", "MCP-1")
    row = ",".join(vals[i] for i in perm)
    a = parse_bccd(f"{HEADER}\n{ROW}\n")
    b = parse_bccd(f"{header}\n{row}\n")
    np.testing.assert_array_equal(a.features, b.features)
    assert b.labels.tolist() == a.labels.tolist()


def test_bad_label():
    with pytest.raises(LabelError):
        parse_bccd(f"{HEADER}\n{ROW[:-1]}3\n")


def test_header_only():
    with pytest.raises(EmptyDatasetError):
        parse_bccd(HEADER + "\n")
    with pytest.raises(EmptyDatasetError):
        parse_bccd("")


def test_missing_and_unknown_columns():
    with pytest.raises(SchemaError, match="Resistin"):
        parse_bccd(HEADER.replace(",Resistin", "") + "\n1,2,3,4,5,6,7,8,1\n")
    with pytest.raises(SchemaError, match="Cholesterol"):
        parse_bccd(HEADER.replace("Resistin", "Cholesterol") + f"\n{ROW}\n")


def test_non_numeric_cell_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_bccd(f"{HEADER}\n{ROW}\n{ROW.replace('23.5', 'abc')}\n")
    assert exc.value.row == 3 and exc.value.col == "BMI"


@pytest.mark.parametrize("cell", ["nan", "inf", "1_0", '"23,5"', "0x10", ""])
def test_rejects_non_standard_numbers(cell):
    with pytest.raises(ParseError):
        parse_bccd(f"{HEADER}\n{ROW.replace('23.5', cell, 1)}\n")


def test_integral_columns_enforced():
    with pytest.raises(ParseError, match="Age"):
        parse_bccd(f"{HEADER}\n{ROW.replace('48,', '48.5,', 1)}\n")


@pytest.mark.parametrize("labels,expected", [([1], (0, 1)), ([0, 0, 1, 1], (2, 2))])
def test_class_counts(labels, expected):
    X = np.ones((len(labels), 9))
    assert class_counts(Dataset(X, np.array(labels))) == expected


ints = st.integers(min_value=0, max_value=500).map(float)
reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def datasets(draw):
    n = draw(st.integers(min_value=1, max_value=12))
    rows = [[draw(ints if f.integral else reals) for f in BCCD_SCHEMA.features] for _ in range(n)]
    labels = draw(st.lists(st.sampled_from([0, 1]), min_size=n, max_size=n))
    return Dataset(np.array(rows), np.array(labels))


@given(datasets())
@settings(max_examples=60, deadline=None)
def test_render_parse_round_trip(ds):
    back = parse_bccd(render_bccd(ds))
    np.testing.assert_array_equal(back.features, ds.features)
    np.testing.assert_array_equal(back.labels, ds.labels)
    healthy, patient = class_counts(back)
    assert healthy + patient == len(back)
    assert set(back.labels.tolist()) <= {0, 1}
