import csv
import io
import json
from fractions import Fraction

from hypothesis import given, strategies as st

from robust_cpac.constructions import INF, thm2_construction
from robust_cpac.core import FiniteDistribution, Predictor, Tri
from robust_cpac.report import dumps_csv, dumps_json, fraction_from_json, to_jsonable


@given(st.fractions())
def test_fraction_roundtrip(q):
    assert fraction_from_json(json.loads(dumps_json(q))) == q


def test_special_values():
    h = thm2_construction().member(INF)
    assert to_jsonable(h) == {"family": "thm2", "params": "inf"}
    assert to_jsonable(Predictor(lambda x: 0, label="zero")) == {"opaque": "zero"}
    assert to_jsonable(Tri.UNKNOWN) == "UnknownWithinBudget"
    D = FiniteDistribution.from_masses([(1, 0, Fraction(1, 3)), (2, 1, Fraction(2, 3))])
    assert to_jsonable(D)["support"][1] == {"point": 2, "label": 1, "mass": {"num": 2, "den": 3}}


def test_json_is_canonical():
    a = dumps_json({"b": 1, "a": [Fraction(1, 2), (3, INF)]})
    b = dumps_json({"a": [Fraction(1, 2), (3, INF)], "b": 1})
    assert a == b and a.endswith("\n")


def test_csv_layout():
    text = dumps_csv([{"x": Fraction(1, 7), "y": None}, {"y": [1, 2], "z": INF}])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows == [["x", "y", "z"], ["1/7", "", ""], ["", "[1,2]", "inf"]]
