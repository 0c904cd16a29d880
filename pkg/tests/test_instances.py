import json
from fractions import Fraction

import pytest

from linecover import gadget
from linecover.geometry import Line, Point
from linecover.instances import (CubicGraphInstance, LineSetInstance, PointSetInstance,
                                 SatInstance, SegmentSetInstance, Tour, ValidationError,
                                 format_rational, from_json, incidence, load_instance,
                                 parse_rational, save_instance, to_json)
from conftest import pts

F = Fraction


def test_gadget_round_trip(tmp_path, small_gadget):
    P, _ = small_gadget
    path = tmp_path / "g.json"
    save_instance(P, path)
    back = load_instance(path, "points")
    assert back == P
    assert back.annotations == json.loads(json.dumps(P.annotations))


@pytest.mark.parametrize("inst", [
    SegmentSetInstance(((Point(F(0), F(0)), Point(F(1), F(2))),)),
    LineSetInstance((Line(1, 0, 0), Line(2, 3, 1))),
    SatInstance(2, ((1, 2), (-1, 2), (-1, -2))),
    CubicGraphInstance(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)), (0, 1)),
    Tour(tuple(pts((0, 0), (1, 0), (1, 1)))),
])
def test_round_trip_all_kinds(inst):
    assert from_json(json.loads(json.dumps(to_json(inst)))) == inst


def test_rationals():
    assert format_rational(F(-3, 4)) == "-3/4"
    assert format_rational(F(5)) == "5"
    assert parse_rational("6") == 6
    assert parse_rational("-1/3") == F(-1, 3)
    for bad in ("2/4", "1/0", "x", "1/-2"):
        with pytest.raises(ValidationError):
            parse_rational(bad)


def test_sat_variable_occurring_twice():
    with pytest.raises(ValidationError) as err:
        SatInstance(2, ((1, 2), (-1, 2)))
    assert err.value.reason in {"variable-occurrence", "occurrence-count"}


def test_graph_degree_two_vertex():
    with pytest.raises(ValidationError) as err:
        CubicGraphInstance(4, ((0, 1), (1, 2), (2, 3), (3, 0)), (0, 1))
    assert err.value.reason == "not-cubic"


def test_other_validation_reasons():
    with pytest.raises(ValidationError) as err:
        PointSetInstance(tuple(pts((0, 0), (0, 0))))
    assert err.value.reason == "duplicate-points"
    with pytest.raises(ValidationError) as err:
        from_json({"kind": "points", "data": {"points": [["1/0", "1"]]}})
    assert err.value.reason
    with pytest.raises(ValidationError) as err:
        from_json({"kind": "nope", "data": {}})
    assert err.value.reason == "unknown-kind"
    with pytest.raises(ValidationError) as err:
        Tour(tuple(pts((0, 0), (0, 0))))
    assert err.value.reason == "tour-repeated-vertex"


def test_unreadable_and_malformed(tmp_path):
    with pytest.raises(ValidationError) as err:
        load_instance(tmp_path / "missing.json")
    assert err.value.reason == "file-unreadable"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError) as err:
        load_instance(bad)
    assert err.value.reason == "json-malformed"


def test_incidence_examples(small_gadget):
    col = incidence(pts((0, 0), (1, 1), (2, 2)), [Line(1, -1, 0)])
    assert col[:, 0].all()
    row = incidence(pts((5, 0)), [Line(1, -1, 0), Line(0, 1, 1)])
    assert not row.any()
    P, layout = small_gadget
    prescribed = [layout.e_lines[i][rs] for _, i, rs in layout.triples]
    assert len(prescribed) == 6
    assert incidence(P, prescribed).sum(axis=0).tolist() == [3] * 6


def test_tour_links_convention():
    assert Tour(tuple(pts((0, 0), (1, 0)))).links == 2
    assert Tour(tuple(pts((0, 0), (1, 0), (2, 0), (1, 1)))).links == 3
    sq = Tour(tuple(pts((0, 0), (1, 0), (1, 1), (0, 1))))
    assert sq.links == 4 and sq.covers(pts((F(1, 2), 0), (0, 0)))
    assert not sq.covers(pts((F(1, 2), F(1, 2))))
