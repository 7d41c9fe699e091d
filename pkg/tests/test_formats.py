import json
from fractions import Fraction

import pytest

from hypersplit.formats import (
    ParseError,
    ValidationError,
    emit_instance,
    emit_solution,
    format_rational,
    parse_instance,
    parse_solution,
)
from hypersplit.generate import GenerationError, generate_instance
from hypersplit.geometry import PointConfig, enumerate_halfspaces
from hypersplit.instances import PCMSInstance, PTDInstance, RMCInstance


def test_golden_round_trip(data_dir):
    files = sorted(data_dir.glob("*.json"))
    assert len(files) >= 16
    for path in files:
        text = path.read_text()
        if path.name.endswith("_solution.json"):
            assert emit_solution(parse_solution(text)) == text, path.name
        else:
            assert emit_instance(parse_instance(text)) == text, path.name


def test_instance_kinds(data_dir):
    assert isinstance(parse_instance((data_dir / "square_instance.json").read_text()), PointConfig)
    assert isinstance(parse_instance((data_dir / "pcms_toy_instance.json").read_text()), PCMSInstance)
    assert isinstance(parse_instance((data_dir / "ptd_example_instance.json").read_text()), PTDInstance)
    assert isinstance(parse_instance((data_dir / "rmc_example_instance.json").read_text()), RMCInstance)


def geo(points, dim=2, groups=None):
    n = len(points)
    return json.dumps({"dim": dim, "points": points, "groups": groups or [{"name": "a", "members": list(range(n)), "mu": 1}]})


def test_rationals_normalized():
    cfg = parse_instance(geo([["2/4", "3"], ["-6/8", 0.25], [1, "1.5"]]))
    assert cfg.points[0] == (Fraction(1, 2), Fraction(3))
    text = emit_instance(cfg)
    assert '["1/2", "3"]' in text and '["-3/4", "1/4"]' in text and '["1", "3/2"]' in text
    assert format_rational(Fraction(-4, 2)) == "-2"


def test_duplicate_points_rejected():
    with pytest.raises(ValidationError, match="points must be distinct"):
        parse_instance(geo([["1", "2"], ["2/2", "4/2"]]))


def test_bad_literals():
    with pytest.raises(ParseError):
        parse_instance(geo([["1", "x"]]))
    with pytest.raises(ParseError):
        parse_instance('{"dim": 1, "points": [[NaN]], "groups": []}')
    with pytest.raises(ParseError):
        parse_instance(geo([[True, "1"]]))


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_instance('{"dim": 2,\n  "points": [[1, 2],,]}')
    assert exc.value.where.startswith("2:")


def test_structural_error_names_field():
    with pytest.raises(ParseError) as exc:
        parse_instance(json.dumps({"dim": 1, "points": [["0"]], "groups": [{"name": "a", "members": [0]}]}))
    assert "mu" in str(exc.value) and exc.value.where == "groups[0]"
    with pytest.raises(ParseError):
        parse_instance(json.dumps({"kind": "nope"}))


def test_invariant_error_names_field():
    text = json.dumps({"kind": "rmc", "universe_size": 3, "edges": [[0]], "ground_sets": [{"members": [0, 1], "target": 5}]})
    with pytest.raises(ValidationError) as exc:
        parse_instance(text)
    assert exc.value.field == "ground_sets"


def test_kind_override():
    text = json.dumps({"universe_size": 2, "edges": [[0]], "ground_sets": [{"members": [0, 1], "target": 1}]})
    assert isinstance(parse_instance(text, "rmc"), RMCInstance)
    with pytest.raises(ParseError):
        parse_instance(text)


def test_solution_round_trip_content(data_dir):
    sol = parse_solution((data_dir / "line4_solution.json").read_text())
    assert sol.kind == "geometric" and sol.feasible and len(sol.hyperplanes) == 3
    assert [d for _, _, d in sol.trace] == [4, 2, 0]


def test_generator_deterministic():
    a = emit_instance(generate_instance(7, 9, 2, 3, 50))
    b = emit_instance(generate_instance(7, 9, 2, 3, 50))
    assert a == b
    assert a != emit_instance(generate_instance(8, 9, 2, 3, 50))


def test_generator_groups_and_rules():
    cfg = generate_instance(1, 12, 2, 4, 60, "singleton")
    assert all(g.mu == 1 for g in cfg.groups)
    assert set().union(*(g.members for g in cfg.groups)) == set(range(12))
    half = generate_instance(1, 12, 2, 4, 60)
    assert all(g.mu == -(-len(g.members) // 2) for g in half.groups)
    with pytest.raises(ValueError):
        generate_instance(1, 5, 2, 1, 10, "thirds")


def test_generator_four_points_in_plane():
    cfg = generate_instance(3, 4, 2, 1, 10)
    assert len(enumerate_halfspaces(cfg)) == 6


def test_generator_gives_up():
    with pytest.raises(GenerationError, match="larger coordinate bound"):
        generate_instance(0, 5, 1, 1, 2)
