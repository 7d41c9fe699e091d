import pytest

from conftest import load_instance, load_solution
from hypersplit.geometry import solve_geometric
from hypersplit.svg import UnsupportedDimensionError, emit_svg


def test_points_only():
    cfg = load_instance("square")
    svg = emit_svg(cfg, [])
    assert "<line" not in svg
    assert svg.count("<path") == 4  # first group is drawn with crosses


def test_figure_instance_two_lines():
    cfg = load_instance("figure1")
    hyperplanes, _ = solve_geometric(cfg)
    svg = emit_svg(cfg, hyperplanes)
    assert svg.count("<line") == 2
    assert svg == emit_svg(cfg, load_solution("figure1").hyperplanes)
    assert svg.count('<g id="group-') == 3


def test_deterministic():
    cfg = load_instance("figure1")
    assert emit_svg(cfg, load_solution("figure1").hyperplanes) == emit_svg(cfg, load_solution("figure1").hyperplanes)


def test_rejects_other_dimensions():
    with pytest.raises(UnsupportedDimensionError):
        emit_svg(load_instance("line4"), [])
