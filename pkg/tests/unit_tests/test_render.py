from boundspanner.delaunay import build_delaunay
from boundspanner.geometry import PointSet
from boundspanner.points import generate_points
from boundspanner.render import render_svg, save_svg
from boundspanner.spanner import SpannerGraph, bound_spanner


def test_one_element_per_edge_and_point():
    t = build_delaunay(generate_points("uniform", 150, 8))
    g = bound_spanner(t, reading="inclusive")
    svg = render_svg(g)
    assert svg.startswith("<svg ")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count("<line ") == len(g.edges)
    assert svg.count("<circle ") == 150
    assert svg.count('stroke-dasharray="4 3"') == len(g.wedge_edges - g.core_edges)


def test_coordinates_are_scaled_into_the_canvas():
    points = PointSet.from_coordinates([(0, 0), (10, 0), (0, 5)])
    t = build_delaunay(points)
    g = SpannerGraph(points=points, core_edges=frozenset(t.edges), wedge_edges=frozenset())
    svg = render_svg(g, size=120)
    assert 'width="120"' in svg
    # 20px margin, 8px per unit, y axis flipped
    assert '<line x1="20" y1="100" x2="100" y2="100"' in svg
    assert '<circle cx="20" cy="60"' in svg
    assert "stroke-dasharray" not in svg


def test_save_svg(tmp_path):
    points = PointSet.from_coordinates([(0, 0), (1, 1)])
    g = bound_spanner(build_delaunay(points))
    path = tmp_path / "out" / "g.svg"
    save_svg(g, path)
    assert path.read_text().count("<line ") == 1
