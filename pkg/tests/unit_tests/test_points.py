import json
import math

import numpy as np
import pytest

from boundspanner.points import (
    RING_JITTER,
    PointInputError,
    generate_points,
    load_points,
    save_points,
)


@pytest.mark.parametrize("kind", ["uniform", "grid-jitter", "clusters", "ring"])
def test_generators_are_deterministic_and_distinct(kind):
    first = generate_points(kind, 500, 42)
    assert first == generate_points(kind, 500, 42)
    assert first != generate_points(kind, 500, 43)
    assert len(first) == 500
    assert len(np.unique(first.array, axis=0)) == 500


def test_generators_handle_two_points():
    points = generate_points("grid-jitter", 2, 0)
    assert len(points) == 2
    assert points[0] != points[1]


def test_uniform_points_fill_the_unit_square():
    xy = generate_points("uniform", 1000, 1).array
    assert xy.min() >= 0.0
    assert xy.max() < 1.0


def test_ring_points_sit_on_the_circle():
    xy = generate_points("ring", 300, 5).array
    radii = np.hypot(xy[:, 0] - 0.5, xy[:, 1] - 0.5)
    assert np.all(np.abs(radii - 0.5) <= 0.5 * RING_JITTER + 1e-12)
    assert np.all(np.abs(radii - 0.5) < 1e-6)


@pytest.mark.parametrize(
    ("kind", "n", "seed", "message"),
    [
        ("spiral", 10, 0, "unknown generator kind"),
        ("uniform", 1, 0, "n must be >= 2"),
        ("uniform", 10, -1, "64-bit"),
        ("uniform", 10, 2**64, "64-bit"),
    ],
)
def test_generate_points_rejects_bad_requests(kind, n, seed, message):
    with pytest.raises(PointInputError, match=message):
        generate_points(kind, n, seed)


@pytest.mark.parametrize("suffix", [".json", ".csv"])
def test_save_and_load_keep_full_precision(tmp_path, suffix):
    points = generate_points("clusters", 50, 9)
    path = tmp_path / f"points{suffix}"
    save_points(points, path)
    assert load_points(path) == points


def test_load_csv_with_and_without_header(tmp_path):
    path = tmp_path / "plain.csv"
    path.write_text("0,0\n1.5, 2\n\n-3,4e-2\n")
    assert load_points(path).coordinates() == [(0.0, 0.0), (1.5, 2.0), (-3.0, 0.04)]
    path.write_text("x,y\n0,0\n1,1\n")
    assert len(load_points(path)) == 2


def test_load_json(tmp_path):
    path = tmp_path / "points.json"
    path.write_text(json.dumps({"points": [[0, 0], [1, 2.5]]}))
    assert load_points(path).coordinates() == [(0.0, 0.0), (1.0, 2.5)]


@pytest.mark.parametrize(
    ("name", "text", "message"),
    [
        ("one.csv", "0,0\n", "at least 2 points"),
        ("bad.csv", "0,0\n1,a\n", "not a number"),
        ("wide.csv", "0,0,0\n1,1,1\n", "expected 'x,y'"),
        ("inf.csv", "0,0\ninf,1\n", "not finite"),
        ("bad.json", "{", "invalid JSON"),
        ("list.json", "[[0, 0], [1, 1]]", "expected an object"),
        ("pair.json", '{"points": [[0, 0], [1]]}', "not an \\[x, y\\] pair"),
    ],
)
def test_load_points_rejects_malformed_files(tmp_path, name, text, message):
    path = tmp_path / name
    path.write_text(text)
    with pytest.raises(PointInputError, match=message):
        load_points(path)


def test_load_points_missing_file(tmp_path):
    with pytest.raises(PointInputError, match="cannot read point file"):
        load_points(tmp_path / "missing.csv")


def test_csv_round_trip_keeps_exact_floats(tmp_path):
    path = tmp_path / "exact.csv"
    path.write_text(f"{math.pi!r},{math.e!r}\n0.1,0.2\n")
    loaded = load_points(path)
    save_points(loaded, path)
    assert load_points(path)[0].x == math.pi
