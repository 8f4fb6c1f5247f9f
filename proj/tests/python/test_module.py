import math

import numpy as np
import pytest

import mintype


def two_point():
    return mintype.Family.point_sites([[-1.0, 0.0], [1.0, 0.0]])


def test_two_point_critical_points():
    pts = mintype.find_all_critical(two_point(), mintype.Box.cube(2, -2.0, 2.0))
    found = sorted((round(p.location[0], 9), p.index) for p in pts)
    assert found == [(-1.0, 0), (0.0, 1), (1.0, 0)]
    saddle = next(p for p in pts if p.index == 1)
    assert saddle.value == pytest.approx(1.0)


def test_torus_counts_and_default_region():
    torus = mintype.Family.periodic([[0.0, 0.0]])
    counts = [0, 0, 0]
    for p in mintype.find_all_critical(torus):
        counts[p.index] += 1
    assert counts == [1, 2, 1]


def test_classify_point_and_gradients():
    c = mintype.classify_point(two_point(), np.zeros(2))
    assert c.verdict == "Critical"
    assert c.index == 1
    assert np.allclose(c.lambda_, [0.5, 0.5])
    assert mintype.classify_point(two_point(), [0.3, 0.4]).verdict == "Regular"
    boundary = mintype.classify_gradients([[2.0, 0.0], [-2.0, 0.0], [0.0, 2.0]])
    assert boundary.verdict == "DegenerateRegular"
    assert mintype.has_increase_direction([[2.0, 0.0], [-2.0, 0.0]]) is None
    d = mintype.has_increase_direction([[1.0, 0.0], [0.0, 1.0]])
    assert d[0] > 0 and d[1] > 0


def test_evaluation_and_active_set():
    f = two_point()
    assert mintype.evaluate_min(f, [0.0, 0.0]) == 1.0
    aset = mintype.active_set(f, [0.0, 0.0])
    assert len(aset) == 2
    assert mintype.directional_derivative(aset.gradients(), [0.0, 1.0]) == pytest.approx(0.0)


def test_errors_carry_codes():
    with pytest.raises(mintype.MintypeError) as info:
        mintype.Family.point_sites([])
    assert info.value.code == "EmptyFamily"
    with pytest.raises(mintype.MintypeError) as info:
        mintype.load_family('{"kind": "quadratic", "dim": 2, "pieces": [{"A": [[1, 0], [0, 0]]}]}')
    assert info.value.code == "NonConvexPiece"
    with pytest.raises(ValueError):
        mintype.load_family("{ not json")


def test_perturb_and_track():
    t = mintype.perturb_and_track(two_point(), [1.1, 0.9], mintype.Box.cube(2, -2.0, 2.0))
    assert t.structure_preserved
    saddle = next(m for m in t.matches if m.base.index == 1)
    s = math.sqrt(0.9) / (math.sqrt(1.1) + math.sqrt(0.9))
    assert saddle.deformed.location[0] == pytest.approx(-1.0 + 2.0 * s, abs=1e-9)
    assert mintype.stability_radius(two_point(), {0: 1.0, 1: -1.0}) == 0.5


def test_euler_sweep_and_consistency():
    f = two_point()
    box = mintype.Box.cube(2, -2.0, 2.0)
    sweep = mintype.euler_sweep(f, [-0.1, 0.5, 1.5], box, 128)
    assert [chi for _, chi in sweep] == [0, 2, 1]
    assert mintype.sweep_consistent(f, mintype.find_all_critical(f, box), box, 128)


def test_round_trip(tmp_path):
    f = mintype.apply_scaling(mintype.Family.periodic([[0.1, 0.2], [0.55, 0.9]]), {0: 1.1})
    path = tmp_path / "family.json"
    mintype.write_family(str(path), f)
    back = mintype.read_family(str(path))
    rng = np.random.default_rng(7)
    for x in rng.uniform(-2, 2, size=(50, 2)):
        assert mintype.evaluate_min(back, x) == mintype.evaluate_min(f, x)
    assert mintype.load_family(mintype.family_to_json(f)).kind == f.kind


def test_levelset_svg():
    svg = mintype.levelset_svg(two_point(), [0.5, 1.5])
    assert svg.lstrip().startswith("<")
    assert "<svg" in svg
