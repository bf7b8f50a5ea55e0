import math

import numpy as np
import pytest

from conevol import functionals as fn
from conevol import geometry as geo
from conevol import inequalities as iq
from conevol import optimizer as op
from conevol import shapes
from conevol.errors import UsageError

from conftest import random_rotation


@pytest.fixture(scope="module")
def maximizers():
    out = {}
    for k in (4, 5, 6):
        for obj in ("volume", "surface"):
            out[k, obj] = op.optimize(k, obj, restarts=8, seed=1)
    return out


def test_parse_objective():
    assert op.parse_objective("sp:0.5").p == 0.5
    assert op.parse_objective("weighted:power:0.5").weight.label() == "power:0.5"
    for bad in ("area", "sp:x", "weighted:nope:1"):
        with pytest.raises(UsageError):
            op.parse_objective(bad)


def test_gauge_round_trip():
    rng = np.random.default_rng(2)
    P = shapes.random_inscribed(3, 9, 0).vertices
    cfg = op.Configuration.from_points(P)
    assert len(cfg.params()) == 2 * 9 - 3
    back = op.Configuration.from_params(cfg.params(), 9)
    assert np.allclose(back.points(), cfg.points())
    assert op.configuration_distance(P, cfg.points()) < 1e-9
    M = random_rotation(rng)
    assert op.configuration_distance(P, P @ M.T) < 1e-9


def test_rotation_invariance_of_objectives():
    rng = np.random.default_rng(9)
    P = shapes.random_inscribed(3, 10, 1).vertices
    for spec in ("volume", "surface", "sp:0.5", "weighted:log1p:1"):
        base = op.evaluate_points(P, spec)
        for _ in range(100):
            val = op.evaluate_points(P @ random_rotation(rng).T, spec)
            assert val == pytest.approx(base, rel=1e-10)


def test_objectives_match_polytope_functionals():
    Q = shapes.random_inscribed(3, 12, 4)
    P = Q.vertices
    assert op.evaluate_points(P, "volume") == pytest.approx(geo.volume(Q), rel=1e-12)
    assert op.evaluate_points(P, "surface") == pytest.approx(geo.surface_area(Q), rel=1e-12)
    assert op.evaluate_points(P, "sp:0.3") == pytest.approx(fn.s_p(Q, 0.3), rel=1e-12)
    assert op.evaluate_points(P, "sp:0") == pytest.approx(fn.s_p(Q, 0.0), rel=1e-12)


def test_degenerate_and_off_origin():
    flat = np.array([[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0.0]])
    assert op.evaluate_points(flat, "volume") == -math.inf
    cap = shapes.bipyramid_vertices(6) * [1, 1, 0.1] + [0, 0, 0.9]
    assert op.evaluate_points(cap, "sp:0.5") == -math.inf


def test_determinism_and_workers():
    a = op.optimize(5, "volume", restarts=3, seed=4)
    b = op.optimize(5, "volume", restarts=3, seed=4, workers=3)
    assert a.value == b.value
    assert np.array_equal(a.best.angles, b.best.angles)
    assert [t["value"] for t in a.trace] == [t["value"] for t in b.trace]


@pytest.mark.slow
def test_known_maximizers(maximizers):
    assert maximizers[4, "volume"].value >= 0.513199
    assert maximizers[5, "volume"].value >= 0.866015
    assert maximizers[6, "surface"].value >= 4 * math.sqrt(3) - 1e-3


@pytest.mark.slow
@pytest.mark.parametrize("k", [4, 5, 6])
def test_volume_and_surface_maximizers_coincide(maximizers, k):
    Pv = maximizers[k, "volume"].best.points()
    Ps = maximizers[k, "surface"].best.points()
    assert op.configuration_distance(Pv, Ps) < 1e-3
    Q = geo.convex_hull(Pv)
    _, r, _, _ = geo.chebyshev_center(Q)
    for p in (0.0, 0.5, 1.0):
        assert fn.s_p(Q, p) == pytest.approx(r ** (1 - p) * geo.surface_area(Q), abs=1e-6)


@pytest.mark.slow
def test_outputs_respect_closed_form_ceilings(maximizers):
    for (k, obj), res in maximizers.items():
        ceiling = op.improvement_bound(res.best.points(), obj)
        assert res.value <= ceiling * (1 + 1e-9)


def test_icosahedron_is_stationary():
    P = shapes.platonic_vertices("icosa")
    for obj in ("volume", "surface"):
        res = op.local_refine(P, obj)
        assert res.improvement < 1e-8
    Q = geo.convex_hull(P)
    _, r, _, _ = geo.chebyshev_center(Q)
    assert fn.s_p(Q, 0.5) == pytest.approx(math.sqrt(r) * geo.surface_area(Q), rel=1e-12)


def test_eight_points_volume_and_surface_diverge():
    P = shapes.berman_hanes_vertices()
    vol = op.local_refine(P, "volume")
    surf = op.local_refine(P, "surface")
    assert vol.improvement < 1e-8
    assert surf.improvement >= 1e-3


def test_sweep_reports_extrema():
    rows, report, head = op.counterexample_sweep()
    assert len(rows) == 31
    assert report["volume"]["argmax"] == pytest.approx(shapes.THETA_STAR, abs=2e-3)
    assert head["surface_at_0.62"] > head["surface_at_theta_star"]
    assert abs(head["dV_dtheta_at_theta_star"]) < 1e-6
    assert head["dS_dtheta_at_theta_star"] > 0
    rows, report = op.sweep("bipyramid", np.linspace(0, 0.3, 7), ("volume",))
    assert report["volume"]["argmax"] == 0.0 and report["volume"]["decreasing"]
    with pytest.raises(UsageError):
        op.sweep("prism", [0.1])


def test_bad_arguments():
    with pytest.raises(UsageError):
        op.optimize(3, "volume")
    with pytest.raises(UsageError):
        op.optimize(5, "volume", restarts=0)
