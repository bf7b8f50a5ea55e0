import math

import numpy as np
import pytest

from conevol import functionals as fn
from conevol import geometry as geo
from conevol import shapes
from conevol.errors import NoInsphere, PointNotInterior, UnsupportedFaceDim
from conevol.weights import make_weight, power

from conftest import random_rotation


def test_s_p_endpoints(random_hulls):
    for Q in random_hulls:
        assert fn.s_p(Q, 0.0) == pytest.approx(3 * geo.volume(Q), rel=1e-12)
        assert fn.s_p(Q, 1.0) == pytest.approx(geo.surface_area(Q), rel=1e-12)


def test_s_p_is_s_weighted_power(random_hulls):
    for Q in random_hulls[:10]:
        for p in (-1.0, 0.3, 2.0):
            assert fn.s_weighted(Q, fn.lp_identity_weight(p)) == pytest.approx(fn.s_p(Q, p), rel=1e-13)


def test_affine_weight_is_linear(random_hulls):
    w = make_weight("affine", 1.0, 2.0)
    for Q in random_hulls[:10]:
        expect = geo.surface_area(Q) + 2 * 3 * geo.volume(Q)
        assert fn.s_weighted(Q, w) == pytest.approx(expect, rel=1e-12)


def test_orlicz_relations(random_hulls):
    # w(t) = t**q gives sum h**(1-q) a, i.e. S_q
    for Q in random_hulls[:5]:
        assert fn.orlicz_surface_area(Q, power(0.25)) == pytest.approx(fn.s_p(Q, 0.25), rel=1e-12)


def test_s_weighted_in_regular():
    Q = shapes.generate("octa")
    r = 1 / math.sqrt(3)
    a = Q.areas[0]
    assert fn.s_weighted_in(Q, power(0.5)) == pytest.approx(8 * r * math.sqrt(a), rel=1e-12)


def test_s_weighted_in_needs_insphere():
    box = geo.convex_hull([(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-2, 2)])
    with pytest.raises(NoInsphere):
        fn.s_weighted_in(box, power(0.5))


def test_origin_must_be_interior():
    Q = geo.convex_hull(shapes.platonic_vertices("octa") + [2.0, 0, 0])
    with pytest.raises(PointNotInterior):
        fn.s_p(Q, 0.5)


def test_t_functional_identity(random_hulls):
    for Q in random_hulls[:10]:
        for p in (-1.0, 0.0, 0.3, 1.0, 2.0):
            assert fn.t_functional(Q, 1 - p, 1, 2) == pytest.approx(fn.s_p(Q, p), rel=1e-12)


def test_t_functional_low_faces():
    Q = shapes.generate("cube")
    assert fn.t_functional(Q, 1, 1, 0) == pytest.approx(8.0)
    assert fn.t_functional(Q, 0, 0, 0) == 8.0
    s = 1 / math.sqrt(3)
    assert fn.t_functional(Q, 1, 1, 1) == pytest.approx(12 * s * math.sqrt(2) * 2 * s)
    assert fn.t_functional(Q, -1, 1, 2) == pytest.approx(fn.s_p(Q, 2.0))
    with pytest.raises(PointNotInterior):
        fn.t_functional(Q, 1, 1, 0, origin=[1.0, 0, 0])
    with pytest.raises(UnsupportedFaceDim):
        fn.t_functional(shapes.generate("simplex:5"), 1, 1, 2)


def test_edge_curvature_conventions():
    Q = shapes.generate("cube")
    s = 2 / math.sqrt(3)
    assert fn.edge_curvature(Q) == pytest.approx(0.5 * 12 * s * math.pi / 2)
    assert fn.edge_curvature(Q, fn.PAPER_LITERAL) == pytest.approx(0.5 * 12 * s * 1.5 * math.pi)
    with pytest.raises(ValueError):
        fn.edge_angles(Q, "interior")


def test_edge_curvature_weighted_affine():
    Q = shapes.generate("icosa")
    assert fn.edge_curvature_weighted(Q, power(1.0)) == pytest.approx(fn.edge_curvature(Q))
    lam = float(fn.edge_lengths(Q).sum())
    assert fn.edge_curvature_weighted(Q, power(0.0)) == pytest.approx(lam / 2)
    assert fn.edge_curvature_weighted(Q, power(1.0), variant="length") == pytest.approx(
        fn.edge_curvature(Q))


def test_mean_width_exact():
    s = 2 / math.sqrt(3)
    assert fn.mean_width(shapes.generate("cube")).value == pytest.approx(1.5 * s, rel=1e-12)
    # a regular simplex of edge a has mean width (3a/2pi) * arccos(-1/3)... via the edge sum
    T = shapes.generate("tetra")
    a = T.edges[0].length
    assert fn.mean_width(T).value == pytest.approx(6 * a * (math.pi - math.acos(1 / 3)) / (4 * math.pi))


def test_mean_width_monte_carlo_reproducible():
    Q = shapes.generate("octa")
    m1 = fn.mean_width(Q, "monte_carlo", 100_000, seed=3)
    m2 = fn.mean_width(Q, "monte_carlo", 100_000, seed=3)
    assert m1 == m2
    assert abs(m1.value - fn.mean_width(Q).value) < 4 * m1.stderr


def test_mean_width_rotation_invariant():
    Q = shapes.generate("dodeca")
    M = random_rotation(np.random.default_rng(0))
    Q2 = geo.convex_hull(Q.vertices @ M.T)
    assert fn.mean_width(Q2).value == pytest.approx(fn.mean_width(Q).value, rel=1e-12)


def test_summary_fields():
    s = fn.summary(shapes.generate("cube"))
    r = 1 / math.sqrt(3)
    assert s.mean_height == pytest.approx(r)
    assert s.height_sum == pytest.approx(6 * r)
    assert s.mean_exterior_angle == pytest.approx(math.pi / 2)
    box = geo.convex_hull([(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-2, 2)])
    assert fn.summary(box).height_sum is None
    polygon = fn.summary(shapes.generate("polygon:5"))
    assert polygon.total_edge_length is None
