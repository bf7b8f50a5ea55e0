"""Generators for named polytopes inscribed in the unit sphere, with
closed-form reference values for calibration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geometry as geo
from .errors import InvalidSpec, NoClosedForm, RetriesExhausted

PLATONIC = ("tetra", "cube", "octa", "dodeca", "icosa")
GOLDEN = (1 + math.sqrt(5)) / 2
# angle of the maximum-volume 8-vertex configuration
THETA_STAR = math.acos(math.sqrt((15 + math.sqrt(145)) / 40))
RANDOM_RETRIES = 200
ORIGIN_MARGIN = 1e-6


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    n: int = 3
    k: int = 0
    theta: float = THETA_STAR
    seed: int = 0
    name: str = ""
    apex_polar: float = 0.0

    def label(self):
        if self.kind == "platonic":
            return self.name
        if self.kind == "regular_simplex":
            return f"simplex:{self.n}"
        if self.kind == "regular_polygon":
            return f"polygon:{self.k}"
        if self.kind == "bipyramid":
            return f"bipyramid:{self.k}" + (f",{self.apex_polar:g}" if self.apex_polar else "")
        if self.kind == "berman_hanes":
            return f"bh:{self.theta!r}"
        return f"random:{self.n},{self.k},{self.seed}"


@dataclass(frozen=True)
class ShapeMetadata:
    v: int
    e: Optional[int]
    f: int
    r: Optional[float] = None
    R: Optional[float] = None
    surface: Optional[float] = None
    volume: Optional[float] = None


def parse_spec(text):
    """Parse ``tetra|cube|octa|dodeca|icosa|simplex:n|polygon:K|
    bipyramid:K[,apex_polar]|bh[:theta]|random:n,K,seed``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    try:
        if kind in PLATONIC:
            return ShapeSpec("platonic", name=kind)
        if kind == "simplex":
            return ShapeSpec("regular_simplex", n=int(arg))
        if kind == "polygon":
            return ShapeSpec("regular_polygon", n=2, k=int(arg))
        if kind == "bipyramid":
            parts = arg.split(",")
            tilt = float(parts[1]) if len(parts) > 1 else 0.0
            return ShapeSpec("bipyramid", k=int(parts[0]), apex_polar=tilt)
        if kind == "bh":
            return ShapeSpec("berman_hanes", theta=float(arg) if arg else THETA_STAR)
        if kind == "random":
            n, k, seed = (int(tok) for tok in arg.split(","))
            return ShapeSpec("random_inscribed", n=n, k=k, seed=seed)
    except ValueError:
        raise InvalidSpec(f"malformed shape spec {text!r}") from None
    raise InvalidSpec(f"unknown shape spec {text!r}")


def _unit(P):
    P = np.asarray(P, dtype=float)
    return P / np.linalg.norm(P, axis=1, keepdims=True)


def regular_simplex_vertices(n):
    """Regular simplex in R^n with unit circumradius."""
    E = np.eye(n + 1) - 1.0 / (n + 1)
    # orthonormal basis of the hyperplane sum(x) = 0
    basis = np.linalg.svd(E)[2][:n]
    return _unit(E @ basis.T)


def platonic_vertices(name):
    g, ig = GOLDEN, 1 / GOLDEN
    if name == "tetra":
        P = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    elif name == "cube":
        P = [(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)]
    elif name == "octa":
        P = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    elif name == "icosa":
        P = []
        for a in (-1, 1):
            for b in (-g, g):
                P += [(0, a, b), (a, b, 0), (b, 0, a)]
    elif name == "dodeca":
        P = [(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)]
        for a in (-ig, ig):
            for b in (-g, g):
                P += [(0, a, b), (a, b, 0), (b, 0, a)]
    else:
        raise InvalidSpec(f"unknown Platonic solid {name!r}")
    return _unit(P)


def regular_polygon_vertices(k):
    t = 2 * math.pi * np.arange(k) / k
    return np.column_stack([np.cos(t), np.sin(t)])


def bipyramid_vertices(k, equator_angles=None, apex_polar=0.0):
    """Two apexes and ``k - 2`` equatorial points.

    ``apex_polar`` tilts both apexes by that polar angle within the xz-plane,
    keeping them on the sphere and mirror-symmetric in the equator.
    """
    m = k - 2
    t = 2 * math.pi * np.arange(m) / m if equator_angles is None else np.asarray(equator_angles, float)
    eq = np.column_stack([np.cos(t), np.sin(t), np.zeros(m)])
    s, c = math.sin(apex_polar), math.cos(apex_polar)
    apex = np.array([[s, 0.0, c], [s, 0.0, -c]])
    return np.vstack([apex, eq])


def berman_hanes_vertices(theta=THETA_STAR):
    s1, c1 = math.sin(theta), math.cos(theta)
    s3, c3 = math.sin(3 * theta), math.cos(3 * theta)
    return np.array([
        [s3, 0, c3],
        [s1, 0, c1],
        [-s1, 0, c1],
        [-s3, 0, c3],
        [0, -s3, -c3],
        [0, -s1, -c1],
        [0, s1, -c1],
        [0, s3, -c3],
    ], dtype=float)


def _sphere_points(n, k, rng):
    return _unit(rng.standard_normal((k, n)))


def random_inscribed(n, k, seed):
    """Hull of ``k`` uniform points on the unit sphere containing the origin.

    Points are redrawn from the same seeded stream until the origin is at
    least ``ORIGIN_MARGIN`` inside every facet.
    """
    if n not in (2, 3):
        raise InvalidSpec("random_inscribed supports n = 2 and n = 3")
    if k < n + 1:
        raise InvalidSpec(f"need K >= {n + 1} points in dimension {n}")
    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_RETRIES):
        P = _sphere_points(n, k, rng)
        try:
            Q = geo.convex_hull(P, n)
        except geo.DegenerateInput:
            continue
        if np.all(Q.offsets > ORIGIN_MARGIN):
            return Q
    raise RetriesExhausted(f"no origin-containing hull after {RANDOM_RETRIES} draws")


def perturbed_simplex(n, scale, seed):
    """Regular inscribed simplex with every vertex moved by a random tangent
    step of size up to ``scale`` and pushed back to the sphere."""
    rng = np.random.default_rng(seed)
    P = regular_simplex_vertices(n)
    step = rng.standard_normal(P.shape) * scale
    return geo.simplex_from_vertices(_unit(P + step))


def points(spec):
    """Vertex coordinates of a named shape before taking the hull."""
    if spec.kind == "platonic":
        return platonic_vertices(spec.name)
    if spec.kind == "regular_simplex":
        if spec.n < 2:
            raise InvalidSpec("simplex dimension must be at least 2")
        return regular_simplex_vertices(spec.n)
    if spec.kind == "regular_polygon":
        if spec.k < 3:
            raise InvalidSpec("polygons need K >= 3")
        return regular_polygon_vertices(spec.k)
    if spec.kind == "bipyramid":
        if spec.k < 5:
            raise InvalidSpec("bipyramids need K >= 5")
        return bipyramid_vertices(spec.k, apex_polar=spec.apex_polar)
    if spec.kind == "berman_hanes":
        if not 0 < spec.theta < math.pi / 4:
            raise InvalidSpec("berman_hanes needs theta in (0, pi/4)")
        return berman_hanes_vertices(spec.theta)
    raise InvalidSpec(f"no fixed point set for {spec.kind}")


def generate(spec):
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if spec.kind == "random_inscribed":
        return random_inscribed(spec.n, spec.k, spec.seed)
    P = points(spec)
    if spec.kind == "regular_simplex" and spec.n > 3:
        return geo.simplex_from_vertices(P)
    return geo.convex_hull(P, P.shape[1])


def simplex_surface(n):
    """Total facet area of the regular simplex inscribed in the unit sphere."""
    return (n + 1) ** ((n + 1) / 2) / (n ** (n / 2 - 1) * math.factorial(n - 1))


def metadata(spec):
    """Closed-form reference values for a named shape (unit circumradius)."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    rt3 = math.sqrt(3)
    if spec.kind == "platonic":
        name = spec.name
        ico_r = 1 / (rt3 * math.tan(math.pi / 5))
        table = {
            "tetra": (4, 6, 4, 1 / 3, 8 / rt3),
            "cube": (8, 12, 6, 1 / rt3, 8.0),
            "octa": (6, 12, 8, 1 / rt3, 4 * rt3),
            "dodeca": (20, 30, 12, ico_r,
                       3 * math.sqrt(25 + 10 * math.sqrt(5)) * (4 / (rt3 * (1 + math.sqrt(5)))) ** 2),
            "icosa": (12, 30, 20, ico_r, rt3 * (10 - 2 * math.sqrt(5))),
        }
        v, e, f, r, S = table[name]
        return ShapeMetadata(v, e, f, r, 1.0, S, r * S / 3)
    if spec.kind == "regular_simplex":
        n = spec.n
        S = simplex_surface(n)
        return ShapeMetadata(n + 1, n * (n + 1) // 2 if n == 3 else None, n + 1, 1 / n, 1.0, S, S / n ** 2)
    if spec.kind == "regular_polygon":
        k = spec.k
        return ShapeMetadata(k, None, k, math.cos(math.pi / k), 1.0,
                             2 * k * math.sin(math.pi / k), 0.5 * k * math.sin(2 * math.pi / k))
    if spec.kind == "bipyramid":
        k = spec.k
        m = k - 2
        if spec.apex_polar:
            return ShapeMetadata(k, 3 * m, 2 * m)
        c = math.cos(math.pi / m)
        S = 2 * m * math.sqrt(1 + c * c) * math.sin(math.pi / m)
        return ShapeMetadata(k, 3 * m, 2 * m, c / math.sqrt(1 + c * c), 1.0, S,
                             m * math.sin(2 * math.pi / m) / 3)
    if spec.kind == "berman_hanes":
        return ShapeMetadata(8, 18, 12)
    raise NoClosedForm(f"no closed form for {spec.label()}")


NAMED_SPECS = ("tetra", "cube", "octa", "dodeca", "icosa", "bipyramid:5", "bipyramid:7", "bh")
