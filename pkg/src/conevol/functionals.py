"""Weighted cone-volume, L_p and Orlicz surface areas, T-functionals,
edge curvature and mean width of polytopes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geometry as geo
from .errors import DomainError, NoInsphere, UnsupportedFaceDim
from .weights import evaluate, power

EXTERIOR = "exterior"
PAPER_LITERAL = "paper_literal"
CONVENTIONS = (EXTERIOR, PAPER_LITERAL)
ANGLE_WEIGHTED = "angle"
LENGTH_WEIGHTED = "length"

MC_BLOCK = 65536


def s_weighted(Q, w, origin=None):
    """Sum over facets of ``w(height) * area``."""
    h, a = geo.facet_heights(Q, origin)
    return float(evaluate(w, h) @ a)


def _incenter(Q):
    _, r, has_insphere, inc = geo.chebyshev_center(Q)
    if not has_insphere:
        raise NoInsphere("polytope has no insphere tangent to every facet")
    return inc, r


def s_weighted_in(Q, w):
    """Sum over facets of ``dist(incenter, facet) * w(area)``."""
    inc, _ = _incenter(Q)
    d, a = geo.facet_heights(Q, inc)
    return float(d @ evaluate(w, a))


def s_p(Q, p, origin=None):
    h, a = geo.facet_heights(Q, origin)
    return float(np.power(h, 1.0 - p) @ a)


def orlicz_surface_area(Q, w, origin=None):
    h, a = geo.facet_heights(Q, origin)
    return float((evaluate(w, 1.0 / h) * h) @ a)


def t_functional(Q, a, b, k, origin=None):
    """Sum over ``k``-faces of ``dist(o, F)**a * vol_k(F)**b``.

    Distances are to the closest point of the face; a vertex has unit
    0-volume.  The origin must be interior, so every distance is positive
    and any real exponents are allowed.
    """
    if k not in (0, 1, Q.dim - 1):
        raise UnsupportedFaceDim(f"k must be 0, 1 or {Q.dim - 1}")
    o = np.zeros(Q.dim) if origin is None else np.asarray(origin, dtype=float)
    geo.facet_heights(Q, o)
    if k == Q.dim - 1:
        h = Q.offsets - Q.normals @ o
        return float(np.power(h, a) @ np.power(Q.areas, b))
    total = 0.0
    for j in range(len(geo.faces(Q, k))):
        total += geo.face_distance(Q, k, j, o) ** a * geo.face_volume(Q, k, j) ** b
    return total


def edge_angles(Q, conv=EXTERIOR):
    if conv not in CONVENTIONS:
        raise ValueError(f"unknown angle convention {conv!r}")
    ext = np.array([e.exterior for e in geo.edges_with_angles(Q)])
    if conv == EXTERIOR:
        return ext
    # 2*pi minus the interior dihedral angle
    return 2 * math.pi - (math.pi - ext)


def edge_lengths(Q):
    return np.array([e.length for e in geo.edges_with_angles(Q)])


def edge_curvature(Q, conv=EXTERIOR):
    return 0.5 * float(edge_lengths(Q) @ edge_angles(Q, conv))


def edge_curvature_weighted(Q, w, conv=EXTERIOR, variant=ANGLE_WEIGHTED):
    theta = edge_angles(Q, conv)
    length = edge_lengths(Q)
    if np.any(theta <= 0):
        raise DomainError("edge angles must be positive under the chosen convention")
    if variant == ANGLE_WEIGHTED:
        return 0.5 * float(length @ evaluate(w, theta))
    if variant == LENGTH_WEIGHTED:
        return 0.5 * float(theta @ evaluate(w, length))
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class MeanWidth:
    value: float
    stderr: float = 0.0
    samples: int = 0


def _direction_block(seed, block, size):
    # counter-based stream: block index lives in the top counter word, so
    # blocks never overlap and can be drawn in any order
    bitgen = np.random.Philox(key=seed, counter=[0, 0, 0, block])
    u = np.random.Generator(bitgen).standard_normal((size, 3))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def mean_width(Q, method="exact_edges", samples=1_000_000, seed=0):
    """Mean width ``2 * E[h_Q(u)]`` over uniform directions ``u``.

    ``exact_edges`` uses the edge formula ``sum(length * exterior) / (4 pi)``;
    ``monte_carlo`` averages the support function over ``samples`` directions
    and also returns the standard error.
    """
    if Q.dim != 3:
        raise ValueError("mean width is implemented for polytopes in R^3")
    if method == "exact_edges":
        return MeanWidth(edge_curvature(Q, EXTERIOR) / (2 * math.pi))
    if method != "monte_carlo":
        raise ValueError(f"unknown mean width method {method!r}")
    total = 0.0
    total_sq = 0.0
    done = 0
    block = 0
    while done < samples:
        size = min(MC_BLOCK, samples - done)
        u = _direction_block(seed, block, size)
        h = np.max(Q.vertices @ u.T, axis=0)
        total += h.sum()
        total_sq += (h * h).sum()
        done += size
        block += 1
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return MeanWidth(float(2 * mean), 2 * math.sqrt(var / samples), samples)


@dataclass(frozen=True)
class FunctionalSummary:
    mean_height: Optional[float]
    mean_facet_area: float
    height_sum: Optional[float]
    total_edge_length: Optional[float]
    mean_exterior_angle: Optional[float]
    convention: str = EXTERIOR


def summary(Q, conv=EXTERIOR):
    """Summary scalars; fields that are undefined for ``Q`` are ``None``."""
    S = geo.surface_area(Q)
    try:
        h, a = geo.facet_heights(Q)
        hbar = float(h @ a) / S
    except geo.PointNotInterior:
        hbar = None
    _, r, has_insphere, _ = geo.chebyshev_center(Q)
    H = Q.n_facets * r if has_insphere else None
    if Q.dim == 3:
        length = edge_lengths(Q)
        lam = float(length.sum())
        tbar = float(length @ edge_angles(Q, conv)) / lam
    else:
        lam = tbar = None
    return FunctionalSummary(hbar, S / Q.n_facets, H, lam, tbar, conv)


def lp_identity_weight(p):
    """The weight whose weighted cone-volume functional is ``S_p``."""
    return power(1.0 - p)
