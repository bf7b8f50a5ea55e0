"""Minimum enclosing ball by move-to-front Welzl."""

from __future__ import annotations

import numpy as np

SHUFFLE_SEED = 20220601
CONTAIN_TOL = 1e-12


def _ball_through(support):
    """Smallest ball whose boundary passes through every support point."""
    P = np.asarray(support, dtype=float)
    if len(P) == 0:
        return None, -1.0
    if len(P) == 1:
        return P[0].copy(), 0.0
    base = P[0]
    U = P[1:] - base
    # center = base + U^T y with (U U^T) y = |U|^2 / 2; lstsq tolerates
    # affinely dependent supports, which do arise from rounding
    G = U @ U.T
    rhs = 0.5 * np.einsum("ij,ij->i", U, U)
    y = np.linalg.lstsq(G, rhs, rcond=None)[0]
    center = base + U.T @ y
    radius = float(np.max(np.linalg.norm(P - center, axis=1)))
    return center, radius


def _inside(center, radius, p):
    if center is None:
        return False
    return np.linalg.norm(p - center) <= radius * (1 + CONTAIN_TOL) + CONTAIN_TOL


def _welzl_mtf(points, end, support, dim):
    center, radius = _ball_through(support)
    if len(support) == dim + 1:
        return center, radius
    i = 0
    while i < end:
        p = points[i]
        if not _inside(center, radius, p):
            center, radius = _welzl_mtf(points, i, support + [p], dim)
            # move-to-front
            points.insert(0, points.pop(i))
        i += 1
    return center, radius


def circumball(points):
    """Return ``(center, R)`` of the smallest ball containing ``points``.

    The input order is shuffled with a fixed seed so the result is
    deterministic for a given input.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[0] == 0:
        raise ValueError("circumball needs at least one point")
    dim = P.shape[1]
    order = np.random.default_rng(SHUFFLE_SEED).permutation(len(P))
    work = [P[k] for k in order]
    center, radius = _welzl_mtf(work, len(work), [], dim)
    # the recursion may return a support ball that misses a point by rounding
    radius = max(radius, float(np.max(np.linalg.norm(P - center, axis=1))))
    return center, radius
