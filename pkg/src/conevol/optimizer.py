"""Derivative-free search over K-point configurations on the unit sphere.

Configurations are gauge fixed: the first point sits at the north pole and
the second has zero azimuth, leaving ``2K - 3`` free angles.  Objectives are
evaluated on the triangulated hull directly, which is what makes thousands of
Nelder-Mead steps affordable.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

from . import geometry as geo
from . import shapes
from .errors import UsageError
from .weights import WeightFunction, evaluate, parse_weight

NEG_INF = float("-inf")
DEGENERATE_VOLUME = 1e-12


@dataclass(frozen=True)
class Objective:
    kind: str  # volume | surface | sp | weighted
    p: float = 0.0
    weight: WeightFunction | None = None

    def label(self):
        if self.kind == "sp":
            return f"sp:{self.p:g}"
        if self.kind == "weighted":
            return f"weighted:{self.weight.label()}"
        return self.kind


def parse_objective(spec):
    if isinstance(spec, Objective):
        return spec
    if isinstance(spec, WeightFunction):
        return Objective("weighted", weight=spec)
    text = str(spec)
    if text in ("volume", "surface"):
        return Objective(text)
    if text.startswith("sp:"):
        try:
            return Objective("sp", p=float(text[3:]))
        except ValueError:
            raise UsageError(f"bad objective {text!r}") from None
    if text.startswith("weighted:"):
        return Objective("weighted", weight=parse_weight(text[len("weighted:"):]))
    raise UsageError(f"unknown objective {text!r}; use volume, surface, sp:p or weighted:<weight>")


@dataclass(frozen=True)
class Configuration:
    """``K`` points on the sphere as ``(azimuth, polar)`` pairs."""

    angles: np.ndarray

    @property
    def k(self):
        return len(self.angles)

    def points(self):
        az, pol = self.angles[:, 0], self.angles[:, 1]
        s = np.sin(pol)
        return np.column_stack([s * np.cos(az), s * np.sin(az), np.cos(pol)])

    def params(self):
        a = self.angles
        return np.concatenate([[a[1, 1]], a[2:].ravel()])

    @classmethod
    def from_params(cls, x, k):
        a = np.zeros((k, 2))
        a[1, 1] = x[0]
        a[2:] = np.asarray(x[1:]).reshape(k - 2, 2)
        return cls(a)

    @classmethod
    def from_points(cls, P):
        """Gauge-fix arbitrary points: rotate the first onto the pole and the
        next non-antipodal point onto zero azimuth."""
        P = np.asarray(P, dtype=float)
        P = P / np.linalg.norm(P, axis=1, keepdims=True)
        z = P[0]
        order = list(range(len(P)))
        for j in range(1, len(P)):
            t = P[j] - (P[j] @ z) * z
            if np.linalg.norm(t) > 1e-9:
                order.insert(1, order.pop(j))
                break
        else:
            raise UsageError("points are all on one axis")
        P = P[order]
        x = P[1] - (P[1] @ z) * z
        x /= np.linalg.norm(x)
        y = np.cross(z, x)
        L = P @ np.column_stack([x, y, z])
        pol = np.arccos(np.clip(L[:, 2], -1.0, 1.0))
        az = np.arctan2(L[:, 1], L[:, 0])
        az[0] = 0.0
        pol[0] = 0.0
        az[1] = 0.0
        return cls(np.column_stack([az, pol]))


def _hull_measures(P):
    try:
        hull = ConvexHull(P)
    except (QhullError, ValueError):
        return None
    if hull.volume <= DEGENERATE_VOLUME:
        return None
    return hull


def evaluate_points(P, objective):
    """Objective value on the hull of ``P``; ``-inf`` when undefined."""
    obj = parse_objective(objective)
    hull = _hull_measures(P)
    if hull is None:
        return NEG_INF
    if obj.kind == "volume":
        return float(hull.volume)
    if obj.kind == "surface":
        return float(hull.area)
    if obj.kind == "sp" and obj.p == 0.0:
        return 3.0 * float(hull.volume)
    h = -hull.equations[:, 3]
    if np.any(h <= 0):
        return NEG_INF
    tri = P[hull.simplices]
    area = 0.5 * np.linalg.norm(np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]), axis=1)
    if obj.kind == "sp":
        return float(np.power(h, 1.0 - obj.p) @ area)
    return float(evaluate(obj.weight, h) @ area)


def objective(config, functional):
    return evaluate_points(config.points(), functional)


@dataclass
class OptimizerResult:
    best: Configuration
    value: float
    restarts: int
    trace: list = field(default_factory=list)
    wall_time: float = 0.0
    initial_value: float | None = None
    objective: str = ""

    @property
    def improvement(self):
        return None if self.initial_value is None else self.value - self.initial_value


def _nelder_mead(f, x0, maxiter, xtol, ftol, step):
    dim = len(x0)
    simplex = np.vstack([x0, x0 + step * np.eye(dim)])
    res = minimize(
        lambda x: -f(x),
        x0,
        method="Nelder-Mead",
        options=dict(maxiter=maxiter, xatol=xtol, fatol=ftol, adaptive=dim > 6,
                     initial_simplex=simplex),
    )
    return res.x, -float(res.fun), int(res.nit)


def _run_from(x0, k, obj, maxiter, xtol, ftol, step, polish=2):
    """Nelder-Mead from ``x0`` followed by restarts from its own optimum,
    which cures premature simplex collapse."""
    f = lambda x: evaluate_points(Configuration.from_params(x, k).points(), obj)  # noqa: E731
    x, val, its = _nelder_mead(f, x0, maxiter, xtol, ftol, step)
    for _ in range(polish):
        x2, val2, its2 = _nelder_mead(f, x, maxiter, xtol, ftol, min(step, 0.05))
        its += its2
        if val2 <= val + ftol:
            if val2 > val:
                x, val = x2, val2
            break
        x, val = x2, val2
    return x, val, its


def _random_start(k, obj, rng, tries=100):
    for _ in range(tries):
        P = rng.standard_normal((k, 3))
        cfg = Configuration.from_points(P)
        if math.isfinite(objective(cfg, obj)):
            return cfg
    return cfg


def optimize(k, functional, restarts=20, seed=0, maxiter=2000, xtol=1e-10, ftol=1e-12,
             workers=1):
    """Multistart Nelder-Mead maximization of ``functional`` over ``k`` points.

    Restart ``i`` draws its start from ``default_rng([seed, i])``, so the
    result depends only on the arguments, not on ``workers``.
    """
    if k < 4:
        raise UsageError("need at least 4 points for a solid")
    if restarts < 1:
        raise UsageError("need at least one restart")
    obj = parse_objective(functional)
    t0 = time.perf_counter()

    def one(i):
        rng = np.random.default_rng([seed, i])
        start = _random_start(k, obj, rng)
        x, val, its = _run_from(start.params(), k, obj, maxiter, xtol, ftol, step=0.3)
        return i, x, val, its

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(one, range(restarts)))
    else:
        runs = [one(i) for i in range(restarts)]

    best_x, best_val = None, NEG_INF
    trace = []
    for i, x, val, its in runs:
        trace.append({"restart": i, "seed": [seed, i], "iterations": its, "value": val})
        if val > best_val:
            best_x, best_val = x, val
    best = Configuration.from_params(best_x, k)
    return OptimizerResult(best, objective(best, obj), restarts, trace,
                           time.perf_counter() - t0, None, obj.label())


def local_refine(start, functional, maxiter=2000, xtol=1e-10, ftol=1e-12, step=0.01):
    """Single Nelder-Mead run from ``start`` (points or a Configuration)."""
    obj = parse_objective(functional)
    cfg = start if isinstance(start, Configuration) else Configuration.from_points(start)
    t0 = time.perf_counter()
    k = cfg.k
    init = objective(cfg, obj)
    f = lambda x: evaluate_points(Configuration.from_params(x, k).points(), obj)  # noqa: E731
    x, val, its = _nelder_mead(f, cfg.params(), maxiter, xtol, ftol, step)
    best = Configuration.from_params(x, k) if val > init else cfg
    value = objective(best, obj)
    trace = [{"restart": 0, "seed": None, "iterations": its, "value": value}]
    return OptimizerResult(best, value, 1, trace, time.perf_counter() - t0, init, obj.label())


# ---------------------------------------------------------------------------
# one-parameter families


def family_points(family, t, k=5):
    if family == "berman_hanes":
        return shapes.berman_hanes_vertices(t)
    if family == "bipyramid":
        return shapes.bipyramid_vertices(k, apex_polar=t)
    raise UsageError(f"unknown family {family!r}")


def central_difference(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2 * h)


def sweep(family, grid, functionals=("volume", "surface"), k=5):
    """Tabulate functionals along a one-parameter family.

    Returns the rows (dicts with ``param`` and one column per functional)
    and a report with the arg-max and monotonicity of each column.
    """
    objs = [parse_objective(s) for s in functionals]
    rows = []
    for t in grid:
        P = family_points(family, float(t), k)
        row = {"param": float(t)}
        for o in objs:
            row[o.label()] = evaluate_points(P, o)
        rows.append(row)
    report = {}
    for o in objs:
        col = np.array([r[o.label()] for r in rows])
        d = np.diff(col)
        report[o.label()] = {
            "argmax": float(rows[int(np.argmax(col))]["param"]),
            "max": float(col.max()),
            "increasing": bool(np.all(d > 0)),
            "decreasing": bool(np.all(d < 0)),
        }
    return rows, report


def counterexample_sweep(lo=0.58, hi=0.64, step=0.002, p_values=(0.5,)):
    """Volume, surface and S_p along the 8-vertex family around its volume
    maximizer, plus the headline numbers."""
    grid = np.round(np.arange(lo, hi + step / 2, step), 12)
    funcs = ["volume", "surface"] + [f"sp:{p:g}" for p in p_values]
    rows, report = sweep("berman_hanes", grid, funcs)
    vol = lambda t: evaluate_points(shapes.berman_hanes_vertices(t), "volume")  # noqa: E731
    surf = lambda t: evaluate_points(shapes.berman_hanes_vertices(t), "surface")  # noqa: E731
    headline = {
        "theta_star": shapes.THETA_STAR,
        "surface_at_theta_star": surf(shapes.THETA_STAR),
        "surface_at_0.62": surf(0.62),
        "volume_at_theta_star": vol(shapes.THETA_STAR),
        "volume_at_0.62": vol(0.62),
        "dV_dtheta_at_theta_star": central_difference(vol, shapes.THETA_STAR, 1e-5),
        "dS_dtheta_at_theta_star": central_difference(surf, shapes.THETA_STAR, 1e-5),
    }
    return rows, report, headline


# ---------------------------------------------------------------------------
# comparison of configurations


def _frame(P, i, j, sign):
    a = P[i]
    b = P[j] - (P[j] @ a) * a
    nb = np.linalg.norm(b)
    if nb < 1e-9:
        return None
    b = b / nb
    return np.column_stack([a, b, sign * np.cross(a, b)])


def configuration_distance(P1, P2):
    """Smallest max-vertex displacement between two point sets of the same
    size over all orthogonal maps aligning a vertex pair, with greedy vertex
    matching."""
    P1 = np.asarray(P1, float)
    P2 = np.asarray(P2, float)
    if P1.shape != P2.shape:
        return math.inf
    j1 = next(j for j in range(1, len(P1)) if _frame(P1, 0, j, 1) is not None)
    F1 = _frame(P1, 0, j1, 1)
    d01 = np.linalg.norm(P1[0] - P1[j1])
    best = math.inf
    for i in range(len(P2)):
        for j in range(len(P2)):
            if i == j or abs(np.linalg.norm(P2[i] - P2[j]) - d01) > 1e-2:
                continue
            for sign in (1, -1):
                F2 = _frame(P2, i, j, sign)
                if F2 is None:
                    continue
                M = P2 @ F2 @ F1.T  # maps P2[i] -> P1[0], P2[j] towards P1[j1]
                D = np.linalg.norm(P1[:, None, :] - M[None, :, :], axis=2)
                used = set()
                worst = 0.0
                for a in range(len(P1)):
                    order = np.argsort(D[a])
                    b = next(b for b in order if b not in used)
                    used.add(b)
                    worst = max(worst, D[a, b])
                best = min(best, worst)
    return best


def improvement_bound(P, objective_name):
    """Closed-form ceiling for volume and surface given the hull's counts."""
    from .inequalities import surface_upper_v_coef, volume_upper_v_coef

    Q = geo.convex_hull(P, 3)
    v = Q.n_vertices
    if objective_name == "volume":
        return volume_upper_v_coef(v)
    if objective_name == "surface":
        return surface_upper_v_coef(v)
    raise UsageError("bounds exist for volume and surface only")
