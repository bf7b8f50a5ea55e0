"""Registry of admissible weight functions.

Each weight is positive on ``(0, inf)`` and declares whether it is concave,
convex or affine, and its monotonicity.  The inequality checks read the
declaration to decide which way a bound points, and ``classify`` verifies the
declaration numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InadmissibleParams, ShapeMismatch, UsageError

CONCAVE, CONVEX, AFFINE = "concave", "convex", "affine"
INCREASING, DECREASING, NEITHER = "increasing", "decreasing", "neither"

FAMILIES = ("power", "affine", "log1p", "sqrtshift", "exp", "reciprocal")


@dataclass(frozen=True)
class WeightFunction:
    family: str
    params: tuple
    shape: str
    monotonicity: str

    @property
    def is_affine(self):
        return self.shape == AFFINE

    @property
    def is_concave(self):
        return self.shape in (CONCAVE, AFFINE)

    @property
    def is_convex(self):
        return self.shape in (CONVEX, AFFINE)

    @property
    def is_increasing(self):
        return self.monotonicity == INCREASING

    def __call__(self, t):
        return evaluate(self, t)

    def label(self):
        return f"{self.family}:" + ",".join(format(p, "g") for p in self.params)


def _power_meta(q):
    if q in (0.0, 1.0):
        shape = AFFINE
    elif 0.0 < q < 1.0:
        shape = CONCAVE
    else:
        shape = CONVEX
    mono = INCREASING if q > 0 else DECREASING if q < 0 else NEITHER
    return shape, mono


def make_weight(family, *params):
    """Build a registry weight, validating its parameters.

    ``power(q)``: t**q.  ``affine(a, b)``: a + b*t with a, b >= 0.
    ``log1p(s)``: log(1 + s*t), s > 0.  ``sqrtshift(c)``: sqrt(t + c), c >= 0.
    ``exp(k)``: exp(k*t), k > 0.  ``reciprocal(c)``: 1/(t + c), c >= 0.
    """
    family = family.lower()
    params = tuple(float(p) for p in params)
    arity = {"affine": 2}.get(family, 1)
    if family not in FAMILIES:
        raise InadmissibleParams(f"unknown weight family {family!r}")
    if len(params) != arity:
        raise InadmissibleParams(f"{family} takes {arity} parameter(s), got {len(params)}")
    if not all(math.isfinite(p) for p in params):
        raise InadmissibleParams("parameters must be finite")

    if family == "power":
        shape, mono = _power_meta(params[0])
    elif family == "affine":
        a, b = params
        if a < 0 or b < 0 or (a == 0 and b == 0):
            raise InadmissibleParams("affine needs a >= 0, b >= 0, not both zero")
        shape, mono = AFFINE, INCREASING if b > 0 else NEITHER
    elif family == "log1p":
        if params[0] <= 0:
            raise InadmissibleParams("log1p scale must be positive")
        shape, mono = CONCAVE, INCREASING
    elif family == "sqrtshift":
        if params[0] < 0:
            raise InadmissibleParams("sqrtshift offset must be non-negative")
        shape, mono = CONCAVE, INCREASING
    elif family == "exp":
        if params[0] <= 0:
            raise InadmissibleParams("exp rate must be positive")
        shape, mono = CONVEX, INCREASING
    else:
        if params[0] < 0:
            raise InadmissibleParams("reciprocal shift must be non-negative")
        shape, mono = CONVEX, DECREASING
    return WeightFunction(family, params, shape, mono)


def _raw(w, t):
    f, p = w.family, w.params
    if f == "power":
        return np.power(t, p[0])
    if f == "affine":
        return p[0] + p[1] * t
    if f == "log1p":
        return np.log1p(p[0] * t)
    if f == "sqrtshift":
        return np.sqrt(t + p[0])
    if f == "exp":
        return np.exp(p[0] * t)
    return 1.0 / (t + p[0])


def evaluate(w, t):
    """Evaluate ``w`` at ``t > 0`` (scalar or array)."""
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"weights are defined on (0, inf); got {t!r}")
    out = _raw(w, arr)
    return float(out) if out.ndim == 0 else out


def classify(w, interval=(1e-3, 10.0), samples=64):
    """Numerically classify shape and monotonicity on an equispaced grid.

    Raises ``ShapeMismatch`` when the result disagrees with the declaration.
    """
    lo, hi = interval
    if not 0 < lo < hi or samples < 16:
        raise UsageError("classify needs 0 < lo < hi and at least 16 samples")
    x = np.linspace(lo, hi, samples)
    y = evaluate(w, x)
    scale = float(np.max(np.abs(y)))
    tol = 1e-10 * scale
    d1 = np.diff(y)
    d2 = y[:-2] - 2 * y[1:-1] + y[2:]
    if np.all(np.abs(d2) <= tol):
        shape = AFFINE
    elif np.all(d2 <= tol):
        shape = CONCAVE
    elif np.all(d2 >= -tol):
        shape = CONVEX
    else:
        shape = "neither"
    if np.all(np.abs(d1) <= tol):
        mono = NEITHER
    elif np.all(d1 > 0):
        mono = INCREASING
    elif np.all(d1 < 0):
        mono = DECREASING
    else:
        mono = NEITHER
    if shape != w.shape or mono != w.monotonicity:
        raise ShapeMismatch(
            f"{w.label()} declared {w.shape}/{w.monotonicity}, measured {shape}/{mono}"
        )
    return shape, mono


def parse_weight(text):
    """Parse ``family:p1[,p2]`` as used on the command line."""
    family, sep, rest = text.partition(":")
    if not sep or not rest:
        raise UsageError(f"weight spec must look like family:params, got {text!r}")
    if family.lower() not in FAMILIES:
        raise UsageError(f"unknown weight family {family!r}; choose from {', '.join(FAMILIES)}")
    try:
        params = [float(tok) for tok in rest.split(",")]
    except ValueError:
        raise UsageError(f"bad weight parameters in {text!r}") from None
    try:
        return make_weight(family, *params)
    except InadmissibleParams as exc:
        raise UsageError(str(exc)) from None


def power(q):
    return make_weight("power", q)


DEFAULT_WEIGHTS = (
    "power:0.5",
    "log1p:1",
    "sqrtshift:1",
    "affine:1,2",
    "exp:1",
    "reciprocal:1",
)


def default_weights():
    return [parse_weight(s) for s in DEFAULT_WEIGHTS]
