"""Small dense simplex solver.

Only what the Chebyshev-center problem needs: maximize ``c @ x`` subject to
``A @ x <= b`` and ``x >= 0`` with ``b >= 0``, so the origin is a feasible
starting basis and a single phase suffices.  Bland's rule keeps the highly
degenerate optima of symmetric polytopes (every constraint active) from
cycling.
"""

from __future__ import annotations

import numpy as np

from .errors import LpFailure

PIVOT_TOL = 1e-12


def simplex_max(c, A, b, max_iter=10_000):
    """Solve ``max c.x  s.t.  A x <= b, x >= 0`` for ``b >= 0``.

    Parameters
    ----------
    c : (n,) array_like
    A : (m, n) array_like
    b : (m,) array_like, non-negative

    Returns
    -------
    x : (n,) ndarray
        An optimal vertex.
    value : float
        The optimal objective value.

    Raises
    ------
    LpFailure
        If ``b`` has negative entries, the problem is unbounded, or the
        iteration cap is hit.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if np.any(b < 0):
        raise LpFailure("origin is not feasible (negative right-hand side)")

    # tableau rows: constraints with slacks, last row holds reduced costs
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -c
    basis = list(range(n, n + m))

    for _ in range(max_iter):
        reduced = T[m, :-1]
        entering = next((j for j in range(n + m) if reduced[j] < -PIVOT_TOL), None)
        if entering is None:
            break
        col = T[:m, entering]
        rows = [i for i in range(m) if col[i] > PIVOT_TOL]
        if not rows:
            raise LpFailure("linear program is unbounded")
        ratios = [T[i, -1] / col[i] for i in rows]
        best = min(ratios)
        # Bland: among tied ratios, leave with the smallest basic index
        tied = [i for i, q in zip(rows, ratios) if q <= best + PIVOT_TOL * max(1.0, abs(best))]
        leaving = min(tied, key=lambda i: basis[i])
        T[leaving] /= T[leaving, entering]
        for i in range(m + 1):
            if i != leaving and T[i, entering] != 0.0:
                T[i] -= T[i, entering] * T[leaving]
        basis[leaving] = entering
    else:
        raise LpFailure(f"simplex did not converge in {max_iter} pivots")

    x = np.zeros(n + m)
    for i, j in enumerate(basis):
        x[j] = T[i, -1]
    return x[:n], float(c @ x[:n])
