"""Plain-text point-set files.

Format: a header line ``dim n`` followed by one vertex per line with ``n``
whitespace-separated decimals.  Reals are written with 17 significant digits
so reading a file back reproduces the doubles exactly.
"""

from __future__ import annotations

import io

import numpy as np

from .errors import InvalidSpec


def fmt(x):
    return format(float(x), ".17g")


def dumps_points(points):
    P = np.atleast_2d(np.asarray(points, dtype=float))
    lines = [f"dim {P.shape[1]}"]
    lines += [" ".join(fmt(c) for c in row) for row in P]
    return "\n".join(lines) + "\n"


def write_points(path_or_file, points):
    text = dumps_points(points)
    if isinstance(path_or_file, io.TextIOBase):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w") as fh:
            fh.write(text)


def loads_points(text):
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or rows[0][0] != "dim" or len(rows[0]) != 2:
        raise InvalidSpec("point file must start with 'dim n'")
    try:
        n = int(rows[0][1])
        pts = [[float(tok) for tok in r] for r in rows[1:]]
    except ValueError as exc:
        raise InvalidSpec(f"malformed point file: {exc}") from None
    if any(len(r) != n for r in pts):
        raise InvalidSpec(f"every vertex line must have {n} coordinates")
    return n, np.array(pts, dtype=float).reshape(-1, n)


def read_points(path):
    with open(path) as fh:
        return loads_points(fh.read())
