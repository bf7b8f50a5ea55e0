"""Polytope construction and metric primitives.

Polytopes are built either as convex hulls of point sets in the plane or in
space, or directly as simplices in any dimension.  Every polytope carries its
facets as unit outer normals, offsets, areas and centroids, and in three
dimensions its edges with dihedral data.  All arrays stored on a ``Polytope``
are read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

from .errors import DegenerateInput, LpFailure, NonManifold, PointNotInterior
from .lp import simplex_max
from .miniball import circumball

COPLANAR_TOL = 1e-9
RANK_TOL = 1e-10
INSPHERE_TOL = 1e-7


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Facet:
    vertex_indices: tuple
    normal: np.ndarray
    offset: float
    area: float
    centroid: np.ndarray

    def distance(self, x):
        """Signed distance of ``x`` to the facet plane, positive inside."""
        return float(self.offset - self.normal @ np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Edge:
    endpoints: tuple
    length: float
    adjacent_facets: tuple
    dihedral: float
    exterior: float


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: np.ndarray
    facets: tuple
    edges: Optional[tuple] = None
    # derived arrays, filled in __post_init__
    normals: np.ndarray = field(init=False, repr=False, compare=False)
    offsets: np.ndarray = field(init=False, repr=False, compare=False)
    areas: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "normals", _frozen([f.normal for f in self.facets]))
        object.__setattr__(self, "offsets", _frozen([f.offset for f in self.facets]))
        object.__setattr__(self, "areas", _frozen([f.area for f in self.facets]))

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_facets(self):
        return len(self.facets)

    @property
    def n_edges(self):
        if self.edges is None:
            return None
        return len(self.edges)

    @property
    def vertex_centroid(self):
        return self.vertices.mean(axis=0)

    def counts(self):
        """``(v, e, f)``; ``e`` is ``None`` outside three dimensions."""
        return self.n_vertices, self.n_edges, self.n_facets

    def is_simplex(self):
        return self.n_vertices == self.dim + 1 and self.n_facets == self.dim + 1

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.normals @ x <= self.offsets + tol))


@dataclass(frozen=True)
class BallInfo:
    circumcenter: np.ndarray
    circumradius: float
    chebyshev_center: np.ndarray
    chebyshev_radius: float
    has_insphere: bool
    incenter: Optional[np.ndarray]


# ---------------------------------------------------------------------------
# construction


def _check_affine_rank(P, dim):
    if P.ndim != 2 or P.shape[1] != dim:
        raise DegenerateInput(f"expected points of dimension {dim}, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise DegenerateInput("non-finite coordinates")
    if len(P) < dim + 1:
        raise DegenerateInput(f"need at least {dim + 1} points, got {len(P)}")
    s = np.linalg.svd(P - P.mean(axis=0), compute_uv=False)
    if s[dim - 1] <= RANK_TOL * max(1.0, s[0]):
        raise DegenerateInput("points are affinely dependent")


def _orient_cycle(P, cycle, normal):
    """Sort the facet vertices counter-clockwise seen from outside and drop
    vertices lying on the interior of a polygon side."""
    pts = P[list(cycle)]
    c = pts.mean(axis=0)
    e1 = pts[0] - c
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    ang = np.arctan2((pts - c) @ e2, (pts - c) @ e1)
    ordered = [cycle[k] for k in np.argsort(ang, kind="stable")]
    keep = []
    m = len(ordered)
    for k in range(m):
        a, b, d = P[ordered[k - 1]], P[ordered[k]], P[ordered[(k + 1) % m]]
        turn = np.cross(b - a, d - b) @ normal
        if turn > COPLANAR_TOL * max(1.0, np.linalg.norm(b - a) * np.linalg.norm(d - b)):
            keep.append(ordered[k])
    return keep


def _polygon_plane(pts):
    """Newell normal, area and area centroid of a planar polygon in R^3."""
    nxt = np.roll(pts, -1, axis=0)
    vec = 0.5 * np.cross(pts, nxt).sum(axis=0)
    area = float(np.linalg.norm(vec))
    normal = vec / area
    # fan centroid
    a = pts[0]
    tri_c = (a + pts[1:-1] + pts[2:]) / 3.0
    tri_a = 0.5 * np.cross(pts[1:-1] - a, pts[2:] - a) @ normal
    centroid = (tri_a[:, None] * tri_c).sum(axis=0) / tri_a.sum()
    return normal, area, centroid


def _edge_angles(n1, n2):
    ext = math.atan2(float(np.linalg.norm(np.cross(n1, n2))), float(n1 @ n2))
    return math.pi - ext, ext


def _build_edges(P, facets):
    owners = {}
    for j, f in enumerate(facets):
        cyc = f.vertex_indices
        for k in range(len(cyc)):
            key = tuple(sorted((cyc[k], cyc[(k + 1) % len(cyc)])))
            owners.setdefault(key, []).append(j)
    edges = []
    for key in sorted(owners):
        adj = owners[key]
        if len(adj) != 2:
            raise NonManifold(f"edge {key} has {len(adj)} adjacent facets")
        dihedral, exterior = _edge_angles(facets[adj[0]].normal, facets[adj[1]].normal)
        length = float(np.linalg.norm(P[key[0]] - P[key[1]]))
        edges.append(Edge(key, length, tuple(adj), dihedral, exterior))
    return tuple(edges)


def _reindex(P, facet_cycles):
    """Keep only the vertices used by facets, preserving input order."""
    used = sorted({i for cyc in facet_cycles for i in cyc})
    remap = {old: new for new, old in enumerate(used)}
    return P[used], [[remap[i] for i in cyc] for cyc in facet_cycles]


def _assemble_3d(P, cycles):
    V, cycles = _reindex(P, cycles)
    interior = V.mean(axis=0)
    facets = []
    for cyc in cycles:
        pts = V[cyc]
        normal, area, centroid = _polygon_plane(pts)
        if normal @ (centroid - interior) < 0:
            cyc = cyc[::-1]
            normal, area, centroid = _polygon_plane(V[cyc])
        offset = float(np.mean(V[cyc] @ normal))
        facets.append(Facet(tuple(cyc), _frozen(normal), offset, area, _frozen(centroid)))
    facets = tuple(facets)
    return Polytope(3, _frozen(V), facets, _build_edges(V, facets))


def _hull_2d(P):
    order = sorted(range(len(P)), key=lambda i: (P[i, 0], P[i, 1]))

    def cross(o, a, b):
        return (P[a, 0] - P[o, 0]) * (P[b, 1] - P[o, 1]) - (P[a, 1] - P[o, 1]) * (P[b, 0] - P[o, 0])

    def chain(idx):
        out = []
        for i in idx:
            while len(out) >= 2 and cross(out[-2], out[-1], i) <= COPLANAR_TOL:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(order[::-1])
    ccw = lower[:-1] + upper[:-1]
    if len(ccw) < 3:
        raise DegenerateInput("points are collinear")
    V, (ccw,) = _reindex(P, [ccw])
    facets = []
    for k in range(len(ccw)):
        i, j = ccw[k], ccw[(k + 1) % len(ccw)]
        d = V[j] - V[i]
        length = float(np.linalg.norm(d))
        normal = np.array([d[1], -d[0]]) / length
        offset = float(0.5 * (normal @ V[i] + normal @ V[j]))
        facets.append(Facet((i, j), _frozen(normal), offset, length, _frozen(0.5 * (V[i] + V[j]))))
    return Polytope(2, _frozen(V), tuple(facets), None)


def _hull_3d(P):
    # lexicographic insertion order makes the triangulation reproducible
    order = np.lexsort(P.T[::-1])
    try:
        hull = ConvexHull(P[order])
    except QhullError as exc:
        raise DegenerateInput(f"hull construction failed: {exc}") from None
    simplices = order[hull.simplices]
    eqs = hull.equations
    groups = []  # (normal, offset, vertex set)
    for tri, eq in zip(simplices, eqs):
        nrm, off = eq[:3], -eq[3]
        for g in groups:
            if np.max(np.abs(g[0] - nrm)) <= COPLANAR_TOL and abs(g[1] - off) <= COPLANAR_TOL:
                g[2].update(int(i) for i in tri)
                break
        else:
            groups.append((nrm, off, {int(i) for i in tri}))
    cycles = []
    for nrm, _, verts in groups:
        cyc = _orient_cycle(P, sorted(verts), nrm)
        if len(cyc) < 3:
            raise DegenerateInput("facet collapsed while merging coplanar triangles")
        cycles.append(cyc)
    return _assemble_3d(P, cycles)


def convex_hull(points, dim=None):
    """Convex hull of a point set in the plane or in space.

    Coplanar triangles are merged into polygonal facets and the outer normals
    point away from the vertex centroid.  Vertices keep the relative order in
    which they appear in ``points``.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    dim = P.shape[1] if dim is None else dim
    if dim not in (2, 3):
        raise DegenerateInput("convex_hull supports dimensions 2 and 3; use simplex_from_vertices")
    _check_affine_rank(P, dim)
    return _hull_2d(P) if dim == 2 else _hull_3d(P)


def simplex_from_vertices(points):
    """Simplex with the given ``n + 1`` vertices in ``R^n``.

    Facet areas come from Gram determinants of the facet edge vectors, so
    this works in any dimension.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    n = P.shape[1]
    if P.shape[0] != n + 1:
        raise DegenerateInput(f"a simplex in R^{n} needs {n + 1} vertices, got {P.shape[0]}")
    _check_affine_rank(P, n)
    facets = []
    for i in range(n + 1):
        idx = [k for k in range(n + 1) if k != i]
        F = P[idx]
        E = F[1:] - F[0]
        normal = np.linalg.svd(E)[2][-1] if n > 1 else np.array([1.0])
        if normal @ (P[i] - F[0]) > 0:
            normal = -normal
        area = math.sqrt(max(np.linalg.det(E @ E.T), 0.0)) / math.factorial(n - 1)
        if n == 3:
            a, b, c = F
            if np.cross(b - a, c - a) @ normal < 0:
                idx = [idx[0], idx[2], idx[1]]
        elif n == 2 and np.array([-normal[1], normal[0]]) @ (F[1] - F[0]) < 0:
            idx = idx[::-1]
        offset = float(np.mean(F @ normal))
        facets.append(Facet(tuple(idx), _frozen(normal), offset, area, _frozen(F.mean(axis=0))))
    facets = tuple(facets)
    edges = _build_edges(P, facets) if n == 3 else None
    return Polytope(n, _frozen(P), facets, edges)


# ---------------------------------------------------------------------------
# measurements


def facet_heights(Q, origin=None):
    """Distances from ``origin`` to every facet plane, with the facet areas.

    Returns
    -------
    h, areas : ndarray
        ``h[j] = offset_j - <normal_j, origin>``.

    Raises
    ------
    PointNotInterior
        If any height is not strictly positive.
    """
    x = np.zeros(Q.dim) if origin is None else np.asarray(origin, dtype=float)
    h = Q.offsets - Q.normals @ x
    if np.any(h <= 0):
        raise PointNotInterior(f"point {x.tolist()} is not strictly inside the polytope")
    return h, Q.areas


def volume(Q, base_point=None):
    """Volume by the cone-volume formula from ``base_point``.

    Defaults to the vertex centroid; any interior point gives the same value.
    """
    x = Q.vertex_centroid if base_point is None else base_point
    h, a = facet_heights(Q, x)
    return float(h @ a) / Q.dim


def surface_area(Q):
    return float(np.sum(Q.areas))


def chebyshev_center(Q):
    """Largest inscribed ball via a dense simplex LP.

    Returns
    -------
    center, radius, has_insphere, incenter
        ``incenter`` is ``center`` when every facet constraint is active at
        the optimum, otherwise ``None``.
    """
    A, b = Q.normals, Q.offsets
    n = Q.dim
    c0 = Q.vertex_centroid
    b0 = b - A @ c0
    if np.any(b0 <= 0):
        raise LpFailure("vertex centroid is not interior; polytope is malformed")
    # x = c0 + u - v with u, v >= 0; last variable is the radius
    M = np.hstack([A, -A, np.ones((len(b), 1))])
    cost = np.zeros(2 * n + 1)
    cost[-1] = 1.0
    sol, r = simplex_max(cost, M, b0)
    x = c0 + sol[:n] - sol[n:2 * n]
    slack = b - A @ x - r
    active = slack <= INSPHERE_TOL * max(1.0, r)
    if active.sum() >= n + 1:
        # polish on the active set; the tableau answer is already feasible
        Aa = np.hstack([A[active], np.ones((active.sum(), 1))])
        y = np.linalg.lstsq(Aa, b[active], rcond=None)[0]
        if np.all(b - A @ y[:n] - y[n] >= -1e-12):
            x, r = y[:n], float(y[n])
            slack = b - A @ x - r
    if r <= 0:
        raise LpFailure("non-positive inradius")
    has_insphere = bool(np.all(slack <= INSPHERE_TOL * max(1.0, r)))
    x = _frozen(x)
    return x, float(r), has_insphere, (x if has_insphere else None)


def simplex_circumradius(Q):
    """Radius of the sphere through all vertices of a simplex."""
    P = Q.vertices
    U = P[1:] - P[0]
    y = np.linalg.solve(2 * U, np.einsum("ij,ij->i", U, U))
    return float(np.linalg.norm(y)), P[0] + y


def ball_info(Q):
    center, R = circumball(Q.vertices)
    cc, r, ins, inc = chebyshev_center(Q)
    return BallInfo(_frozen(center), float(R), cc, r, ins, inc)


def edges_with_angles(Q):
    if Q.dim != 3:
        raise ValueError("edges are only tracked for polytopes in R^3")
    return Q.edges


# ---------------------------------------------------------------------------
# faces


def faces(Q, k):
    """Vertex-index tuples of the ``k``-faces for ``k`` in ``{0, 1, n-1}``."""
    if k == 0:
        return [(i,) for i in range(Q.n_vertices)]
    if k == Q.dim - 1:
        return [f.vertex_indices for f in Q.facets]
    if k == 1 and Q.dim == 3:
        return [e.endpoints for e in Q.edges]
    from .errors import UnsupportedFaceDim

    raise UnsupportedFaceDim(f"{k}-faces are not tracked in dimension {Q.dim}")


def face_volume(Q, k, index):
    if k == 0:
        return 1.0
    if k == Q.dim - 1:
        return float(Q.facets[index].area)
    e = Q.edges[index]
    return e.length


def _dist_to_simplex(S, x):
    """Distance from ``x`` to the convex hull of affinely independent rows of ``S``."""
    if len(S) == 1:
        return float(np.linalg.norm(x - S[0]))
    E = (S[1:] - S[0]).T
    coef = np.linalg.lstsq(E, x - S[0], rcond=None)[0]
    bary = np.concatenate([[1 - coef.sum()], coef])
    if np.all(bary >= -1e-15):
        return float(np.linalg.norm(x - S[0] - E @ coef))
    return min(_dist_to_simplex(np.delete(S, i, axis=0), x) for i in range(len(S)))


def _in_polygon(pts, normal, y, tol=1e-9):
    """Boundary-inclusive containment of ``y`` (already in the plane) in a
    counter-clockwise convex polygon."""
    m = len(pts)
    for k in range(m):
        a, b = pts[k], pts[(k + 1) % m]
        if np.cross(b - a, y - a) @ normal < -tol * max(1.0, np.linalg.norm(b - a)):
            return False
    return True


def face_distance(Q, k, index, x):
    """Distance from ``x`` to the closest point of the face itself."""
    x = np.asarray(x, dtype=float)
    verts = Q.vertices[list(faces(Q, k)[index])]
    if Q.dim == 3 and k == 2 and len(verts) > 3:
        f = Q.facets[index]
        foot = x - (f.normal @ x - f.offset) * f.normal
        if _in_polygon(verts, f.normal, foot):
            return abs(f.offset - f.normal @ x)
        m = len(verts)
        return min(_dist_to_simplex(verts[[i, (i + 1) % m]], x) for i in range(m))
    return _dist_to_simplex(verts, x)


def foot_condition(Q):
    """True iff the circumcenter projects into every facet (boundary counts)."""
    if Q.dim != 3:
        raise ValueError("the foot condition is defined for polytopes in R^3")
    c, _ = circumball(Q.vertices)
    for f in Q.facets:
        foot = c - (f.normal @ c - f.offset) * f.normal
        if not _in_polygon(Q.vertices[list(f.vertex_indices)], f.normal, foot):
            return False
    return True
