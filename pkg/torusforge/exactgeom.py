"""
torusforge.exactgeom
--------------------
Exact integer predicates on lattice points.

All predicates work with Python integers and are therefore exact. Inputs
are points with integer coordinates bounded in absolute value by
`COORD_BOUND`; larger coordinates raise `OverflowError` rather than
silently switching to a different arithmetic.

The public functions validate their arguments. Names with a leading
underscore assume tuples of ints that have already been checked and are
used in the inner loops of the search and the local optimizer.
"""

from typing import Hashable, Mapping, Sequence, Tuple

import numpy as np

Point3 = Tuple[int, int, int]

COORD_BOUND = 1 << 19


def as_point(p) -> Point3:
    """
    Convert a length-3 sequence of integers (python or numpy) to a
    checked `Point3`.
    """
    if len(p) != 3:
        raise ValueError(f'expected a point with 3 coordinates, got {p!r}')
    q = []
    for x in p:
        if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
            raise ValueError(f'coordinates must be integers, got {p!r}')
        x = int(x)
        if abs(x) > COORD_BOUND:
            raise OverflowError(f'coordinate {x} exceeds the bound {COORD_BOUND}')
        q.append(x)
    return tuple(q)


# Private arithmetic on checked tuples

def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _orient(a, b, c, d):
    ax, ay, az = a
    bx, by, bz = b[0] - ax, b[1] - ay, b[2] - az
    cx, cy, cz = c[0] - ax, c[1] - ay, c[2] - az
    dx, dy, dz = d[0] - ax, d[1] - ay, d[2] - az
    det = (bx * (cy * dz - cz * dy)
           - by * (cx * dz - cz * dx)
           + bz * (cx * dy - cy * dx))
    return (det > 0) - (det < 0)


def _collinear(a, b, c):
    return _cross(_sub(b, a), _sub(c, a)) == (0, 0, 0)


def _normal(a, b, c):
    return _cross(_sub(b, a), _sub(c, a))


def _drop_axis(normal):
    # coordinate axis along which the plane projects injectively
    m = [abs(x) for x in normal]
    return m.index(max(m))


def _line_drop_axis(direction):
    m = [abs(x) for x in direction]
    return m.index(min(m))


def _proj(p, axis):
    if axis == 0:
        return (p[1], p[2])
    if axis == 1:
        return (p[0], p[2])
    return (p[0], p[1])


def _orient2d(a, b, c):
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (det > 0) - (det < 0)


def _between_2d(p, a, b):
    # p is collinear with a, b
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and
            min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _segments_meet_2d(p1, p2, q1, q2):
    """Closed segments p1p2 and q1q2 in the plane share a point."""
    o1 = _orient2d(p1, p2, q1)
    o2 = _orient2d(p1, p2, q2)
    o3 = _orient2d(q1, q2, p1)
    o4 = _orient2d(q1, q2, p2)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _between_2d(q1, p1, p2):
        return True
    if o2 == 0 and _between_2d(q2, p1, p2):
        return True
    if o3 == 0 and _between_2d(p1, q1, q2):
        return True
    if o4 == 0 and _between_2d(p2, q1, q2):
        return True
    return False


def _in_triangle_2d(p, a, b, c):
    o1 = _orient2d(a, b, p)
    o2 = _orient2d(b, c, p)
    o3 = _orient2d(c, a, p)
    return ((o1 >= 0 and o2 >= 0 and o3 >= 0) or
            (o1 <= 0 and o2 <= 0 and o3 <= 0))


def _common_plane_axis(points):
    """
    Projection axis for a set of coplanar points that are not all
    equal. Falls back to a line projection when they are collinear.
    """
    a = points[0]
    rest = [p for p in points[1:] if p != a]
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            n = _cross(_sub(rest[i], a), _sub(rest[j], a))
            if n != (0, 0, 0):
                return _drop_axis(n)
    return _line_drop_axis(_sub(rest[0], a))


def _strictly_inside_segment(p, a, b):
    """p lies in the relative interior of segment ab (a != b)."""
    if p == a or p == b or not _collinear(a, b, p):
        return False
    return _dot(_sub(p, a), _sub(p, b)) < 0


def _segments_compatible(p1, p2, q1, q2):
    shared = {p1, p2} & {q1, q2}
    if len(shared) == 2:
        return False
    if len(shared) == 1:
        s = shared.pop()
        p = p2 if p1 == s else p1
        q = q2 if q1 == s else q1
        if not _collinear(s, p, q):
            return True
        # collinear through s: overlap unless they leave s in opposite directions
        return _dot(_sub(p, s), _sub(q, s)) < 0
    if _orient(p1, p2, q1, q2) != 0:
        return True
    axis = _common_plane_axis((p1, p2, q1, q2))
    return not _segments_meet_2d(_proj(p1, axis), _proj(p2, axis),
                                 _proj(q1, axis), _proj(q2, axis))


def _segment_hits_triangle(p, q, a, b, c):
    """Closed segment pq meets the closed (non-degenerate) triangle abc."""
    op = _orient(a, b, c, p)
    oq = _orient(a, b, c, q)
    if op * oq > 0:
        return False
    if op == 0 and oq == 0:
        axis = _drop_axis(_normal(a, b, c))
        P, Q = _proj(p, axis), _proj(q, axis)
        A, B, C = _proj(a, axis), _proj(b, axis), _proj(c, axis)
        if _in_triangle_2d(P, A, B, C) or _in_triangle_2d(Q, A, B, C):
            return True
        return (_segments_meet_2d(P, Q, A, B) or
                _segments_meet_2d(P, Q, B, C) or
                _segments_meet_2d(P, Q, C, A))
    s1 = _orient(p, q, a, b)
    s2 = _orient(p, q, b, c)
    s3 = _orient(p, q, c, a)
    return ((s1 >= 0 and s2 >= 0 and s3 >= 0) or
            (s1 <= 0 and s2 <= 0 and s3 <= 0))


def _leaves_through_triangle(s, v, c1, c2):
    """
    Segment sv meets the triangle (s, c1, c2) in more than the common
    vertex s.
    """
    if _orient(s, c1, c2, v) != 0:
        return False
    axis = _drop_axis(_normal(s, c1, c2))
    S, V = _proj(s, axis), _proj(v, axis)
    C1, C2 = _proj(c1, axis), _proj(c2, axis)
    o = _orient2d(S, C1, C2)
    return _orient2d(S, C1, V) * o >= 0 and _orient2d(S, V, C2) * o >= 0


def _triangles_compatible(P, Q, k):
    """
    Kernel on coordinate triples ordered with the `k` shared vertices
    first, in the same order in both triples.
    """
    if k == 2:
        a, b, p = P
        q = Q[2]
        if _orient(a, b, p, q) != 0:
            return True
        axis = _drop_axis(_normal(a, b, p))
        A, B = _proj(a, axis), _proj(b, axis)
        return _orient2d(A, B, _proj(p, axis)) * _orient2d(A, B, _proj(q, axis)) < 0
    if k == 1:
        s, a, b = P
        c, d = Q[1], Q[2]
        if _segment_hits_triangle(a, b, s, c, d) or _segment_hits_triangle(c, d, s, a, b):
            return False
        if (_leaves_through_triangle(s, a, c, d) or
            _leaves_through_triangle(s, b, c, d) or
            _leaves_through_triangle(s, c, a, b) or
            _leaves_through_triangle(s, d, a, b)):
            return False
        return True
    for i in range(3):
        u, v = P[i], P[(i + 1) % 3]
        if _segment_hits_triangle(u, v, *Q):
            return False
    for i in range(3):
        u, v = Q[i], Q[(i + 1) % 3]
        if _segment_hits_triangle(u, v, *P):
            return False
    return True


# Public predicates

def orient3d(a: Sequence[int],
             b: Sequence[int],
             c: Sequence[int],
             d: Sequence[int]) -> int:
    """
    Sign of det[b-a, c-a, d-a].

    Returns
    -------
    sign : int
        One of -1, 0, +1. Zero iff the four points are coplanar.
    """
    return _orient(as_point(a), as_point(b), as_point(c), as_point(d))


def collinear(a: Sequence[int],
              b: Sequence[int],
              c: Sequence[int]) -> bool:
    """True iff (b-a) x (c-a) is the zero vector."""
    return _collinear(as_point(a), as_point(b), as_point(c))


def segments_compatible(s1: Sequence[Sequence[int]],
                        s2: Sequence[Sequence[int]]) -> bool:
    """
    Two closed segments are compatible if they are disjoint or meet in
    exactly one common endpoint.

    Parameters
    ----------
    s1, s2 : pair of points
        Endpoints of each segment. Endpoints must differ.

    Examples
    --------
    >>> segments_compatible(((0,0,0),(2,0,0)), ((1,-1,0),(1,1,0)))
    False
    >>> segments_compatible(((0,0,0),(1,0,0)), ((0,0,0),(0,1,0)))
    True
    """
    p1, p2 = (as_point(p) for p in s1)
    q1, q2 = (as_point(p) for p in s2)
    if p1 == p2 or q1 == q2:
        raise ValueError('segment endpoints must be distinct')
    return _segments_compatible(p1, p2, q1, q2)


def _check_triangle(tri: Mapping[Hashable, Sequence[int]]):
    if len(tri) != 3:
        raise ValueError('a triangle has exactly 3 labelled vertices')
    checked = {k: as_point(p) for k, p in tri.items()}
    a, b, c = checked.values()
    if _collinear(a, b, c):
        raise ValueError(f'degenerate triangle {tuple(checked.values())}')
    return checked


def _ordered_shared_first(t1, t2, shared):
    shared = sorted(shared, key=repr)
    rest1 = sorted((k for k in t1 if k not in shared), key=repr)
    rest2 = sorted((k for k in t2 if k not in shared), key=repr)
    P = tuple(t1[k] for k in shared + rest1)
    Q = tuple(t2[k] for k in shared + rest2)
    return P, Q


def triangles_compatible(t1: Mapping[Hashable, Sequence[int]],
                         t2: Mapping[Hashable, Sequence[int]],
                         shared=None) -> bool:
    """
    Decide whether two vertex-labelled triangles intersect exactly in
    the convex hull of their shared vertices.

    Parameters
    ----------
    t1, t2 : mapping
        Vertex label to point, three entries each. The triangles must be
        non-degenerate.
    shared : iterable, optional
        Labels common to both triangles. Computed from the keys when
        omitted. At most two labels may be shared.

    Returns
    -------
    compatible : bool
    """
    t1 = _check_triangle(t1)
    t2 = _check_triangle(t2)
    common = set(t1) & set(t2)
    if shared is not None and set(shared) != common:
        raise ValueError(f'shared labels {sorted(shared, key=repr)} do not match the triangles')
    if len(common) == 3:
        raise ValueError('triangles share all three vertices')
    P, Q = _ordered_shared_first(t1, t2, common)
    return _triangles_compatible(P, Q, len(common))


def segment_triangle_compatible(seg: Mapping[Hashable, Sequence[int]],
                                tri: Mapping[Hashable, Sequence[int]],
                                shared=None) -> bool:
    """
    A labelled segment and a labelled triangle are compatible if they
    meet exactly in the convex hull of their shared labels.
    """
    tri = _check_triangle(tri)
    if len(seg) != 2:
        raise ValueError('a segment has exactly 2 labelled endpoints')
    seg = {k: as_point(p) for k, p in seg.items()}
    p, q = seg.values()
    if p == q:
        raise ValueError('segment endpoints must be distinct')
    common = set(seg) & set(tri)
    if shared is not None and set(shared) != common:
        raise ValueError('shared labels do not match the segment and triangle')
    if len(common) == 2:
        return True
    if len(common) == 1:
        (s,) = common
        v = next(seg[k] for k in seg if k != s)
        c1, c2 = (tri[k] for k in tri if k != s)
        return not _leaves_through_triangle(tri[s], v, c1, c2)
    return not _segment_hits_triangle(p, q, *tri.values())


def point_in_segment_interior(p: Sequence[int],
                              a: Sequence[int],
                              b: Sequence[int]) -> bool:
    """True iff `p` lies strictly between the distinct points `a` and `b`."""
    a, b = as_point(a), as_point(b)
    if a == b:
        raise ValueError('segment endpoints must be distinct')
    return _strictly_inside_segment(as_point(p), a, b)


# Vectorized variants for chirotopes and general position checks

def _check_array(points):
    P = np.asarray(points, dtype=np.int64)
    if P.size and np.abs(P).max() > COORD_BOUND:
        raise OverflowError(f'coordinates exceed the bound {COORD_BOUND}')
    return P


def orient3d_many(quadruples) -> np.ndarray:
    """
    Orientation signs of many quadruples at once.

    Parameters
    ----------
    quadruples : array-like of shape (m, 4, 3)

    Returns
    -------
    signs : np.ndarray of shape (m,), dtype int8
    """
    Q = _check_array(quadruples)
    u = Q[:, 1] - Q[:, 0]
    v = Q[:, 2] - Q[:, 0]
    w = Q[:, 3] - Q[:, 0]
    # differences are at most 2^20, so the determinant fits in int64
    det = (u[:, 0] * (v[:, 1] * w[:, 2] - v[:, 2] * w[:, 1])
           - u[:, 1] * (v[:, 0] * w[:, 2] - v[:, 2] * w[:, 0])
           + u[:, 2] * (v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]))
    return np.sign(det).astype(np.int8)


def collinear_many(triples) -> np.ndarray:
    """Collinearity of many triples, array of shape (m, 3, 3)."""
    T = _check_array(triples)
    return ~np.any(np.cross(T[:, 1] - T[:, 0], T[:, 2] - T[:, 0]), axis=1)
