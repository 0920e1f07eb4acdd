"""
Brute-force intersection of closed triangles with rational arithmetic.

Two triangles are compatible when their intersection lies in the convex
hull of the points they have in common. The intersection is computed
explicitly: the first triangle is cut by the plane of the second and
the result clipped against the edges of the second, by interval
clipping for a transversal cut and by polygon clipping when the
triangles are coplanar.
"""

from fractions import Fraction


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _lerp(p, q, t):
    return tuple(a + t * (b - a) for a, b in zip(p, q))


def _constraints(T):
    """Pairs (u, w) with x in the plane of T inside T iff (x - u).w >= 0 for all."""
    a, b, c = T
    n = _cross(_sub(b, a), _sub(c, a))
    return [(u, _cross(n, _sub(v, u))) for u, v in ((a, b), (b, c), (c, a))]


def _clip_polygon(polygon, constraints):
    for u, w in constraints:
        clipped = []
        for i, cur in enumerate(polygon):
            nxt = polygon[(i + 1) % len(polygon)]
            fc = _dot(_sub(cur, u), w)
            fn = _dot(_sub(nxt, u), w)
            if fc >= 0:
                clipped.append(cur)
            if fc * fn < 0:
                clipped.append(_lerp(cur, nxt, Fraction(fc, fc - fn)))
        polygon = clipped
        if not polygon:
            break
    return polygon


def _clip_segment(p0, p1, constraints):
    lo, hi = Fraction(0), Fraction(1)
    d = _sub(p1, p0)
    for u, w in constraints:
        alpha = _dot(_sub(p0, u), w)
        beta = _dot(d, w)
        if beta == 0:
            if alpha < 0:
                return []
        elif beta > 0:
            lo = max(lo, Fraction(-alpha) / beta)
        else:
            hi = min(hi, Fraction(-alpha) / beta)
    if lo > hi:
        return []
    return [_lerp(p0, p1, lo), _lerp(p0, p1, hi)]


def intersection_points(T1, T2):
    """Extreme points (possibly repeated) of the intersection of two closed triangles."""
    T1 = [tuple(Fraction(x) for x in p) for p in T1]
    T2 = [tuple(Fraction(x) for x in p) for p in T2]
    a, b, c = T2
    n = _cross(_sub(b, a), _sub(c, a))
    h = _dot(n, a)
    s = [_dot(n, p) - h for p in T1]
    constraints = _constraints(T2)
    if all(x == 0 for x in s):
        return _clip_polygon(list(T1), constraints)
    cut = [T1[i] for i in range(3) if s[i] == 0]
    for i, j in ((0, 1), (1, 2), (2, 0)):
        if s[i] * s[j] < 0:
            cut.append(_lerp(T1[i], T1[j], s[i] / (s[i] - s[j])))
    if not cut:
        return []
    if len(cut) == 1:
        p = cut[0]
        return [p] if all(_dot(_sub(p, u), w) >= 0 for u, w in constraints) else []
    return _clip_segment(cut[0], cut[1], constraints)


def _in_hull(q, S):
    if not S:
        return False
    if len(S) == 1:
        return q == S[0]
    a, b = S
    return _cross(_sub(q, a), _sub(b, a)) == (0, 0, 0) and _dot(_sub(q, a), _sub(q, b)) <= 0


def oracle_compatible(T1, T2):
    """Compatibility of two triangles whose common vertices are their common points."""
    shared = [tuple(Fraction(x) for x in p) for p in T1 if tuple(p) in {tuple(q) for q in T2}]
    return all(_in_hull(q, shared) for q in intersection_points(T1, T2))
