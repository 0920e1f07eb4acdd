"""
torusforge.realization
----------------------
Coordinates for triangulations and their classification.

A realization assigns an integer point to every vertex of a
triangulation. `classify` places it in the hierarchy

    NotEmbedded < Linear < Proper < GeneralPosition

where Linear means straight edges, flat triangles and no self
intersections, Proper additionally forbids coplanar facets sharing an
edge, and GeneralPosition forbids three collinear or four coplanar
vertices. The module also computes chirotopes (orientation signs of all
4-subsets), compares them up to the automorphisms of the triangulation,
and merges coplanar facets of a Linear realization into a polyhedral
map.
"""

from dataclasses import dataclass
from enum import IntEnum
from itertools import combinations
import json
import logging
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union
import warnings

import networkx as nx
import numpy as np

from .exactgeom import (Point3,
                        as_point,
                        orient3d_many,
                        collinear_many,
                        _collinear,
                        _orient,
                        _orient2d,
                        _drop_axis,
                        _normal,
                        _proj,
                        _triangles_compatible)
from .surface import (Facet,
                      Triangulation,
                      automorphisms,
                      parse_triangulation,
                      relabel as relabel_triangulation)


class Level(IntEnum):
    NOT_EMBEDDED = 0
    LINEAR = 1
    PROPER = 2
    GENERAL_POSITION = 3

    def __str__(self):
        return _LEVEL_NAMES[self]

    def __format__(self, format_spec):
        return format(str(self), format_spec)

    @classmethod
    def parse(cls, name: str) -> 'Level':
        """
        Accepts the display names (`GeneralPosition`), the enum names and
        the short modes `gp` and `linear`.
        """
        key = name.strip().lower().replace('_', '')
        for level, display in _LEVEL_NAMES.items():
            if key == display.lower():
                return level
        if key == 'gp':
            return cls.GENERAL_POSITION
        raise ValueError(f'unknown realization class {name!r}')


_LEVEL_NAMES = {Level.NOT_EMBEDDED: 'NotEmbedded',
                Level.LINEAR: 'Linear',
                Level.PROPER: 'Proper',
                Level.GENERAL_POSITION: 'GeneralPosition'}


@dataclass(frozen=True)
class Realization(object):
    """
    Integer coordinates for the vertices of a triangulation.

    Parameters
    ----------
    triangulation : Triangulation
    coords : sequence of points
        `coords[v - 1]` is the point of vertex `v`.

    Notes
    -----
    Repeated points are accepted here; `classify` reports them as
    NotEmbedded.
    """

    triangulation: Triangulation
    coords: Tuple[Point3, ...]

    def __post_init__(self):
        coords = tuple(as_point(p) for p in self.coords)
        if len(coords) != self.triangulation.n:
            raise ValueError(f'{len(coords)} points given for {self.triangulation.n} vertices')
        object.__setattr__(self, 'coords', coords)

    @property
    def n(self) -> int:
        return self.triangulation.n

    def point(self, v: int) -> Point3:
        return self.coords[v - 1]

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64).reshape((-1, 3))

    def extents(self) -> Tuple[int, int, int]:
        A = self.array()
        return tuple(int(x) for x in A.max(0) - A.min(0))

    def bounding_box(self) -> Tuple[int, int, int]:
        """Sorted side lengths of the bounding cuboid."""
        return tuple(sorted(self.extents()))

    def translate(self, offset: Sequence[int]) -> 'Realization':
        return Realization(self.triangulation,
                           [tuple(p[i] + offset[i] for i in range(3)) for p in self.coords])

    def normalized(self) -> 'Realization':
        """Translate so that the minimum of every coordinate is 0."""
        A = self.array()
        return self.translate([-int(x) for x in A.min(0)])

    def apply_isometry(self, axes: Sequence[int], signs: Sequence[int] = (1, 1, 1)) -> 'Realization':
        """Permute coordinate axes (new axis i is old axis `axes[i]`) and flip signs."""
        return Realization(self.triangulation,
                           [tuple(signs[i] * p[axes[i]] for i in range(3)) for p in self.coords])

    def relabel(self, perm: Sequence[int]) -> 'Realization':
        """Move the point of `v` to label `perm[v - 1]`, relabeling facets alike."""
        coords = [None] * self.n
        for v in self.triangulation.vertices:
            coords[perm[v - 1] - 1] = self.coords[v - 1]
        return Realization(relabel_triangulation(self.triangulation, perm), coords)

    def to_dict(self, level: Optional[Level] = None) -> dict:
        D = {'n': self.n,
             'facets': [list(f) for f in self.triangulation.facets],
             'coords': [list(p) for p in self.coords]}
        if level is not None:
            D['class'] = str(level)
        return D

    @classmethod
    def from_dict(cls, D: dict) -> 'Realization':
        for key in ('n', 'facets', 'coords'):
            if key not in D:
                raise ValueError(f'realization record lacks field {key!r}')
        t = Triangulation(D['n'], [tuple(f) for f in D['facets']])
        return cls(t, [tuple(p) for p in D['coords']])


@dataclass(frozen=True)
class RealizationClass(object):
    """
    Result of `classify`.

    Parameters
    ----------
    level : Level
    reason : str
        Short key describing the witness: `duplicate_point`,
        `degenerate_facet`, `intersecting_facets`, `coplanar_neighbors`,
        `collinear_triple`, `coplanar_quadruple`, or empty for general
        position.
    witness : tuple
        Labels of the offending pair or tuple; for Linear the list of
        coplanar facet pairs sharing an edge.
    """
    level: Level
    reason: str = ''
    witness: tuple = ()

    def __str__(self):
        if not self.reason:
            return str(self.level)
        return f'{self.level} ({self.reason}: {self.witness})'


def facet_pair_layout(f: Facet, g: Facet):
    """
    Vertex orders of two facets with their shared labels first, in the
    same order, and the number of shared labels.
    """
    shared = [v for v in f if v in g]
    fo = tuple(shared + [v for v in f if v not in shared])
    go = tuple(shared + [v for v in g if v not in shared])
    return fo, go, len(shared)


def _facets_compatible(coords, fo, go, k):
    return _triangles_compatible(tuple(coords[v - 1] for v in fo),
                                 tuple(coords[v - 1] for v in go),
                                 k)


def _coplanar_neighbors(t: Triangulation, coords) -> List[Tuple[Facet, Facet]]:
    pairs = []
    for (a, b), (f, g) in t.edge_facets.items():
        c = [v for v in f if v not in (a, b)][0]
        d = [v for v in g if v not in (a, b)][0]
        if _orient(coords[a - 1], coords[b - 1], coords[c - 1], coords[d - 1]) == 0:
            pairs.append((f, g))
    return pairs


def general_position_witness(points: Sequence[Sequence[int]]) -> Optional[Tuple[str, tuple]]:
    """
    First collinear triple or coplanar quadruple of `points`, as
    0-based indices, or None if the points are in general position.
    """
    P = np.array([as_point(p) for p in points], dtype=np.int64).reshape((-1, 3))
    m = P.shape[0]
    if m >= 3:
        T = np.array(list(combinations(range(m), 3)))
        bad = np.nonzero(collinear_many(P[T]))[0]
        if bad.size:
            return 'collinear_triple', tuple(int(i) for i in T[bad[0]])
    if m >= 4:
        Q = np.array(list(combinations(range(m), 4)))
        bad = np.nonzero(orient3d_many(P[Q]) == 0)[0]
        if bad.size:
            return 'coplanar_quadruple', tuple(int(i) for i in Q[bad[0]])
    return None


def in_general_position(points: Sequence[Sequence[int]]) -> bool:
    """
    No three points collinear and no four coplanar.

    Examples
    --------
    >>> in_general_position([(0,0,0), (1,0,0), (0,1,0), (0,0,1)])
    True
    >>> in_general_position([(0,0,0), (1,0,0), (0,1,0), (1,1,0)])
    False
    """
    return general_position_witness(points) is None


def classify(r: Realization) -> RealizationClass:
    """
    Classify a realization as NotEmbedded, Linear, Proper or
    GeneralPosition.

    Checks are made in order: repeated points, degenerate facets,
    incompatible facet pairs, coplanar facets sharing an edge, and
    finally general position. The witness of the first failing check is
    reported.
    """
    t = r.triangulation
    P = r.coords
    first = {}
    for v, p in enumerate(P, 1):
        if p in first:
            return RealizationClass(Level.NOT_EMBEDDED, 'duplicate_point', (first[p], v))
        first[p] = v
    for f in t.facets:
        if _collinear(P[f[0] - 1], P[f[1] - 1], P[f[2] - 1]):
            return RealizationClass(Level.NOT_EMBEDDED, 'degenerate_facet', f)
    F = t.facets
    for i in range(len(F)):
        for j in range(i + 1, len(F)):
            fo, go, k = facet_pair_layout(F[i], F[j])
            if not _facets_compatible(P, fo, go, k):
                return RealizationClass(Level.NOT_EMBEDDED, 'intersecting_facets', (F[i], F[j]))
    coplanar = _coplanar_neighbors(t, P)
    if coplanar:
        return RealizationClass(Level.LINEAR, 'coplanar_neighbors', tuple(coplanar))
    gp = general_position_witness(P)
    if gp is not None:
        reason, idx = gp
        return RealizationClass(Level.PROPER, reason, tuple(i + 1 for i in idx))
    return RealizationClass(Level.GENERAL_POSITION)


# Chirotopes

_SIGN_CHARS = {1: '+', -1: '-', 0: '0'}
_CHAR_SIGNS = {'+': 1, '-': -1, '−': -1, '0': 0}


def _subsets(n: int) -> np.ndarray:
    """Sorted 4-subsets of 1..n in lexicographic order, shape (C(n,4), 4)."""
    return np.array(list(combinations(range(1, n + 1), 4)), dtype=np.int64).reshape((-1, 4))


@dataclass(frozen=True)
class Chirotope(object):
    """
    Orientation signs of all sorted 4-subsets of 1..n, in lexicographic
    subset order.
    """
    n: int
    signs: Tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        expected = comb(self.n, 4)
        if len(signs) != expected:
            raise ValueError(f'a chirotope on {self.n} elements has {expected} signs, got {len(signs)}')
        if any(s not in (-1, 0, 1) for s in signs):
            raise ValueError('chirotope signs must be -1, 0 or +1')
        object.__setattr__(self, 'signs', signs)

    @property
    def uniform(self) -> bool:
        return 0 not in self.signs

    def array(self) -> np.ndarray:
        return np.array(self.signs, dtype=np.int8)

    def __neg__(self) -> 'Chirotope':
        return Chirotope(self.n, tuple(-s for s in self.signs))

    def to_string(self) -> str:
        """
        Examples
        --------
        >>> Chirotope(4, (1,)).to_string()
        'n=4 +'
        """
        return f'n={self.n} ' + ''.join(_SIGN_CHARS[s] for s in self.signs)


def parse_chirotope(text: str) -> Chirotope:
    head, _, body = text.strip().partition(' ')
    if not head.startswith('n='):
        raise ValueError(f'chirotope line must start with "n=<k>", got {text[:20]!r}')
    try:
        signs = [_CHAR_SIGNS[c] for c in body.strip()]
    except KeyError as e:
        raise ValueError(f'unexpected sign character {e.args[0]!r}')
    return Chirotope(int(head[2:]), signs)


def chirotope(r: Realization) -> Chirotope:
    """Orientation sign of every sorted 4-subset of the vertices."""
    if r.n < 4:
        return Chirotope(r.n, ())
    S = _subsets(r.n)
    A = r.array()
    return Chirotope(r.n, orient3d_many(A[S - 1]))


class _Relabeler(object):
    """Precomputed subset indexing for relabeling chirotopes on n elements."""

    def __init__(self, n: int):
        self.n = n
        self.subsets = _subsets(n)
        rank = np.full((n + 1,) * 4, -1, dtype=np.int64)
        rank[tuple(self.subsets.T)] = np.arange(self.subsets.shape[0])
        self.rank = rank

    def __call__(self, signs: np.ndarray, perm: Sequence[int]) -> np.ndarray:
        """
        Signs of the chirotope after moving element `v` to `perm[v - 1]`.
        """
        inv = np.zeros(self.n + 1, dtype=np.int64)
        inv[np.asarray(perm)] = np.arange(1, self.n + 1)
        T = inv[self.subsets]
        inversions = np.zeros(T.shape[0], dtype=np.int64)
        for i in range(4):
            for j in range(i + 1, 4):
                inversions += T[:, i] > T[:, j]
        parity = 1 - 2 * (inversions % 2)
        T = np.sort(T, axis=1)
        idx = self.rank[T[:, 0], T[:, 1], T[:, 2], T[:, 3]]
        return (parity * signs[idx]).astype(np.int8)


def relabel_chirotope(c: Chirotope, perm: Sequence[int]) -> Chirotope:
    if c.n < 4:
        return c
    return Chirotope(c.n, _Relabeler(c.n)(c.array(), perm))


def _group(aut, n):
    if aut is None:
        return [tuple(range(1, n + 1))]
    if isinstance(aut, Triangulation):
        return automorphisms(aut)
    return list(aut)


def om_equivalent(c1: Chirotope,
                  c2: Chirotope,
                  aut: Union[Sequence[Sequence[int]], Triangulation, None] = None) -> bool:
    """
    Whether some relabeling in `aut` takes `c1` to `c2` or to `-c2`.

    Parameters
    ----------
    c1, c2 : Chirotope
    aut : sequence of permutations or Triangulation, optional
        The group of admissible relabelings, as returned by
        `automorphisms`; a triangulation stands for its automorphism
        group. Only the identity is used when omitted.
    """
    if c1.n != c2.n:
        raise ValueError('chirotopes on different numbers of elements')
    if c1.n < 4:
        return True
    relabeler = _Relabeler(c1.n)
    a = c1.array()
    b = c2.array()
    for perm in _group(aut, c1.n):
        s = relabeler(a, perm)
        if np.array_equal(s, b) or np.array_equal(s, -b):
            return True
    return False


def om_canonical(c: Chirotope, aut=None) -> Chirotope:
    """Smallest sign vector in the orbit of `c` under `aut` and negation."""
    if c.n < 4:
        return c
    relabeler = _Relabeler(c.n)
    a = c.array()
    best = None
    for perm in _group(aut, c.n):
        s = relabeler(a, perm)
        for key in (tuple(int(x) for x in s), tuple(int(-x) for x in s)):
            if best is None or key < best:
                best = key
    return Chirotope(c.n, best)


def om_classes(chis: Sequence[Chirotope], aut=None) -> List[List[int]]:
    """
    Partition chirotopes into equivalence classes under `aut` and
    negation.

    Returns
    -------
    classes : list of lists of int
        Indices into `chis`, ascending within a class; classes are
        ordered by their canonical sign vector.
    """
    ns = {c.n for c in chis}
    if len(ns) > 1:
        raise ValueError('chirotopes on different numbers of elements')
    group = _group(aut, ns.pop()) if ns else []
    classes: Dict[Tuple[int, ...], List[int]] = {}
    for i, c in enumerate(chis):
        key = om_canonical(c, group).signs
        classes.setdefault(key, []).append(i)
    return [classes[k] for k in sorted(classes)]


def match_catalogue(chis: Sequence[Chirotope],
                    catalogue: Sequence[Chirotope],
                    aut=None,
                    logging_on: bool = False) -> List[Optional[int]]:
    """
    Position in `catalogue` of the class of each chirotope, or None.

    Catalogue entries that match none of the given chirotopes are
    reported with a warning.
    """
    group = _group(aut, chis[0].n) if chis else []
    keys = {}
    for j, c in enumerate(catalogue):
        keys.setdefault(om_canonical(c, group).signs, j)
    found = [keys.get(om_canonical(c, group).signs) for c in chis]
    unmatched = sorted(set(range(len(catalogue))) - {j for j in found if j is not None})
    if unmatched:
        msg = f'catalogue entries {unmatched} match none of the {len(chis)} chirotopes'
        warnings.warn(msg)
        if logging_on: logging.warning(msg)
    return found


# Merging coplanar facets

@dataclass(frozen=True)
class PolyhedralMap(object):
    """
    Faces obtained by merging coplanar facets.

    Parameters
    ----------
    vertices : tuple of int
        Labels that are corners of some face.
    faces : tuple of tuples
        Each face as a cycle of corner labels.
    provenance : tuple of tuples
        The facets merged into each face.
    """
    vertices: Tuple[int, ...]
    faces: Tuple[Tuple[int, ...], ...]
    provenance: Tuple[Tuple[Facet, ...], ...]

    @property
    def edges(self):
        E = set()
        for face in self.faces:
            for a, b in zip(face, face[1:] + face[:1]):
                E.add((min(a, b), max(a, b)))
        return sorted(E)


@dataclass(frozen=True)
class MergeFailure(object):
    """Coplanar facets could not be merged into a polyhedral map."""
    reason: str
    facets: tuple = ()

    def __str__(self):
        return f'merge failed: {self.reason} {self.facets}'


def _boundary_cycle(group):
    """
    Boundary of a union of facets as a vertex cycle, or None if the union
    is not a disk.
    """
    count = {}
    for f in group:
        a, b, c = f
        for e in ((a, b), (a, c), (b, c)):
            count[e] = count.get(e, 0) + 1
    boundary = [e for e, k in count.items() if k == 1]
    verts = {v for f in group for v in f}
    if len(verts) - len(count) + len(group) != 1:
        return None
    G = nx.Graph(boundary)
    if any(d != 2 for _, d in G.degree()) or not nx.is_connected(G):
        return None
    start = min(G.nodes)
    cycle = [start]
    prev, cur = None, start
    while True:
        nxt = [u for u in sorted(G[cur]) if u != prev][0]
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
    return cycle


def _convex_corners(cycle, coords, axis):
    """
    Corners of a planar boundary cycle after dropping straight angles,
    or None unless it bounds a strictly convex polygon.
    """
    P = {v: _proj(coords[v - 1], axis) for v in cycle}
    m = len(cycle)
    corners = [cycle[i] for i in range(m)
               if _orient2d(P[cycle[i - 1]], P[cycle[i]], P[cycle[(i + 1) % m]]) != 0]
    k = len(corners)
    if k < 3:
        return None
    o = _orient2d(P[corners[0]], P[corners[1]], P[corners[2]])
    for i in range(k):
        a, b = P[corners[i]], P[corners[(i + 1) % k]]
        for j in range(k):
            if j in (i, (i + 1) % k):
                continue
            if _orient2d(a, b, P[corners[j]]) != o:
                return None
    return corners


def _fan(face):
    return [(face[0], face[i], face[i + 1]) for i in range(1, len(face) - 1)]


def _consecutive(face, a, b):
    k = len(face)
    i = face.index(a)
    return face[(i + 1) % k] == b or face[i - 1] == b


def merge_coplanar(r: Realization) -> Union[PolyhedralMap, MergeFailure]:
    """
    Merge maximal unions of coplanar edge-adjacent facets.

    Every union must be a strictly convex polygon and the resulting
    faces must meet pairwise in a common edge, a common vertex or not at
    all. Vertices in the interior of a merged face or a merged edge are
    dropped.

    Raises
    ------
    ValueError
        If `r` is not at least Linear.
    """
    cls = classify(r)
    if cls.level < Level.LINEAR:
        raise ValueError(f'merging needs a Linear realization, got {cls}')
    t = r.triangulation
    P = r.coords

    uf = nx.utils.UnionFind(t.facets)
    for f, g in _coplanar_neighbors(t, P):
        uf.union(f, g)
    groups = sorted(tuple(sorted(s)) for s in uf.to_sets())

    faces = []
    for group in groups:
        if len(group) == 1:
            faces.append(group[0])
            continue
        cycle = _boundary_cycle(group)
        if cycle is None:
            return MergeFailure('coplanar union is not a disk', group)
        f = group[0]
        axis = _drop_axis(_normal(*(P[v - 1] for v in f)))
        corners = _convex_corners(cycle, P, axis)
        if corners is None:
            return MergeFailure('coplanar union is not a strictly convex polygon', group)
        faces.append(tuple(corners))

    for i in range(len(faces)):
        for j in range(i + 1, len(faces)):
            F1, F2 = faces[i], faces[j]
            if len(groups[i]) == 1 and len(groups[j]) == 1:
                continue
            shared = set(F1) & set(F2)
            if len(shared) > 2:
                return MergeFailure('faces share more than an edge', (groups[i], groups[j]))
            if len(shared) == 2:
                a, b = sorted(shared)
                if not (_consecutive(F1, a, b) and _consecutive(F2, a, b)):
                    return MergeFailure('faces share a diagonal', (groups[i], groups[j]))
            for T1 in _fan(F1):
                for T2 in _fan(F2):
                    fo, go, k = facet_pair_layout(T1, T2)
                    if not _facets_compatible(P, fo, go, k):
                        return MergeFailure('faces intersect improperly', (groups[i], groups[j]))

    vertices = tuple(sorted({v for face in faces for v in face}))
    return PolyhedralMap(vertices=vertices,
                         faces=tuple(faces),
                         provenance=tuple(groups))


def realizations_to_json(items: Sequence[Realization],
                         manifest: Optional[dict] = None,
                         with_class: bool = True) -> str:
    records = []
    for r in items:
        records.append(r.to_dict(classify(r).level if with_class else None))
    D = {}
    if manifest is not None:
        D['manifest'] = manifest
    D['realizations'] = records
    return json.dumps(D, indent=1)


def realizations_from_json(text: str) -> List[Realization]:
    """
    Read realizations from JSON: either a single record with fields
    `n`, `facets`, `coords`, a list of such records, or an object with a
    `realizations` list. Search certificates are read too: their
    witnesses are placed on the triangulation of the task.
    """
    D = json.loads(text)
    if isinstance(D, dict) and 'witnesses' in D and 'task' in D:
        t = parse_triangulation(D['task']['triangulation'])
        return [Realization(t, [tuple(p) for p in w]) for w in D['witnesses']]
    if isinstance(D, dict) and 'realizations' in D:
        D = D['realizations']
    if isinstance(D, dict):
        D = [D]
    return [Realization.from_dict(d) for d in D]
