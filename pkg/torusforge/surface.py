"""
torusforge.surface
------------------
Combinatorial triangulated surfaces.

A triangulated surface on vertex labels 1..n is stored as a sorted tuple
of sorted facet triples. This module validates such objects as closed
surfaces, computes their Euler characteristic, orientability and genus,
their automorphism group, and a canonical relabeling used to compare
triangulations up to isomorphism.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

Facet = Tuple[int, int, int]
Edge = Tuple[int, int]
Permutation = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class Triangulation(object):
    """
    A pure 2-dimensional simplicial complex on labels 1..n.

    Parameters
    ----------
    n : int
        Number of vertices.
    facets : sequence of triples
        Facets as vertex triples. They are stored sorted, each triple
        sorted ascending.

    Notes
    -----
    Every label in 1..n must occur in some facet. Triangulations
    compare by `(n, facets)`.
    """

    n: int
    facets: Tuple[Facet, ...]

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise ValueError(f'number of vertices must be nonnegative, got {n}')
        facets = []
        for f in self.facets:
            f = tuple(sorted(int(v) for v in f))
            if len(f) != 3:
                raise ValueError(f'facet {f} does not have 3 vertices')
            if len(set(f)) != 3:
                raise ValueError(f'degenerate facet {f}')
            if f[0] < 1 or f[2] > n:
                raise ValueError(f'label out of range in facet {f} (n={n})')
            facets.append(f)
        facets = tuple(sorted(facets))
        for f, g in zip(facets[:-1], facets[1:]):
            if f == g:
                raise ValueError(f'facet {f} repeated')
        used = {v for f in facets for v in f}
        missing = sorted(set(range(1, n + 1)) - used)
        if missing:
            raise ValueError(f'vertex {missing[0]} lies in no facet')
        object.__setattr__(self, 'n', n)
        object.__setattr__(self, 'facets', facets)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def edge_facets(self) -> Dict[Edge, List[Facet]]:
        """Map each edge (a < b) to the facets containing it."""
        E = {}
        for f in self.facets:
            a, b, c = f
            for e in ((a, b), (a, c), (b, c)):
                E.setdefault(e, []).append(f)
        return dict(sorted(E.items()))

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(self.edge_facets)

    @cached_property
    def vertex_facets(self) -> Dict[int, List[Facet]]:
        S = {v: [] for v in self.vertices}
        for f in self.facets:
            for v in f:
                S[v].append(f)
        return S

    @cached_property
    def neighbors(self) -> Dict[int, Tuple[int, ...]]:
        N = {v: set() for v in self.vertices}
        for a, b in self.edge_facets:
            N[a].add(b)
            N[b].add(a)
        return {v: tuple(sorted(N[v])) for v in N}

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def link(self, v: int) -> nx.Graph:
        """The link of `v` as a graph on its neighbors."""
        G = nx.Graph()
        for f in self.vertex_facets[v]:
            a, b = [u for u in f if u != v]
            G.add_edge(a, b)
        return G

    @property
    def euler_characteristic(self) -> int:
        return self.n - len(self.edge_facets) + len(self.facets)

    def __str__(self):
        return format_triangulation(self)


@dataclass(frozen=True)
class SurfaceReport(object):
    """
    Result of `validate`.

    Parameters
    ----------
    n : int
        Number of vertices.
    edge_count, facet_count : int
    euler : int
        Euler characteristic n - E + F.
    orientable : bool
    connected : bool
    genus : int or None
        (2 - euler) / 2 for connected orientable surfaces, else None.
    """

    n: int
    edge_count: int
    facet_count: int
    euler: int
    orientable: bool
    connected: bool
    genus: Optional[int]

    @property
    def is_torus(self) -> bool:
        return self.connected and self.orientable and self.genus == 1


def validate(t: Triangulation) -> SurfaceReport:
    """
    Check that `t` triangulates a closed surface.

    Every edge must lie in exactly two facets and the link of every
    vertex must be a single cycle.

    Raises
    ------
    ValueError
        If `t` is not a closed 2-manifold, naming the offending edge or
        vertex.
    """
    for e, fs in t.edge_facets.items():
        if len(fs) != 2:
            raise ValueError(f'edge {e} lies in {len(fs)} facet(s); a closed surface needs exactly 2')
    for v in t.vertices:
        L = t.link(v)
        if L.number_of_nodes() < 3 or not nx.is_connected(L):
            raise ValueError(f'link of vertex {v} is not a single cycle')

    skeleton = nx.Graph()
    skeleton.add_nodes_from(t.vertices)
    skeleton.add_edges_from(t.edge_facets)
    connected = t.n > 0 and nx.is_connected(skeleton)
    orientable = _orient_facets(t) is not None
    chi = t.euler_characteristic
    genus = (2 - chi) // 2 if (connected and orientable) else None
    return SurfaceReport(n=t.n,
                         edge_count=len(t.edge_facets),
                         facet_count=len(t.facets),
                         euler=chi,
                         orientable=orientable,
                         connected=connected,
                         genus=genus)


def _orient_facets(t: Triangulation) -> Optional[Dict[Facet, Facet]]:
    """
    Coherent orientation of the facets of a closed surface, as cyclic
    vertex orders, or None if the surface is not orientable.
    """
    oriented = {}
    for start in t.facets:
        if start in oriented:
            continue
        oriented[start] = start
        stack = [start]
        while stack:
            f = stack.pop()
            o = oriented[f]
            for i in range(3):
                a, b = o[i], o[(i + 1) % 3]
                e = (a, b) if a < b else (b, a)
                for g in t.edge_facets[e]:
                    if g == f:
                        continue
                    c = [w for w in g if w not in e][0]
                    want = (b, a, c)
                    if g in oriented:
                        if not _same_cycle(oriented[g], want):
                            return None
                    else:
                        oriented[g] = want
                        stack.append(g)
    return oriented


def _same_cycle(x, y):
    return y in (x, (x[1], x[2], x[0]), (x[2], x[0], x[1]))


def heawood_lower_bound(chi: int) -> int:
    """
    Minimum number of vertices of a triangulation of a closed surface
    with Euler characteristic `chi`, ceil((7 + sqrt(49 - 24 chi)) / 2).

    Examples
    --------
    >>> heawood_lower_bound(0), heawood_lower_bound(2)
    (7, 4)
    """
    r = 49 - 24 * chi
    if r < 0:
        raise ValueError(f'no closed surface has Euler characteristic {chi}')
    s = isqrt(r)
    if s * s == r:
        return (8 + s) // 2
    return (9 + s) // 2


def is_neighborly(t: Triangulation) -> bool:
    """Every pair of vertices spans an edge."""
    return len(t.edge_facets) == t.n * (t.n - 1) // 2


def _incidence_graph(t: Triangulation) -> nx.Graph:
    G = nx.Graph()
    for v in t.vertices:
        G.add_node(('v', v), kind='v')
    for f in t.facets:
        G.add_node(('f', f), kind='f')
        for v in f:
            G.add_edge(('v', v), ('f', f))
    return G


def automorphisms(t: Triangulation) -> List[Permutation]:
    """
    All label permutations mapping the facet set to itself.

    A permutation is a tuple `p` with `p[v - 1]` the image of `v`. The
    list is sorted, so the identity comes first.
    """
    G = _incidence_graph(t)
    matcher = GraphMatcher(G, G, node_match=lambda x, y: x['kind'] == y['kind'])
    perms = set()
    for mapping in matcher.isomorphisms_iter():
        perms.add(tuple(mapping[('v', v)][1] for v in t.vertices))
    return sorted(perms)


def relabel(t: Triangulation, perm: Sequence[int]) -> Triangulation:
    """Apply the relabeling `v -> perm[v - 1]`."""
    if sorted(perm) != list(t.vertices):
        raise ValueError(f'{tuple(perm)} is not a permutation of 1..{t.n}')
    return Triangulation(t.n, tuple(tuple(perm[v - 1] for v in f) for f in t.facets))


def permutation_from_cycle(cycle: Sequence[int], n: int) -> Permutation:
    """
    The permutation of 1..n given by a single cycle.

    Examples
    --------
    >>> permutation_from_cycle((1, 2, 5), 5)
    (2, 5, 3, 4, 1)
    """
    perm = list(range(1, n + 1))
    for a, b in zip(cycle, tuple(cycle[1:]) + tuple(cycle[:1])):
        perm[a - 1] = b
    return tuple(perm)


def _greedy_labelings(t: Triangulation, label: List[int], k: int):
    """
    Extend a partial labeling (`label[v] == 0` for unlabeled `v`) so the
    sorted facet list is as small as possible at every step, branching
    where two extensions tie.
    """
    if k > t.n:
        yield tuple(label[1:])
        return
    best = None
    candidates = []
    for f in t.facets:
        la, lb, lc = label[f[0]], label[f[1]], label[f[2]]
        if (la == 0) + (lb == 0) + (lc == 0) != 1:
            continue
        if la == 0:
            key, u = (min(lb, lc), max(lb, lc)), f[0]
        elif lb == 0:
            key, u = (min(la, lc), max(la, lc)), f[1]
        else:
            key, u = (min(la, lb), max(la, lb)), f[2]
        if best is None or key < best:
            best, candidates = key, [u]
        elif key == best and u not in candidates:
            candidates.append(u)
    if best is None:
        # the labeled part is a union of components; start a new one
        for f in t.facets:
            if label[f[0]] or label[f[1]] or label[f[2]]:
                continue
            for a, b, c in permutations(f):
                label[a], label[b], label[c] = k, k + 1, k + 2
                yield from _greedy_labelings(t, label, k + 3)
                label[a] = label[b] = label[c] = 0
        return
    for u in candidates:
        label[u] = k
        yield from _greedy_labelings(t, label, k + 1)
        label[u] = 0


def canonical_labeling(t: Triangulation) -> Permutation:
    """
    A relabeling taking `t` to its canonical form.

    Label 1 goes to a vertex of minimum degree and labels 2, 3 to a
    facet through it; the remaining labels are forced greedily from the
    smallest partially labeled facet, with ties explored exhaustively.
    The canonical form is the smallest sorted facet list among these
    labelings, which depend only on the isomorphism class.
    """
    if not t.facets:
        return ()
    degree = {v: len(t.vertex_facets[v]) for v in t.vertices}
    dmin = min(degree.values())
    best_key = None
    best_perm = None
    for v1 in t.vertices:
        if degree[v1] != dmin:
            continue
        for f in t.vertex_facets[v1]:
            x, y = [u for u in f if u != v1]
            for v2, v3 in ((x, y), (y, x)):
                label = [0] * (t.n + 1)
                label[v1], label[v2], label[v3] = 1, 2, 3
                for perm in _greedy_labelings(t, label, 4):
                    key = sorted(tuple(sorted(perm[v - 1] for v in g)) for g in t.facets)
                    if best_key is None or key < best_key:
                        best_key, best_perm = key, perm
    return best_perm


def canonical_form(t: Triangulation) -> Triangulation:
    """Canonical representative of the isomorphism class of `t`."""
    if not t.facets:
        return t
    return relabel(t, canonical_labeling(t))


def is_isomorphic(t1: Triangulation, t2: Triangulation) -> bool:
    if t1.n != t2.n or len(t1.facets) != len(t2.facets):
        return False
    return canonical_form(t1) == canonical_form(t2)


# Text format: `<n>: a b c, a b c, ...`, one triangulation per line

def format_triangulation(t: Triangulation) -> str:
    """
    Examples
    --------
    >>> format_triangulation(Triangulation(4, [(1,2,3), (1,2,4), (1,3,4), (2,3,4)]))
    '4: 1 2 3, 1 2 4, 1 3 4, 2 3 4'
    """
    return f'{t.n}: ' + ', '.join(' '.join(str(v) for v in f) for f in t.facets)


def parse_triangulation(line: str) -> Triangulation:
    head, sep, body = line.partition(':')
    if not sep:
        raise ValueError(f'malformed triangulation {line.strip()!r}: expected "<n>: facets"')
    try:
        n = int(head.strip())
        facets = [tuple(int(x) for x in chunk.split()) for chunk in body.split(',')]
    except ValueError:
        raise ValueError(f'malformed triangulation {line.strip()!r}')
    for f in facets:
        if len(f) != 3:
            raise ValueError(f'malformed facet {f} in {line.strip()!r}')
    return Triangulation(n, facets)


def parse_triangulations(source) -> List[Triangulation]:
    """
    Parse the line format from a string, bytes or a text stream. Blank
    lines and lines starting with `#` are skipped.

    Raises
    ------
    ValueError
        Naming the line number of the first malformed entry.
    """
    if hasattr(source, 'read'):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode('ascii')
    result = []
    for lineno, line in enumerate(source.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        try:
            result.append(parse_triangulation(stripped))
        except ValueError as e:
            raise ValueError(f'line {lineno}: {e}') from e
    return result


def format_triangulations(ts: Sequence[Triangulation]) -> str:
    return ''.join(format_triangulation(t) + '\n' for t in ts)
