"""
torusforge.lattice_search
-------------------------
Exhaustive search for realizations on the lattice points of a cuboid.

Vertices are placed one at a time, in a fixed order, on the points of
the `a x b x c` cuboid {0..a} x {0..b} x {0..c}. After each placement
every check that has become decidable is run with exact arithmetic:
distinct points, no vertex inside an edge, compatible edges, flat and
compatible facets and, when general position is required, no three
collinear and no four coplanar vertices. Partial assignments that are
not lexicographically minimal in their orbit under the symmetries of
the cuboid and the automorphisms of the triangulation are discarded, so
each orbit of solutions is reported once.

A search that finishes without a witness is a proof of non-existence;
a search that runs out of budget says so explicitly.
"""

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
import json
import logging
from math import gcd
import time
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from joblib import Parallel, delayed
import numpy as np
import pandas as pd
from tqdm import tqdm

from .exactgeom import (Point3,
                        segments_compatible,
                        _collinear,
                        _orient,
                        _segments_compatible,
                        _segment_hits_triangle,
                        _leaves_through_triangle,
                        _strictly_inside_segment,
                        _triangles_compatible)
from .realization import (Level,
                          Realization,
                          classify,
                          facet_pair_layout)
from .surface import (Triangulation,
                      automorphisms,
                      format_triangulation,
                      parse_triangulation)
from ._utils import _parse_sides, _check_choice

PRUNE_RULES = ('point_on_edge',
               'edge_conflict',
               'degenerate_facet',
               'facet_intersection',
               'collinear',
               'coplanar',
               'plane_capacity',
               'symmetry')

_MODES = {'gp': Level.GENERAL_POSITION, 'linear': Level.LINEAR}

# primitive normals with entries in {-1, 0, 1}, one per antipodal pair
_PLANE_FAMILIES = ((1, 0, 0), (0, 1, 0), (0, 0, 1),
                   (1, 1, 0), (1, -1, 0), (1, 0, 1),
                   (1, 0, -1), (0, 1, 1), (0, 1, -1),
                   (1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1))


@dataclass(frozen=True, order=True)
class Cuboid(object):
    """
    The lattice {0..a} x {0..b} x {0..c}.

    Examples
    --------
    >>> Cuboid(1, 1, 2).point_count
    12
    """
    a: int
    b: int
    c: int

    def __post_init__(self):
        for s in (self.a, self.b, self.c):
            if int(s) != s or s < 0:
                raise ValueError(f'cuboid sides must be nonnegative integers, got {self.sides}')

    @property
    def sides(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def point_count(self) -> int:
        return (self.a + 1) * (self.b + 1) * (self.c + 1)

    def canonical(self) -> 'Cuboid':
        return Cuboid(*sorted(self.sides))

    @property
    def is_canonical(self) -> bool:
        return self.a <= self.b <= self.c

    def points(self) -> List[Point3]:
        """Lattice points in lexicographic order."""
        return list(product(range(self.a + 1), range(self.b + 1), range(self.c + 1)))

    def contains(self, p: Sequence[int]) -> bool:
        return all(0 <= p[i] <= self.sides[i] for i in range(3))

    def minimality_key(self):
        return (self.point_count, tuple(sorted(self.sides)))

    def __str__(self):
        return f'{self.a}x{self.b}x{self.c}'

    @classmethod
    def parse(cls, text: str) -> 'Cuboid':
        return cls(*_parse_sides(text))


@dataclass(frozen=True)
class CuboidSymmetry(object):
    """
    Lattice isometry of a cuboid: coordinate `i` of the image is
    coordinate `axes[i]` of the point, reflected when `flips[i]`.
    """
    sides: Tuple[int, int, int]
    axes: Tuple[int, int, int]
    flips: Tuple[bool, bool, bool]

    def __call__(self, p: Sequence[int]) -> Point3:
        q = [p[self.axes[i]] for i in range(3)]
        return tuple(self.sides[i] - q[i] if self.flips[i] else q[i] for i in range(3))


def cuboid_symmetries(c: Cuboid) -> List[CuboidSymmetry]:
    """
    Axis permutations between equal sides composed with reflections.
    The group has order 48 for a cube, 16 with exactly two equal sides
    and 8 otherwise.
    """
    sides = c.sides
    G = []
    for axes in permutations(range(3)):
        if any(sides[axes[i]] != sides[i] for i in range(3)):
            continue
        for flips in product((False, True), repeat=3):
            G.append(CuboidSymmetry(sides, axes, flips))
    return G


def _point_permutations(c: Cuboid, points: List[Point3]) -> np.ndarray:
    """Distinct permutations of the point indices induced by the symmetries."""
    index = {p: i for i, p in enumerate(points)}
    rows = [[index[g(p)] for p in points] for g in cuboid_symmetries(c)]
    return np.unique(np.array(rows, dtype=np.int64), axis=0)


def _lattice_lines(points: List[Point3], c: Cuboid) -> List[Tuple[int, ...]]:
    """Lines through at least three lattice points, as sorted index tuples."""
    index = {p: i for i, p in enumerate(points)}
    lines = set()
    for p, q in combinations(points, 2):
        d = tuple(q[i] - p[i] for i in range(3))
        g = gcd(gcd(abs(d[0]), abs(d[1])), abs(d[2]))
        d = tuple(x // g for x in d)
        start = p
        while c.contains(tuple(start[i] - d[i] for i in range(3))):
            start = tuple(start[i] - d[i] for i in range(3))
        members = []
        cur = start
        while c.contains(cur):
            members.append(index[cur])
            cur = tuple(cur[i] + d[i] for i in range(3))
        if len(members) >= 3:
            lines.add(tuple(sorted(members)))
    return sorted(lines)


def _lattice_planes(points: List[Point3]) -> List[Tuple[int, ...]]:
    """Planes through at least four lattice points, as sorted index tuples."""
    X = np.array(points, dtype=np.int64)
    m = X.shape[0]
    if m < 4:
        return []
    T = np.array(list(combinations(range(m), 3)), dtype=np.int64)
    A, B, C = X[T[:, 0]], X[T[:, 1]], X[T[:, 2]]
    N = np.cross(B - A, C - A)
    keep = N.any(axis=1)
    N, A = N[keep], A[keep]
    N //= np.gcd.reduce(np.abs(N), axis=1)[:, None]
    lead = N[np.arange(N.shape[0]), np.argmax(N != 0, axis=1)]
    N *= np.sign(lead)[:, None]
    h = (N * A).sum(axis=1)
    keys = np.unique(np.column_stack([N, h]), axis=0)
    planes = []
    for key in keys:
        members = np.nonzero(X @ key[:3] == key[3])[0]
        if members.size >= 4:
            planes.append(tuple(int(i) for i in members))
    return sorted(planes)


def _incidence(sets: List[Tuple[int, ...]], m: int) -> List[np.ndarray]:
    through = [[] for _ in range(m)]
    for j, s in enumerate(sets):
        for i in s:
            through[i].append(j)
    return [np.array(t, dtype=np.int64) for t in through]


def _placement_order(t: Triangulation) -> List[int]:
    """
    Highest degree first, then repeatedly the vertex with most placed
    neighbors (ties: higher degree, smaller label).
    """
    deg = {v: t.degree(v) for v in t.vertices}
    order = [min(t.vertices, key=lambda v: (-deg[v], v))]
    placed = set(order)
    while len(order) < t.n:
        v = min((u for u in t.vertices if u not in placed),
                key=lambda u: (-len(placed.intersection(t.neighbors[u])), -deg[u], u))
        order.append(v)
        placed.add(v)
    return order


@dataclass
class SearchControl(object):
    """
    Control parameters for the lattice search.

    Parameters
    ----------
    max_nodes : int, optional
        Budget on placements tried. Exceeding it gives a `timeout`
        outcome.
    max_seconds : float, optional
        Wall-time budget.
    workers : int, default=1
        Number of joblib workers; the search tree is split at depth
        `split_depth` and branches are explored independently, each with
        the full budget.
    plane_pruning : bool, default=True
        Use the lattice line and plane tables in general position mode.
        With False, collinear triples and coplanar quadruples are
        checked directly.
    split_depth : int, default=1
    progress : bool, default=False
    logging : bool, default=False
        Write info and debug messages to log?
    """
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None
    workers: int = 1
    plane_pruning: bool = True
    split_depth: int = 1
    progress: bool = False
    logging: bool = False


@dataclass(frozen=True)
class SearchTask(object):
    """
    Parameters
    ----------
    triangulation : Triangulation
    cuboid : Cuboid
    mode : {'gp', 'linear'}
        Required realization class: general position, or Linear.
    goal : {'first', 'all', 'none'}
        Stop at the first witness, enumerate one witness per orbit, or
        try to prove that there is none.
    """
    triangulation: Triangulation
    cuboid: Cuboid
    mode: Literal['gp', 'linear'] = 'gp'
    goal: Literal['first', 'all', 'none'] = 'first'

    def __post_init__(self):
        _check_choice('mode', self.mode, _MODES)
        _check_choice('goal', self.goal, ('first', 'all', 'none'))
        if self.cuboid.point_count < self.triangulation.n:
            raise ValueError(f'cuboid {self.cuboid} has {self.cuboid.point_count} points '
                             f'for {self.triangulation.n} vertices')

    @property
    def level(self) -> Level:
        return _MODES[self.mode]


@dataclass
class SearchStats(object):
    nodes: int = 0
    prunes: Counter = field(default_factory=lambda: Counter({r: 0 for r in PRUNE_RULES}))
    elapsed: float = 0.

    def merge(self, other: 'SearchStats'):
        self.nodes += other.nodes
        self.prunes.update(other.prunes)
        self.elapsed += other.elapsed

    def to_dict(self, include_timing: bool = False) -> dict:
        D = {'nodes': self.nodes,
             'prunes': {r: int(self.prunes[r]) for r in PRUNE_RULES}}
        if include_timing:
            D['elapsed'] = round(self.elapsed, 3)
        return D


@dataclass
class Certificate(object):
    """
    Outcome of a search.

    Parameters
    ----------
    task : SearchTask
    outcome : {'witness', 'none', 'timeout'}
        'none' is only reported after the whole symmetry-reduced tree
        was traversed.
    witnesses : list of Realization
        One per orbit for goal 'all'; at most one otherwise.
    stats : SearchStats
    groups : dict
        Orders of the symmetry groups used.
    excluded : list of Certificate
        For `minimal_cuboid`: the 'none' certificates of the smaller
        cuboids.
    note : str
    manifest : dict, optional
    """
    task: SearchTask
    outcome: Literal['witness', 'none', 'timeout']
    witnesses: List[Realization] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)
    groups: Dict[str, int] = field(default_factory=dict)
    excluded: List['Certificate'] = field(default_factory=list)
    note: str = ''
    manifest: Optional[dict] = None

    def to_dict(self, include_timing: bool = False) -> dict:
        D = {}
        if self.manifest is not None:
            D['manifest'] = self.manifest
        D['task'] = {'triangulation': format_triangulation(self.task.triangulation),
                     'cuboid': str(self.task.cuboid),
                     'mode': self.task.mode,
                     'goal': self.task.goal}
        D['outcome'] = self.outcome
        D['witnesses'] = [[list(p) for p in w.coords] for w in self.witnesses]
        D['groups'] = dict(self.groups)
        D['stats'] = self.stats.to_dict(include_timing)
        if self.note:
            D['note'] = self.note
        if self.excluded:
            D['excluded'] = [e.to_dict(include_timing) for e in self.excluded]
        return D

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=1)

    @classmethod
    def from_dict(cls, D: dict) -> 'Certificate':
        """
        Rebuild a certificate; every witness is classified again.

        Raises
        ------
        ValueError
            If a witness does not reach the level required by the task.
        """
        T = D['task']
        task = SearchTask(parse_triangulation(T['triangulation']),
                          Cuboid.parse(T['cuboid']),
                          T['mode'],
                          T['goal'])
        witnesses = []
        for coords in D['witnesses']:
            r = Realization(task.triangulation, [tuple(p) for p in coords])
            level = classify(r).level
            if level < task.level:
                raise ValueError(f'witness {coords} is {level}, task requires {task.level}')
            if not all(task.cuboid.contains(p) for p in r.coords):
                raise ValueError(f'witness {coords} leaves the cuboid {task.cuboid}')
            witnesses.append(r)
        S = D.get('stats', {})
        stats = SearchStats(nodes=S.get('nodes', 0),
                            prunes=Counter(S.get('prunes', {})),
                            elapsed=S.get('elapsed', 0.))
        return cls(task=task,
                   outcome=D['outcome'],
                   witnesses=witnesses,
                   stats=stats,
                   groups=D.get('groups', {}),
                   excluded=[cls.from_dict(e) for e in D.get('excluded', [])],
                   note=D.get('note', ''),
                   manifest=D.get('manifest'))

    @classmethod
    def from_json(cls, text: str) -> 'Certificate':
        return cls.from_dict(json.loads(text))


class _Timeout(Exception):
    pass


class _Stop(Exception):
    pass


class _Searcher(object):

    def __init__(self, task: SearchTask, control: SearchControl):
        self.task = task
        self.control = control
        t = task.triangulation
        self.n = t.n
        self.points = task.cuboid.points()
        self.npoints = len(self.points)
        self.order = _placement_order(t)
        pos = {v: i for i, v in enumerate(self.order)}
        self.pos = pos
        self.back_neighbors = [[u for u in t.neighbors[v] if pos[u] < i]
                               for i, v in enumerate(self.order)]
        self.new_facets = [[] for _ in range(self.n)]
        for f in t.facets:
            self.new_facets[max(pos[w] for w in f)].append(f)
        self.layouts = {}
        for f, g in combinations(t.facets, 2):
            self.layouts[(f, g)] = facet_pair_layout(f, g)
            self.layouts[(g, f)] = facet_pair_layout(g, f)

        auts = automorphisms(t)
        self.aut_order = len(auts)
        rows = []
        for s in auts:
            inv = {s[v - 1]: v for v in t.vertices}
            rows.append([pos[inv[v]] for v in self.order])
        self.aut_pos = np.array(rows, dtype=np.int64)
        self.point_perms = _point_permutations(task.cuboid, self.points)
        self.groups = {'cuboid': len(cuboid_symmetries(task.cuboid)),
                       'point_maps': int(self.point_perms.shape[0]),
                       'automorphisms': self.aut_order}

        self.gp = task.level == Level.GENERAL_POSITION
        self.tables = self.gp and control.plane_pruning
        if self.tables:
            lines = _lattice_lines(self.points, task.cuboid)
            planes = _lattice_planes(self.points)
            self.point_lines = _incidence(lines, self.npoints)
            self.point_planes = _incidence(planes, self.npoints)
            self.line_count = np.zeros(len(lines), dtype=np.int64)
            self.plane_count = np.zeros(len(planes), dtype=np.int64)
            layer_of = []
            family = []
            offset = 0
            X = np.array(self.points, dtype=np.int64)
            for k, normal in enumerate(_PLANE_FAMILIES):
                h = X @ np.array(normal)
                h = h - h.min()
                nlayers = int(h.max()) + 1
                layer_of.append(h + offset)
                family.extend([k] * nlayers)
                offset += nlayers
            self.point_layers = np.stack(layer_of, axis=1)
            self.layer_family = np.array(family, dtype=np.int64)
            self.layer_size = np.bincount(self.point_layers.ravel(), minlength=offset)
            self.layer_count = np.zeros(offset, dtype=np.int64)

        self.assign = np.full(self.n, -1, dtype=np.int64)
        self.coord = [None] * (self.n + 1)
        self.occupied = bytearray(self.npoints)
        self.placed_labels = []
        self.placed_points = []
        self.placed_edges = []
        self.done_facets = []

        self.stats = SearchStats()
        self.witnesses = []
        self.prefixes = None
        self.stop_depth = None
        self._deadline = None

    # budget

    def _tick(self):
        self.stats.nodes += 1
        c = self.control
        if c.max_nodes is not None and self.stats.nodes > c.max_nodes:
            raise _Timeout()
        if self._deadline is not None and (self.stats.nodes & 255) == 0:
            if time.monotonic() > self._deadline:
                raise _Timeout()

    # checks

    def _reject(self, i, v, idx, p):
        C = self.coord
        if self.gp:
            if self.tables:
                if (self.line_count[self.point_lines[idx]] >= 2).any():
                    return 'collinear'
                if (self.plane_count[self.point_planes[idx]] >= 3).any():
                    return 'coplanar'
            else:
                placed = self.placed_points
                for a, b in combinations(placed, 2):
                    if _collinear(a, b, p):
                        return 'collinear'
                for a, b, c in combinations(placed, 3):
                    if _orient(a, b, c, p) == 0:
                        return 'coplanar'

        for a, b in self.placed_edges:
            if _strictly_inside_segment(p, C[a], C[b]):
                return 'point_on_edge'

        new_edges = []
        for u in self.back_neighbors[i]:
            q = C[u]
            for w in self.placed_labels:
                if w != u and _strictly_inside_segment(C[w], p, q):
                    return 'point_on_edge'
            for a, b in self.placed_edges:
                if not _segments_compatible(p, q, C[a], C[b]):
                    return 'edge_conflict'
            for q2 in new_edges:
                if not _segments_compatible(p, q, p, q2):
                    return 'edge_conflict'
            for f in self.done_facets:
                if u in f:
                    c1, c2 = [C[w] for w in f if w != u]
                    if _leaves_through_triangle(q, p, c1, c2):
                        return 'edge_conflict'
                elif _segment_hits_triangle(p, q, C[f[0]], C[f[1]], C[f[2]]):
                    return 'edge_conflict'
            new_edges.append(q)

        facets = self.new_facets[i]
        if facets:
            C[v] = p
            try:
                for f in facets:
                    if _collinear(C[f[0]], C[f[1]], C[f[2]]):
                        return 'degenerate_facet'
                for j, f in enumerate(facets):
                    for g in self.done_facets + facets[:j]:
                        fo, go, k = self.layouts[(f, g)]
                        if not _triangles_compatible(tuple(C[w] for w in fo),
                                                     tuple(C[w] for w in go),
                                                     k):
                            return 'facet_intersection'
            finally:
                C[v] = None
        return None

    def _capacity_ok(self, i):
        remaining = self.n - i - 1
        if remaining == 0:
            return True
        cap = np.minimum(3 - self.layer_count, self.layer_size - self.layer_count)
        per_family = np.bincount(self.layer_family, weights=cap, minlength=len(_PLANE_FAMILIES))
        return bool((per_family >= remaining).all())

    def _symmetry_ok(self):
        """
        False if some symmetry maps the current partial assignment to a
        lexicographically smaller one on the determined prefix.
        """
        a = self.assign
        B = a[self.aut_pos]
        img = self.point_perms[:, B]
        unknown = np.broadcast_to((B < 0)[None, :, :] | (a < 0)[None, None, :], img.shape)
        diff = (img != a) | unknown
        first = diff.argmax(axis=2)[..., None]
        has = np.take_along_axis(diff, first, axis=2)[..., 0]
        val = np.take_along_axis(img, first, axis=2)[..., 0]
        unk = np.take_along_axis(unknown, first, axis=2)[..., 0]
        smaller = has & ~unk & (val < a[first[..., 0]])
        return not smaller.any()

    # state

    def _place(self, i, v, idx, p):
        self.occupied[idx] = 1
        self.assign[i] = idx
        self.coord[v] = p
        self.placed_labels.append(v)
        self.placed_points.append(p)
        self.placed_edges.extend((v, u) for u in self.back_neighbors[i])
        self.done_facets.extend(self.new_facets[i])
        if self.tables:
            self.line_count[self.point_lines[idx]] += 1
            self.plane_count[self.point_planes[idx]] += 1
            self.layer_count[self.point_layers[idx]] += 1

    def _unplace(self, i, v, idx, p):
        self.occupied[idx] = 0
        self.assign[i] = -1
        self.coord[v] = None
        self.placed_labels.pop()
        self.placed_points.pop()
        del self.placed_edges[len(self.placed_edges) - len(self.back_neighbors[i]):]
        del self.done_facets[len(self.done_facets) - len(self.new_facets[i]):]
        if self.tables:
            self.line_count[self.point_lines[idx]] -= 1
            self.plane_count[self.point_planes[idx]] -= 1
            self.layer_count[self.point_layers[idx]] -= 1

    # traversal

    def _dfs(self, i):
        if i == self.stop_depth:
            self.prefixes.append(tuple(int(x) for x in self.assign[:i]))
            return
        if i == self.n:
            self._leaf()
            return
        v = self.order[i]
        for idx in range(self.npoints):
            if self.occupied[idx]:
                continue
            self._tick()
            p = self.points[idx]
            rule = self._reject(i, v, idx, p)
            if rule is not None:
                self.stats.prunes[rule] += 1
                continue
            self._place(i, v, idx, p)
            try:
                if self.tables and not self._capacity_ok(i):
                    self.stats.prunes['plane_capacity'] += 1
                elif not self._symmetry_ok():
                    self.stats.prunes['symmetry'] += 1
                else:
                    self._dfs(i + 1)
            finally:
                self._unplace(i, v, idx, p)

    def _leaf(self):
        coords = [None] * self.n
        for i, v in enumerate(self.order):
            coords[v - 1] = self.points[self.assign[i]]
        r = Realization(self.task.triangulation, coords)
        level = classify(r).level
        if level < self.task.level:
            raise RuntimeError(f'search produced {coords}, which classifies as {level} '
                               f'but {self.task.level} was required')
        self.witnesses.append(r)
        if self.control.logging: logging.debug(f'witness {len(self.witnesses)}: {coords}')
        if self.task.goal != 'all':
            raise _Stop()

    def replay(self, prefix):
        for i, idx in enumerate(prefix):
            self._place(i, self.order[i], idx, self.points[idx])

    def search(self, start=0):
        """Returns True when the traversal finished within budget."""
        if self.control.max_seconds is not None:
            self._deadline = time.monotonic() + self.control.max_seconds
        tic = time.perf_counter()
        try:
            self._dfs(start)
            finished = True
        except _Stop:
            finished = True
        except _Timeout:
            finished = False
        self.stats.elapsed = time.perf_counter() - tic
        return finished

    def collect_prefixes(self, depth):
        self.prefixes = []
        self.stop_depth = depth
        self._dfs(0)
        self.stop_depth = None
        return self.prefixes


def _search_branch(task, control, prefix):
    s = _Searcher(task, control)
    s.replay(prefix)
    finished = s.search(len(prefix))
    return s.witnesses, s.stats, finished


def _outcome(task, witnesses, finished):
    if witnesses and (task.goal != 'all' or finished):
        return 'witness'
    if not finished:
        return 'timeout'
    return 'none'


def run(task: SearchTask, control: Optional[SearchControl] = None) -> Certificate:
    """
    Search the cuboid for realizations of the triangulation.

    Parameters
    ----------
    task : SearchTask
    control : SearchControl, optional

    Returns
    -------
    certificate : Certificate
        Outcome 'witness' with verified realizations, 'none' after a
        complete traversal, or 'timeout' if a budget ran out first.
    """
    if control is None:
        control = SearchControl()
    root = _Searcher(task, control)
    if control.logging:
        logging.info(f'search {task.mode}/{task.goal} for n={task.triangulation.n} in {task.cuboid}; '
                     f'groups {root.groups}')

    depth = min(control.split_depth, task.triangulation.n - 1)
    if control.workers <= 1 or depth < 1:
        finished = root.search()
        cert = Certificate(task=task,
                           outcome=_outcome(task, root.witnesses, finished),
                           witnesses=root.witnesses,
                           stats=root.stats,
                           groups=root.groups)
    else:
        tic = time.perf_counter()
        try:
            prefixes = root.collect_prefixes(depth)
        except _Timeout:
            prefixes = None
        stats = root.stats
        witnesses = []
        finished = prefixes is not None
        results = []
        if prefixes is not None:
            results = Parallel(n_jobs=control.workers)(
                delayed(_search_branch)(task, control, prefix)
                for prefix in tqdm(prefixes, disable=not control.progress))
        # branches come back in prefix order, which is the sequential traversal order
        for branch_witnesses, branch_stats, branch_finished in results:
            stats.merge(branch_stats)
            witnesses.extend(branch_witnesses)
            finished = finished and branch_finished
        if task.goal != 'all':
            witnesses = witnesses[:1]
        stats.elapsed = time.perf_counter() - tic
        cert = Certificate(task=task,
                           outcome=_outcome(task, witnesses, finished),
                           witnesses=witnesses,
                           stats=stats,
                           groups=root.groups)
    if control.logging:
        logging.info(f'outcome {cert.outcome} after {cert.stats.nodes} nodes')
    return cert


def cuboids_in_order(max_side: int, min_points: int = 0) -> List[Cuboid]:
    """
    Canonical cuboids with sides 1..`max_side` and at least `min_points`
    lattice points, by increasing point count, ties broken by sorted sides.

    Examples
    --------
    >>> [str(c) for c in cuboids_in_order(2)]
    ['1x1x1', '1x1x2', '1x2x2', '2x2x2']
    """
    candidates = [Cuboid(a, b, c)
                  for a in range(1, max_side + 1)
                  for b in range(a, max_side + 1)
                  for c in range(b, max_side + 1)
                  if (a + 1) * (b + 1) * (c + 1) >= min_points]
    return sorted(candidates, key=Cuboid.minimality_key)


def minimal_cuboid(t: Triangulation,
                   mode: Literal['gp', 'linear'] = 'gp',
                   control: Optional[SearchControl] = None,
                   max_side: int = 4) -> Tuple[Cuboid, Certificate]:
    """
    Smallest canonical cuboid admitting a realization.

    Cuboids are tried in the order of `cuboids_in_order`; cuboids with
    a side of length 0 or fewer points than vertices are skipped.

    Returns
    -------
    cuboid : Cuboid
    certificate : Certificate
        The witness certificate, with the 'none' certificates of all
        smaller cuboids in `excluded`.

    Raises
    ------
    TimeoutError
        If a budget runs out before a witness is found.
    LookupError
        If no cuboid with sides up to `max_side` admits a realization.
    """
    excluded = []
    for cub in cuboids_in_order(max_side, t.n):
        cert = run(SearchTask(t, cub, mode, 'first'), control)
        if cert.outcome == 'witness':
            cert.excluded = excluded
            return cub, cert
        if cert.outcome == 'timeout':
            raise TimeoutError(f'budget exhausted in cuboid {cub} before a witness was found')
        excluded.append(cert)
    raise LookupError(f'no {mode} realization in cuboids with sides up to {max_side}')


def edge_count_obstruction(c: Cuboid, n: int, max_edges: int) -> bool:
    """
    True if an n-vertex torus, which has 3n edges, needs more than
    `max_edges` pairwise compatible segments.
    """
    return 3 * n > max_edges


def max_compatible_segments(c: Cuboid,
                            max_seconds: float = 60.,
                            workers: int = 1) -> Tuple[int, List[Tuple[Point3, Point3]]]:
    """
    Largest set of pairwise compatible segments between lattice points.

    Two segments conflict when they fail `segments_compatible`; this
    includes a segment passing through an endpoint of another. The
    maximum independent set of the conflict graph is found exactly with
    the CP-SAT solver.

    Raises
    ------
    ValueError
        If the cuboid has more than 32 points.
    TimeoutError
        If optimality is not proven within `max_seconds`.
    """
    from ortools.sat.python import cp_model

    points = c.points()
    if len(points) > 32:
        raise ValueError(f'cuboid {c} has {len(points)} points; at most 32 are supported')
    segments = list(combinations(points, 2))
    model = cp_model.CpModel()
    x = [model.NewBoolVar(f's{i}') for i in range(len(segments))]
    for i, j in combinations(range(len(segments)), 2):
        if not segments_compatible(segments[i], segments[j]):
            model.AddBoolOr([x[i].Not(), x[j].Not()])
    model.Maximize(sum(x))
    solver = cp_model.CpSolver()
    solver.parameters.max_time_in_seconds = float(max_seconds)
    solver.parameters.num_workers = max(1, workers)
    status = solver.Solve(model)
    if status != cp_model.OPTIMAL:
        raise TimeoutError(f'maximum not proven for cuboid {c} within {max_seconds}s')
    chosen = [segments[i] for i in range(len(segments)) if solver.Value(x[i])]
    return len(chosen), chosen


def census(triangulations: Sequence[Triangulation],
           cuboid: Cuboid,
           mode: Literal['gp', 'linear'] = 'gp',
           control: Optional[SearchControl] = None,
           goal: Literal['first', 'none'] = 'first',
           max_edges: Optional[int] = None) -> pd.DataFrame:
    """
    Run one search per triangulation.

    Parameters
    ----------
    triangulations : sequence of Triangulation
    cuboid : Cuboid
    mode : {'gp', 'linear'}
    control : SearchControl, optional
    goal : {'first', 'none'}
    max_edges : int, optional
        Maximum number of compatible segments in the cuboid; when given,
        tori with more than `max_edges` edges are settled without search.

    Returns
    -------
    summary : pd.DataFrame
        One row per triangulation with columns `index`, `n`, `outcome`,
        `witnesses`, `nodes` and `certificate`.
    """
    if control is None:
        control = SearchControl()
    rows = []
    for idx, t in enumerate(tqdm(triangulations, disable=not control.progress)):
        task = SearchTask(t, cuboid, mode, goal)
        if max_edges is not None and edge_count_obstruction(cuboid, t.n, max_edges):
            cert = Certificate(task=task, outcome='none',
                               note=f'{3 * t.n} edges exceed {max_edges} compatible segments')
        else:
            cert = run(task, control)
        rows.append({'index': idx,
                     'n': t.n,
                     'outcome': cert.outcome,
                     'witnesses': len(cert.witnesses),
                     'nodes': cert.stats.nodes,
                     'certificate': cert})
    return pd.DataFrame(rows, columns=['index', 'n', 'outcome', 'witnesses', 'nodes', 'certificate'])
