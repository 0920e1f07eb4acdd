"""
torusforge.heuristic
--------------------
Randomized search for realizations in boxes too large for exhaustive
search.

The objective counts violating facet pairs (`IEF-surrogate`): pairs that
intersect improperly, with every pair involving a degenerate facet
counted as violating. It is zero exactly on Linear realizations. For
the Proper and GeneralPosition levels, coplanar facets sharing an edge
and, respectively, collinear triples and coplanar quadruples of vertices
are added. Local search moves one vertex at a time to a nearby lattice
point, accepting improvements and, with a small probability, sideways
moves.

`shrink` pulls a realization into a smaller box by clearing boundary
layers and `realize_corpus` processes a sorted list of triangulations,
starting each one from the coordinates of the previous success.
"""

from dataclasses import dataclass, field
from itertools import combinations, product
import logging
import time
from typing import List, Optional, Sequence, Tuple, Union
import warnings

from joblib import Parallel, delayed
import numpy as np
import pandas as pd
from tqdm import tqdm

from .exactgeom import (Point3,
                        orient3d_many,
                        collinear_many,
                        _collinear,
                        _orient,
                        _triangles_compatible)
from .lattice_search import Cuboid
from .realization import (Level,
                          Realization,
                          classify,
                          facet_pair_layout)
from .surface import Triangulation
from ._utils import _item_seeds

FUNCTIONAL_NAME = 'IEF-surrogate'


@dataclass
class HeuristicConfig(object):
    """
    Parameters of the randomized search.

    Parameters
    ----------
    box : Cuboid, default=Cuboid(4, 4, 4)
        All coordinates stay in this lattice.
    max_distance : int, default=1
        A move sends one vertex to a lattice point at L-infinity distance
        at most `max_distance`, clamped to the box.
    plateau : float, default=0.05
        Probability of accepting a move that leaves the objective
        unchanged. Worse moves are never accepted.
    restarts : int, default=20
        Number of fresh random placements tried.
    steps : int, default=20000
        Moves per restart.
    seed : int, default=0
        Root of all random streams. Restart `k` of corpus item `i` uses
        `SeedSequence(seed, spawn_key=(i, k))`.
    workers : int, default=1
        Number of joblib workers running restarts in parallel; results
        do not depend on it.
    progress : bool, default=False
    logging : bool, default=False
        Write info and debug messages to log?
    """
    box: Cuboid = field(default_factory=lambda: Cuboid(4, 4, 4))
    max_distance: int = 1
    plateau: float = 0.05
    restarts: int = 20
    steps: int = 20000
    seed: int = 0
    workers: int = 1
    progress: bool = False
    logging: bool = False

    def __post_init__(self):
        if self.max_distance < 1:
            raise ValueError('max_distance must be at least 1')
        if not 0 <= self.plateau <= 1:
            raise ValueError('plateau must be a probability')
        if self.restarts < 1 or self.steps < 0:
            raise ValueError('restarts must be positive and steps nonnegative')


@dataclass
class RunLog(object):
    """
    Record of a `realize` call.

    Parameters
    ----------
    functional : str
        Name of the objective.
    trajectories : list
        For every restart tried, the `(step, value)` pairs at which the
        objective changed, starting with `(0, initial value)`.
    accepted : int
    rejected : int
    steps : int
        Moves attempted over all restarts.
    outcome : {'success', 'failure'}
    restart : int, optional
        Index of the successful restart; -1 for the recycled start.
    """
    functional: str = FUNCTIONAL_NAME
    trajectories: List[List[Tuple[int, int]]] = field(default_factory=list)
    accepted: int = 0
    rejected: int = 0
    steps: int = 0
    outcome: str = 'failure'
    restart: Optional[int] = None

    def record(self, attempt: '_Attempt'):
        self.trajectories.append(attempt.trajectory)
        self.accepted += attempt.accepted
        self.rejected += attempt.rejected
        self.steps += attempt.steps


@dataclass
class Failure(object):
    log: RunLog

    def __bool__(self):
        return False


class _Functional(object):
    """
    Objective value of a coordinate assignment with cheap single-vertex
    updates: only facet pairs in the star of the moved vertex are
    recomputed.
    """

    def __init__(self, t: Triangulation, coords: Sequence[Point3], require: Level):
        if require < Level.LINEAR:
            raise ValueError(f'required level must be at least Linear, got {require}')
        self.t = t
        self.facets = t.facets
        nf = len(self.facets)
        self.layouts = [[facet_pair_layout(f, g) if f != g else None for g in self.facets]
                        for f in self.facets]
        self.star = {v: [i for i, f in enumerate(self.facets) if v in f] for v in t.vertices}
        self.coords = [tuple(p) for p in coords]
        self.proper = require >= Level.PROPER
        self.gp = require >= Level.GENERAL_POSITION
        if self.gp:
            n = t.n
            self.triples = np.array(list(combinations(range(n), 3)), dtype=np.int64).reshape((-1, 3))
            self.quads = np.array(list(combinations(range(n), 4)), dtype=np.int64).reshape((-1, 4))
            self.triples_of = {v: self.triples[(self.triples == v - 1).any(axis=1)] for v in t.vertices}
            self.quads_of = {v: self.quads[(self.quads == v - 1).any(axis=1)] for v in t.vertices}

        self.degenerate = np.zeros(nf, bool)
        self.violations = np.zeros((nf, nf), bool)
        deg, rows = self._rows(range(nf), self.coords)
        self.degenerate = deg
        for i, row in rows.items():
            self.violations[i] = row
        self.primary = int(self.violations.sum()) // 2
        self.coplanar = self._proper_count(self.coords)
        self.degenerate_points = self._gp_count(self.coords)
        self._pending = None

    @property
    def value(self) -> int:
        return self.primary + self.coplanar + self.degenerate_points

    def _rows(self, S, P):
        F = self.facets
        deg = self.degenerate.copy()
        for i in S:
            a, b, c = F[i]
            deg[i] = _collinear(P[a - 1], P[b - 1], P[c - 1])
        S = set(S)
        rows = {}
        for i in sorted(S):
            row = np.zeros(len(F), bool)
            for j in range(len(F)):
                if j == i:
                    continue
                if j in rows:
                    row[j] = rows[j][i]
                elif deg[i] or deg[j]:
                    row[j] = True
                else:
                    fo, go, k = self.layouts[i][j]
                    row[j] = not _triangles_compatible(tuple(P[v - 1] for v in fo),
                                                       tuple(P[v - 1] for v in go),
                                                       k)
            rows[i] = row
        return deg, rows

    def _proper_count(self, P):
        if not self.proper:
            return 0
        count = 0
        for (a, b), (f, g) in self.t.edge_facets.items():
            c = [v for v in f if v not in (a, b)][0]
            d = [v for v in g if v not in (a, b)][0]
            count += _orient(P[a - 1], P[b - 1], P[c - 1], P[d - 1]) == 0
        return count

    def _gp_count(self, P, v=None):
        if not self.gp:
            return 0
        X = np.array(P, dtype=np.int64)
        T = self.triples if v is None else self.triples_of[v]
        Q = self.quads if v is None else self.quads_of[v]
        count = int(collinear_many(X[T]).sum()) if T.size else 0
        if Q.size:
            count += int((orient3d_many(X[Q]) == 0).sum())
        return count

    def propose(self, v: int, p: Point3) -> int:
        """Objective value after moving `v` to `p`; `commit` applies it."""
        P = list(self.coords)
        P[v - 1] = p
        S = self.star[v]
        deg, rows = self._rows(S, P)
        V = self.violations.copy()
        for i, row in rows.items():
            V[i] = row
            V[:, i] = row
        primary = int(V.sum()) // 2
        coplanar = self._proper_count(P)
        points = self.degenerate_points
        if self.gp:
            points += self._gp_count(P, v) - self._gp_count(self.coords, v)
        self._pending = (P, deg, V, primary, coplanar, points)
        return primary + coplanar + points

    def commit(self):
        (self.coords, self.degenerate, self.violations,
         self.primary, self.coplanar, self.degenerate_points) = self._pending
        self._pending = None


def intersection_edge_functional(t: Triangulation,
                                 coords: Sequence[Sequence[int]],
                                 require: Level = Level.LINEAR) -> int:
    """
    Number of violating facet pairs, plus the level penalties.

    Parameters
    ----------
    t : Triangulation
    coords : sequence of points
        `coords[v - 1]` is the point of `v`; repeated and collinear
        points are allowed.
    require : Level, default=Level.LINEAR
        With Proper, coplanar facets sharing an edge are added; with
        GeneralPosition, collinear triples and coplanar quadruples too.

    Returns
    -------
    value : int
        Zero if and only if the coordinates realize `t` at level
        `require` or better.

    Examples
    --------
    >>> from torusforge.data import tetrahedron, UNIT_TETRAHEDRON_COORDS
    >>> intersection_edge_functional(tetrahedron(), UNIT_TETRAHEDRON_COORDS)
    0
    """
    if len(coords) != t.n:
        raise ValueError(f'{len(coords)} points given for {t.n} vertices')
    return _Functional(t, [tuple(int(x) for x in p) for p in coords], require).value


@dataclass
class _Attempt(object):
    coords: Optional[List[Point3]]
    trajectory: List[Tuple[int, int]]
    accepted: int = 0
    rejected: int = 0
    steps: int = 0


def _restart(t: Triangulation,
             cfg: HeuristicConfig,
             require: Level,
             seed: np.random.SeedSequence,
             start: Optional[Sequence[Point3]] = None) -> _Attempt:
    rng = np.random.default_rng(seed)
    box = cfg.box
    if start is None:
        points = box.points()
        chosen = rng.choice(len(points), size=t.n, replace=False)
        coords = [points[i] for i in chosen]
    else:
        coords = [tuple(p) for p in start]
    occupied = set(coords)
    fun = _Functional(t, coords, require)
    value = fun.value
    attempt = _Attempt(None, [(0, value)])
    sides = np.array(box.sides)
    d = cfg.max_distance

    step = 0
    while value > 0 and step < cfg.steps:
        step += 1
        v = int(rng.integers(1, t.n + 1))
        shift = rng.integers(-d, d + 1, size=3)
        old = fun.coords[v - 1]
        new = tuple(int(x) for x in np.clip(np.array(old) + shift, 0, sides))
        if new == old or new in occupied:
            attempt.rejected += 1
            continue
        candidate = fun.propose(v, new)
        if candidate < value or (candidate == value and rng.random() < cfg.plateau):
            fun.commit()
            occupied.discard(old)
            occupied.add(new)
            attempt.accepted += 1
            if candidate != value:
                attempt.trajectory.append((step, candidate))
            value = candidate
        else:
            attempt.rejected += 1
    attempt.steps = step
    if value == 0:
        attempt.coords = list(fun.coords)
    return attempt


def _verified(t: Triangulation, coords, require: Level) -> Realization:
    r = Realization(t, coords)
    level = classify(r).level
    if level < require:
        raise RuntimeError(f'objective vanished at {coords}, which classifies as {level}, '
                           f'below {require}')
    return r


def _check_start(t: Triangulation, box: Cuboid, start):
    if len(start) != t.n:
        raise ValueError(f'{len(start)} starting points given for {t.n} vertices')
    if len(set(map(tuple, start))) != t.n:
        raise ValueError('starting points must be distinct')
    for p in start:
        if not box.contains(p):
            raise ValueError(f'starting point {tuple(p)} lies outside the box {box}')


def _realize(t: Triangulation,
             cfg: HeuristicConfig,
             require: Level,
             start=None,
             item: int = 0) -> Tuple[Optional[Realization], RunLog]:
    if cfg.box.point_count < t.n:
        raise ValueError(f'box {cfg.box} has {cfg.box.point_count} points for {t.n} vertices')
    log = RunLog()
    if start is not None:
        _check_start(t, cfg.box, start)
        recycled = np.random.SeedSequence(cfg.seed, spawn_key=(item, cfg.restarts))
        attempt = _restart(t, cfg, require, recycled, start)
        log.record(attempt)
        if attempt.coords is not None:
            log.outcome, log.restart = 'success', -1
            return _verified(t, attempt.coords, require), log

    seeds = _item_seeds(cfg.seed, item, cfg.restarts)
    batch = max(1, cfg.workers)
    for k in range(0, len(seeds), batch):
        chunk = seeds[k:k + batch]
        if cfg.workers > 1:
            attempts = Parallel(n_jobs=cfg.workers)(delayed(_restart)(t, cfg, require, s)
                                                    for s in chunk)
        else:
            attempts = [_restart(t, cfg, require, s) for s in chunk]
        for j, attempt in enumerate(attempts):
            log.record(attempt)
            if cfg.logging: logging.debug(f'restart {k + j}: final value {attempt.trajectory[-1][1]} '
                                          f'after {attempt.steps} steps')
            if attempt.coords is not None:
                log.outcome, log.restart = 'success', k + j
                return _verified(t, attempt.coords, require), log
    return None, log


def realize(t: Triangulation,
            cfg: Optional[HeuristicConfig] = None,
            require: Level = Level.GENERAL_POSITION,
            start: Optional[Sequence[Point3]] = None) -> Union[Realization, Failure]:
    """
    Search the box of `cfg` for a realization of `t`.

    Parameters
    ----------
    t : Triangulation
    cfg : HeuristicConfig, optional
    require : Level, default=Level.GENERAL_POSITION
    start : sequence of points, optional
        Starting coordinates tried before the random restarts.

    Returns
    -------
    result : Realization or Failure
        A realization classified at `require` or better with all points
        in the box, or a `Failure` carrying the run log. The result
        depends only on `cfg.seed`, not on `cfg.workers`.
    """
    if cfg is None:
        cfg = HeuristicConfig()
    r, log = _realize(t, cfg, require, start)
    if cfg.logging: logging.info(f'{FUNCTIONAL_NAME}: {log.outcome} after {log.steps} steps')
    if r is None:
        return Failure(log)
    return r


# Shrinking

def _containing_box(r: Realization) -> Tuple[int, int, int]:
    """Sorted sides of the cuboid {0..a}x{0..b}x{0..c} holding `r`, or its extents."""
    A = r.array()
    if A.min() < 0:
        return r.bounding_box()
    return tuple(sorted(int(x) for x in A.max(0)))


def _canonical_placement(r: Realization) -> Realization:
    r = r.normalized()
    ext = r.extents()
    axes = sorted(range(3), key=lambda i: (ext[i], i))
    return r.apply_isometry(axes)


def _clear_layer(r: Realization, axis: int, layer: int, require: Level, reach: int):
    t = r.triangulation
    ext = r.extents()
    lo = [0, 0, 0]
    hi = list(ext)
    if layer == 0:
        lo[axis] = 1
    else:
        hi[axis] = ext[axis] - 1
    fun = _Functional(t, r.coords, require)
    occupied = set(r.coords)
    for v in t.vertices:
        p = fun.coords[v - 1]
        if p[axis] != layer:
            continue
        candidates = []
        for shift in product(range(-reach, reach + 1), repeat=3):
            q = tuple(p[i] + shift[i] for i in range(3))
            if q in occupied or any(q[i] < lo[i] or q[i] > hi[i] for i in range(3)):
                continue
            candidates.append((max(map(abs, shift)), sum(map(abs, shift)), q))
        for _, _, q in sorted(candidates):
            if fun.propose(v, q) == 0:
                fun.commit()
                occupied.discard(p)
                occupied.add(q)
                break
        else:
            return None
    return _verified(t, fun.coords, require)


def shrink(t: Triangulation,
           r: Realization,
           require: Level = Level.GENERAL_POSITION,
           reach: int = 2,
           logging_on: bool = False) -> Realization:
    """
    Move a realization into a smaller box.

    The realization is translated to the origin with its extents sorted,
    then boundary layers are emptied one at a time, largest side first:
    each vertex of the layer moves to a free lattice point within
    L-infinity distance `reach`, inside the reduced box, keeping the
    level at least `require`. Stops when no layer can be emptied.

    Parameters
    ----------
    t : Triangulation
    r : Realization
        A realization of `t` at `require` or better.
    require : Level, default=Level.GENERAL_POSITION
    reach : int, default=2
    logging_on : bool, default=False

    Returns
    -------
    shrunk : Realization
        Never in a larger box than `r`; just `r` moved to the origin with
        sorted extents when no layer can be emptied.
    """
    if r.triangulation != t:
        raise ValueError('realization is not of the given triangulation')
    level = classify(r).level
    if level < require:
        raise ValueError(f'realization is {level}, below the required {require}')
    current = _canonical_placement(r)
    while True:
        ext = current.extents()
        improved = None
        for axis in sorted(range(3), key=lambda i: (-ext[i], i)):
            if ext[axis] == 0:
                continue
            for layer in (ext[axis], 0):
                improved = _clear_layer(current, axis, layer, require, reach)
                if improved is not None:
                    break
            if improved is not None:
                break
        if improved is None:
            break
        current = _canonical_placement(improved)
        if logging_on: logging.debug(f'shrink: box {Cuboid(*current.extents())}')

    before, after = _containing_box(r), _containing_box(current)
    if after == before:
        if logging_on: logging.debug(f'shrink: box stays {Cuboid(*after)}')
    return current


# Corpus runs

@dataclass
class CorpusItem(object):
    index: int
    triangulation: Triangulation
    realization: Optional[Realization]
    box: Cuboid
    steps: int
    seconds: float
    recycled: bool

    @property
    def outcome(self) -> str:
        return 'success' if self.realization is not None else 'failure'


@dataclass
class CorpusRun(object):
    items: List[CorpusItem] = field(default_factory=list)

    @property
    def successes(self) -> int:
        return sum(item.realization is not None for item in self.items)

    def summary(self) -> pd.DataFrame:
        """Success rate, steps and seconds, as a one-row DataFrame."""
        total = len(self.items)
        return pd.DataFrame({'items': [total],
                             'successes': [self.successes],
                             'success_rate': [self.successes / total if total else np.nan],
                             'recycled': [sum(item.recycled for item in self.items)],
                             'steps': [sum(item.steps for item in self.items)],
                             'seconds': [sum(item.seconds for item in self.items)]})


def realize_corpus(triangulations: Sequence[Triangulation],
                   cfg: Optional[HeuristicConfig] = None,
                   require: Level = Level.GENERAL_POSITION) -> CorpusRun:
    """
    Run `realize` on every triangulation of a sorted list.

    Each item first starts from the coordinates of the most recent
    success on the same number of vertices, then falls back to fresh
    restarts. Item `i` draws its random streams from spawn key `i`, so
    an item's result depends only on the seed and its predecessor.

    Parameters
    ----------
    triangulations : sequence of Triangulation
        Lexicographically sorted, as produced by `enumerate_tori`.
    cfg : HeuristicConfig, optional
    require : Level, default=Level.GENERAL_POSITION

    Returns
    -------
    run : CorpusRun
    """
    if cfg is None:
        cfg = HeuristicConfig()
    triangulations = list(triangulations)
    if triangulations != sorted(triangulations):
        msg = 'corpus is not sorted; recycling works best on sorted input'
        warnings.warn(msg)
        if cfg.logging: logging.warning(msg)
    run = CorpusRun()
    previous = None
    for index, t in enumerate(tqdm(triangulations, disable=not cfg.progress)):
        tic = time.perf_counter()
        start = previous.coords if previous is not None and previous.n == t.n else None
        r, log = _realize(t, cfg, require, start=start, item=index)
        run.items.append(CorpusItem(index=index,
                                    triangulation=t,
                                    realization=r,
                                    box=cfg.box,
                                    steps=log.steps,
                                    seconds=time.perf_counter() - tic,
                                    recycled=log.restart == -1))
        if r is not None:
            previous = r
        elif cfg.logging:
            logging.warning(f'item {index}: no realization in {cfg.box}')
    if cfg.logging: logging.info(f'{run.successes}/{len(run.items)} realized in {cfg.box}')
    return run


def format_corpus_results(run: CorpusRun, include_timing: bool = False) -> str:
    """
    One line per item: index, outcome, box, coordinates or FAIL, steps.

    The box of a success is its bounding cuboid; coordinates are written
    as `x,y,z` separated by `;`.
    """
    lines = []
    for item in run.items:
        if item.realization is not None:
            box = str(Cuboid(*item.realization.extents()))
            coords = ';'.join(','.join(str(x) for x in p) for p in item.realization.coords)
        else:
            box, coords = str(item.box), 'FAIL'
        line = f'{item.index} {item.outcome} {box} {coords} {item.steps}'
        if include_timing:
            line += f' {item.seconds:.3f}'
        lines.append(line)
    return ''.join(line + '\n' for line in lines)
