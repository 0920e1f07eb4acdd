"""
torusforge.enumerate
--------------------
Isomorphism-free generation of triangulated tori.

Triangulations of the torus with a fixed number of vertices are
connected under diagonal flips. Starting from one torus on `n` vertices,
the closure of the flip graph, reduced to canonical forms, is the set of
all tori on `n` vertices.
"""

from dataclasses import dataclass, field
import logging
from pathlib import Path
import time
from typing import List, Optional, Set
import warnings

from joblib import Parallel, delayed
import pandas as pd
from tqdm import tqdm

from .data import moebius_torus, stellar_subdivision
from .surface import (Triangulation,
                      canonical_form,
                      format_triangulations,
                      heawood_lower_bound,
                      parse_triangulations)
from ._utils import cache_dir

# Number of triangulated tori with n vertices, n = 7..12.
KNOWN_TORUS_COUNTS = {7: 1, 8: 7, 9: 112, 10: 2109, 11: 37867, 12: 605496}


@dataclass
class EnumerationControl(object):
    """
    Control parameters for torus enumeration.

    Parameters
    ----------
    workers : int, default=1
        Number of joblib workers expanding the flip frontier.
    progress : bool, default=False
        Show a tqdm progress bar over the triangulations found.
    logging : bool, default=False
        Write info and debug messages to log?
    """
    workers: int = 1
    progress: bool = False
    logging: bool = False


@dataclass
class EnumerationRun(object):
    """
    All tori with `n` vertices, in lexicographic order.

    Parameters
    ----------
    n : int
        Number of vertices.
    results : list of Triangulation
        Canonical forms, sorted.
    flips : int
        Number of flips examined.
    elapsed : float
        Wall time in seconds.
    note : str
        Explanation for an empty result.
    """
    n: int
    results: List[Triangulation] = field(default_factory=list)
    flips: int = 0
    elapsed: float = 0.
    note: str = ''

    @property
    def count(self) -> int:
        return len(self.results)

    def summary(self) -> pd.DataFrame:
        return pd.DataFrame({'n': [self.n],
                             'count': [self.count],
                             'flips': [self.flips],
                             'elapsed': [self.elapsed]})


def flip(t: Triangulation, edge) -> Optional[Triangulation]:
    """
    Replace the edge `ab` with facets `abc`, `abd` by the edge `cd`.

    Returns None when `cd` is already an edge, in which case the flip
    would not give a simplicial complex.
    """
    a, b = sorted(edge)
    f, g = t.edge_facets[(a, b)]
    c = [v for v in f if v not in (a, b)][0]
    d = [v for v in g if v not in (a, b)][0]
    if (min(c, d), max(c, d)) in t.edge_facets:
        return None
    facets = [h for h in t.facets if h not in (f, g)] + [(a, c, d), (b, c, d)]
    return Triangulation(t.n, facets)


def _flip_neighbors(t: Triangulation):
    found = set()
    count = 0
    for e in t.edge_facets:
        s = flip(t, e)
        count += 1
        if s is not None:
            found.add(canonical_form(s))
    return found, count


def seed_torus(n: int) -> Triangulation:
    """The 7-vertex torus with `n - 7` stellar subdivisions."""
    t = moebius_torus()
    while t.n < n:
        t = stellar_subdivision(t, t.facets[0])
    return t


def enumerate_tori(n: int,
                   control: Optional[EnumerationControl] = None) -> EnumerationRun:
    """
    Canonical forms of all triangulated tori with exactly `n` vertices.

    Parameters
    ----------
    n : int
        Number of vertices.
    control : EnumerationControl, optional

    Returns
    -------
    run : EnumerationRun
        Empty, with a note, when `n` is below the Heawood bound.

    Examples
    --------
    >>> enumerate_tori(8).count
    7
    """
    if control is None:
        control = EnumerationControl()
    bound = heawood_lower_bound(0)
    if n < bound:
        note = f'no torus triangulation has {n} < {bound} vertices (Heawood bound)'
        if control.logging: logging.info(note)
        return EnumerationRun(n=n, note=note)

    tic = time.perf_counter()
    start = canonical_form(seed_torus(n))
    seen: Set[Triangulation] = {start}
    frontier = [start]
    flips = 0
    pb = tqdm(total=KNOWN_TORUS_COUNTS.get(n), desc=f'n={n}', disable=not control.progress)
    pb.update(1)
    while frontier:
        if control.workers > 1:
            expanded = Parallel(n_jobs=control.workers)(delayed(_flip_neighbors)(t) for t in frontier)
        else:
            expanded = [_flip_neighbors(t) for t in frontier]
        new = []
        for found, count in expanded:
            flips += count
            for s in found:
                if s not in seen:
                    seen.add(s)
                    new.append(s)
        pb.update(len(new))
        frontier = sorted(new)
        if control.logging: logging.debug(f'n={n}: {len(seen)} found, frontier {len(frontier)}')
    pb.close()

    results = sorted(seen)
    elapsed = time.perf_counter() - tic
    if control.logging: logging.info(f'n={n}: {len(results)} tori after {flips} flips in {elapsed:.1f}s')
    expected = KNOWN_TORUS_COUNTS.get(n)
    if expected is not None and expected != len(results):
        msg = f'found {len(results)} tori with {n} vertices, expected {expected}'
        warnings.warn(msg)
        if control.logging: logging.warning(msg)
    return EnumerationRun(n=n, results=results, flips=flips, elapsed=elapsed)


def enumerate_all_up_to(nmax: int,
                        control: Optional[EnumerationControl] = None) -> List[EnumerationRun]:
    """Runs for n = 7..nmax."""
    return [enumerate_tori(n, control) for n in range(heawood_lower_bound(0), nmax + 1)]


# On-disk corpus

def corpus_paths(n: int, directory=None):
    directory = Path(directory) if directory is not None else cache_dir()
    return directory / f'tori_n{n}.txt', directory / f'tori_n{n}.meta'


def write_corpus(run: EnumerationRun, directory=None, header: Optional[List[str]] = None):
    """Write `tori_n<k>.txt` and its `tori_n<k>.meta` sidecar."""
    path, meta = corpus_paths(run.n, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ''.join(f'# {h}\n' for h in (header or []))
    path.write_text(lines + format_triangulations(run.results))
    meta.write_text(f'count={run.count}\n')
    return path


def _read_meta_count(meta: Path) -> Optional[int]:
    for line in meta.read_text().splitlines():
        key, sep, value = line.partition('=')
        if sep and key.strip() == 'count':
            return int(value)
    return None


def load_corpus(n: int,
                directory=None,
                control: Optional[EnumerationControl] = None) -> List[Triangulation]:
    """
    The tori with `n` vertices, read from the cache when present and
    consistent with its `.meta` count, otherwise regenerated and
    written back.
    """
    if control is None:
        control = EnumerationControl()
    path, meta = corpus_paths(n, directory)
    if path.exists() and meta.exists():
        tris = parse_triangulations(path.read_text())
        count = _read_meta_count(meta)
        if count == len(tris):
            if control.logging: logging.debug(f'read {count} tori from {path}')
            return tris
        msg = f'{path} holds {len(tris)} triangulations but {meta.name} says {count}; regenerating'
        warnings.warn(msg)
        if control.logging: logging.warning(msg)
    run = enumerate_tori(n, control)
    if run.results:
        write_corpus(run, directory)
    return run.results

