"""
Long searches reproducing the known counts. Run with
`pytest --test-size=exhaustive`.
"""

from itertools import combinations

import pytest

from torusforge.data import moebius_torus
from torusforge.enumerate import load_corpus
from torusforge.heuristic import HeuristicConfig, realize_corpus
from torusforge.lattice_search import Cuboid, SearchControl, SearchTask, census, minimal_cuboid, run
from torusforge.realization import Level, chirotope, classify, om_canonical, om_classes, om_equivalent

pytestmark = pytest.mark.slow


@pytest.fixture(scope='module')
def moebius_witnesses():
    cert = run(SearchTask(moebius_torus(), Cuboid(2, 3, 3), 'gp', 'all'))
    assert cert.outcome == 'witness'
    return cert.witnesses


@pytest.mark.parametrize("plane_pruning", [True, False])
def test_moebius_none_in_cube(plane_pruning):
    cert = run(SearchTask(moebius_torus(), Cuboid(2, 2, 2), 'gp', 'none'),
               SearchControl(plane_pruning=plane_pruning))
    assert cert.outcome == 'none'


def test_moebius_none_in_2x2x4():
    cert = run(SearchTask(moebius_torus(), Cuboid(2, 2, 4), 'gp', 'none'))
    assert cert.outcome == 'none'


def test_moebius_minimal_cuboid():
    cuboid, cert = minimal_cuboid(moebius_torus(), 'gp')
    assert cuboid == Cuboid(2, 3, 3)
    assert all(e.outcome == 'none' for e in cert.excluded)


def test_moebius_orbits_and_classes(moebius_witnesses):
    assert len(moebius_witnesses) == 46
    classes = om_classes([chirotope(w) for w in moebius_witnesses], moebius_torus())
    assert len(classes) == 13


def test_moebius_witnesses_uniform(moebius_witnesses):
    for w in moebius_witnesses:
        assert chirotope(w).uniform


def test_moebius_class_representatives_distinct(moebius_witnesses):
    t = moebius_torus()
    chis = [chirotope(w) for w in moebius_witnesses]
    reps = [chis[c[0]] for c in om_classes(chis, t)]
    for c1, c2 in combinations(reps, 2):
        assert not om_equivalent(c1, c2, t)


def test_moebius_witnesses_translated(moebius_witnesses):
    t = moebius_torus()
    big = Cuboid(4, 5, 5)
    for w in moebius_witnesses:
        moved = w.translate((1, 1, 1))
        assert all(big.contains(p) for p in moved.coords)
        assert classify(moved).level == Level.GENERAL_POSITION
        assert om_canonical(chirotope(moved), t) == om_canonical(chirotope(w), t)


def test_two_eight_vertex_tori_in_2x2x3(corpus_dir):
    df = census(load_corpus(8), Cuboid(2, 2, 3), 'gp')
    assert 'timeout' not in set(df['outcome'])
    assert (df['outcome'] == 'witness').sum() == 2


def test_linear_in_2x2x2(corpus_dir):
    df = census(load_corpus(8), Cuboid(2, 2, 2), 'linear')
    assert 'timeout' not in set(df['outcome'])
    assert (df['outcome'] == 'witness').sum() == 5
    assert (df['outcome'] == 'none').sum() == 2


@pytest.mark.parametrize("n,count", [(9, 31), (10, 567)])
def test_linear_in_1x2x2(corpus_dir, n, count):
    df = census(load_corpus(n), Cuboid(1, 2, 2), 'linear')
    assert 'timeout' not in set(df['outcome'])
    assert (df['outcome'] == 'witness').sum() == count


@pytest.mark.parametrize("n", [7, 8, 9, 10])
def test_no_linear_in_1x1x2(corpus_dir, n):
    df = census(load_corpus(n), Cuboid(1, 1, 2), 'linear', goal='none')
    assert set(df['outcome']) == {'none'}


@pytest.mark.parametrize("n,sides", [(9, (3, 3, 3)), (10, (4, 4, 4))])
def test_heuristic_realizes_corpus(corpus_dir, n, sides):
    tris = load_corpus(n)
    corpus = realize_corpus(tris, HeuristicConfig(box=Cuboid(*sides), seed=0))
    assert corpus.successes == len(tris)


def test_ten_vertex_tori_in_3x3x3(corpus_dir):
    tris = load_corpus(10)
    corpus = realize_corpus(tris, HeuristicConfig(box=Cuboid(3, 3, 3), seed=0))
    failures = [item.triangulation for item in corpus.items if item.realization is None]
    df = census(failures, Cuboid(3, 3, 3), 'gp')
    assert 'timeout' not in set(df['outcome'])
    assert (df['outcome'] == 'none').sum() == 11
