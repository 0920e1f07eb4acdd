import pandas as pd
import pytest

from torusforge.data import moebius_torus
from torusforge.enumerate import (KNOWN_TORUS_COUNTS,
                                  EnumerationControl,
                                  corpus_paths,
                                  enumerate_all_up_to,
                                  enumerate_tori,
                                  flip,
                                  load_corpus,
                                  seed_torus,
                                  write_corpus)
from torusforge.surface import canonical_form, is_neighborly, validate


def test_counts(torus_n):
    run = enumerate_tori(torus_n)
    assert run.count == KNOWN_TORUS_COUNTS[torus_n]
    assert run.results == sorted(run.results)
    assert len(set(run.results)) == run.count
    for t in run.results:
        assert t.n == torus_n
        assert validate(t).is_torus


def test_results_are_canonical():
    run = enumerate_tori(8)
    for t in run.results:
        assert canonical_form(t) == t


def test_below_heawood_bound():
    run = enumerate_tori(6)
    assert run.count == 0
    assert 'Heawood' in run.note


def test_all_up_to():
    runs = enumerate_all_up_to(8)
    assert [r.n for r in runs] == [7, 8]
    assert [r.count for r in runs] == [1, 7]


def test_summary():
    df = enumerate_tori(7).summary()
    assert isinstance(df, pd.DataFrame)
    assert list(df.columns) == ['n', 'count', 'flips', 'elapsed']
    assert df['count'].iloc[0] == 1


def test_workers_agree(workers):
    control = EnumerationControl(workers=workers)
    assert enumerate_tori(8, control).results == enumerate_tori(8).results


def test_neighborly_has_no_flips():
    t = moebius_torus()
    assert is_neighborly(t)
    assert all(flip(t, e) is None for e in t.edges)


def test_flip_keeps_torus():
    t = seed_torus(9)
    flipped = [s for s in (flip(t, e) for e in t.edges) if s is not None]
    assert flipped
    for s in flipped:
        assert validate(s).is_torus
        assert len(s.edges) == len(t.edges)


@pytest.mark.parametrize("n", [7, 8, 10])
def test_seed_torus(n):
    t = seed_torus(n)
    assert t.n == n
    assert validate(t).is_torus


def test_corpus_roundtrip(corpus_dir):
    run = enumerate_tori(8)
    path = write_corpus(run, header=['test corpus'])
    assert path.parent == corpus_dir
    assert path.read_text().startswith('# test corpus\n')
    assert load_corpus(8) == run.results


def test_corpus_mismatch_regenerates(tmp_path):
    run = enumerate_tori(8)
    path, meta = corpus_paths(8, tmp_path)
    write_corpus(run, tmp_path)
    meta.write_text('count=6\n')
    with pytest.warns(UserWarning, match='regenerating'):
        tris = load_corpus(8, tmp_path)
    assert tris == run.results
    assert meta.read_text() == 'count=7\n'


def test_missing_corpus_is_generated(tmp_path):
    assert len(load_corpus(7, tmp_path)) == 1
    assert corpus_paths(7, tmp_path)[0].exists()
