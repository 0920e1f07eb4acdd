from io import StringIO
from itertools import permutations

import numpy as np
import pytest

from torusforge.data import moebius_torus, octahedron, square_pyramid, tetrahedron
from torusforge.surface import (Triangulation,
                                automorphisms,
                                canonical_form,
                                canonical_labeling,
                                format_triangulation,
                                format_triangulations,
                                heawood_lower_bound,
                                is_isomorphic,
                                is_neighborly,
                                parse_triangulation,
                                parse_triangulations,
                                permutation_from_cycle,
                                relabel,
                                validate)

rng = np.random.default_rng(0)

RP2 = Triangulation(6, [(1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
                        (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6)])

TET = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]


def brute_force_automorphisms(t):
    F = set(t.facets)
    found = []
    for perm in permutations(t.vertices):
        if {tuple(sorted(perm[v - 1] for v in f)) for f in F} == F:
            found.append(perm)
    return sorted(found)


def random_relabel(t):
    return relabel(t, tuple(int(x) for x in rng.permutation(t.n) + 1))


def test_moebius_report():
    t = moebius_torus()
    report = validate(t)
    assert report.n == 7
    assert report.edge_count == 21
    assert report.facet_count == 14
    assert report.euler == 0
    assert report.orientable and report.connected
    assert report.genus == 1
    assert report.is_torus
    assert is_neighborly(t)


def test_projective_plane():
    report = validate(RP2)
    assert report.euler == 1
    assert not report.orientable
    assert report.genus is None
    assert not report.is_torus
    assert is_neighborly(RP2)


def test_disconnected():
    t = Triangulation(8, TET + [tuple(v + 4 for v in f) for f in TET])
    report = validate(t)
    assert not report.connected
    assert report.euler == 4
    assert report.genus is None


def test_edge_in_three_facets():
    t = Triangulation(5, [(1, 2, 3), (1, 2, 4), (1, 2, 5)])
    with pytest.raises(ValueError, match=r'edge \(1, 2\) lies in 3'):
        validate(t)


def test_pinched_vertex():
    t = Triangulation(7, TET + [(1, 5, 6), (1, 5, 7), (1, 6, 7), (5, 6, 7)])
    with pytest.raises(ValueError, match='link of vertex 1 is not a single cycle'):
        validate(t)


@pytest.mark.parametrize("n,facets,message", [
    (4, [(1, 1, 2)], 'degenerate facet'),
    (4, [(1, 2, 9)], 'label out of range'),
    (4, [(1, 2)], 'does not have 3 vertices'),
    (4, TET + [(3, 2, 1)], 'repeated'),
    (5, TET, 'vertex 5 lies in no facet'),
])
def test_invalid_triangulation(n, facets, message):
    with pytest.raises(ValueError, match=message):
        Triangulation(n, facets)


def test_facets_are_normalized():
    t = Triangulation(4, [(4, 3, 2), (3, 1, 2), (4, 1, 2), (1, 4, 3)])
    assert t.facets == tuple(TET)
    assert t == tetrahedron()


@pytest.mark.parametrize("chi,bound", [(2, 4), (1, 6), (0, 7), (-1, 8), (-2, 9), (-10, 12)])
def test_heawood(chi, bound):
    assert heawood_lower_bound(chi) == bound


def test_heawood_invalid():
    with pytest.raises(ValueError):
        heawood_lower_bound(3)


@pytest.mark.parametrize("t,order", [(moebius_torus(), 42),
                                     (tetrahedron(), 24),
                                     (octahedron(), 48),
                                     (RP2, 60)])
def test_automorphism_order(t, order):
    aut = automorphisms(t)
    assert len(aut) == order
    assert aut[0] == tuple(t.vertices)


@pytest.mark.parametrize("t", [tetrahedron(), octahedron(), square_pyramid(), RP2])
def test_automorphisms_brute_force(t):
    assert automorphisms(t) == brute_force_automorphisms(t)


def test_moebius_canonical_prefix():
    c = canonical_form(moebius_torus())
    assert c.facets[:6] == ((1, 2, 3), (1, 2, 4), (1, 3, 5),
                            (1, 4, 6), (1, 5, 7), (1, 6, 7))
    assert validate(c).is_torus


@pytest.mark.parametrize("t", [moebius_torus(), octahedron(), square_pyramid(), RP2])
def test_canonical_form_invariant(t):
    c = canonical_form(t)
    assert canonical_form(c) == c
    for _ in range(5):
        s = random_relabel(t)
        assert canonical_form(s) == c
        assert is_isomorphic(s, t)


def test_canonical_labeling_maps_to_form():
    t = random_relabel(moebius_torus())
    assert relabel(t, canonical_labeling(t)) == canonical_form(t)


def test_not_isomorphic():
    assert not is_isomorphic(octahedron(), RP2)
    assert not is_isomorphic(tetrahedron(), square_pyramid())


def test_permutation_from_cycle():
    perm = permutation_from_cycle((1, 2, 5, 4, 6, 7), 7)
    assert perm == (2, 5, 3, 6, 4, 7, 1)
    assert is_isomorphic(relabel(moebius_torus(), perm), moebius_torus())
    assert relabel(moebius_torus(), perm) == canonical_form(moebius_torus())


def test_format_parse():
    t = moebius_torus()
    line = format_triangulation(t)
    assert line.startswith('7: 1 2 4, ')
    assert parse_triangulation(line) == t
    assert str(t) == line


def test_parse_many():
    text = '# tori\n\n' + format_triangulations([tetrahedron(), octahedron()])
    assert parse_triangulations(text) == [tetrahedron(), octahedron()]
    assert parse_triangulations(text.encode('ascii')) == [tetrahedron(), octahedron()]
    assert parse_triangulations(StringIO(text)) == [tetrahedron(), octahedron()]


@pytest.mark.parametrize("text,message", [
    ('4: 1 2 3, 1 2 4, 1 3 4, 2 3 4\n4: 1 2 3, 1 2\n', 'line 2:'),
    ('# header\n4 1 2 3\n', 'line 2:'),
    ('4: 1 1 2, 1 2 4, 1 3 4, 2 3 4\n', 'line 1: degenerate facet'),
])
def test_parse_errors(text, message):
    with pytest.raises(ValueError, match=message):
        parse_triangulations(text)
