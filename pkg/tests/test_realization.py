import json

import numpy as np
import pytest

from torusforge.data import (DART_PYRAMID_COORDS,
                             FRAME_TORUS_COORDS,
                             OCTAHEDRON_COORDS,
                             SQUARE_PYRAMID_COORDS,
                             UNIT_TETRAHEDRON_COORDS,
                             frame_torus,
                             octahedron,
                             square_pyramid,
                             tetrahedron)
from torusforge.realization import (Chirotope,
                                    Level,
                                    MergeFailure,
                                    PolyhedralMap,
                                    Realization,
                                    chirotope,
                                    classify,
                                    in_general_position,
                                    match_catalogue,
                                    merge_coplanar,
                                    om_canonical,
                                    om_classes,
                                    om_equivalent,
                                    parse_chirotope,
                                    realizations_from_json,
                                    realizations_to_json,
                                    relabel_chirotope)
from torusforge.surface import automorphisms, validate

rng = np.random.default_rng(1)


def random_realization(t, side=20):
    coords = rng.choice(side ** 3, size=t.n, replace=False)
    return Realization(t, [tuple(int(x) for x in np.unravel_index(c, (side,) * 3)) for c in coords])


def test_octahedron_is_proper():
    cls = classify(Realization(octahedron(), OCTAHEDRON_COORDS))
    assert cls.level == Level.PROPER
    assert cls.reason == 'coplanar_quadruple'
    assert cls.witness == (1, 2, 3, 4)


def test_tetrahedron_is_gp():
    cls = classify(Realization(tetrahedron(), UNIT_TETRAHEDRON_COORDS))
    assert cls.level == Level.GENERAL_POSITION
    assert str(cls) == 'GeneralPosition'


def test_square_pyramid_merges():
    r = Realization(square_pyramid(), SQUARE_PYRAMID_COORDS)
    cls = classify(r)
    assert cls.level == Level.LINEAR
    assert [set(pair) for pair in cls.witness] == [{(1, 2, 3), (1, 3, 4)}]
    merged = merge_coplanar(r)
    assert isinstance(merged, PolyhedralMap)
    assert len(merged.faces) == 5
    assert sorted(len(f) for f in merged.faces) == [3, 3, 3, 3, 4]
    assert ((1, 2, 3), (1, 3, 4)) in merged.provenance
    assert len(merged.edges) == 8


def test_dart_fails_to_merge():
    r = Realization(square_pyramid(), DART_PYRAMID_COORDS)
    assert classify(r).level == Level.LINEAR
    failure = merge_coplanar(r)
    assert isinstance(failure, MergeFailure)
    assert 'strictly convex' in failure.reason
    assert str(failure).startswith('merge failed:')


def test_frame_torus_merges_to_quadrilaterals():
    t = frame_torus()
    report = validate(t)
    assert report.is_torus
    assert (report.n, report.edge_count, report.facet_count) == (16, 48, 32)
    r = Realization(t, FRAME_TORUS_COORDS)
    cls = classify(r)
    assert cls.level == Level.LINEAR
    assert cls.reason == 'coplanar_neighbors'
    assert len(cls.witness) == 16
    merged = merge_coplanar(r)
    assert isinstance(merged, PolyhedralMap)
    assert len(merged.faces) == 16
    assert all(len(f) == 4 for f in merged.faces)
    assert len(merged.edges) == 32
    assert sorted(merged.vertices) == list(range(1, 17))


def test_merge_needs_embedding():
    coords = list(SQUARE_PYRAMID_COORDS)
    coords[4] = coords[0]
    r = Realization(square_pyramid(), coords)
    cls = classify(r)
    assert cls.level == Level.NOT_EMBEDDED
    assert cls.reason == 'duplicate_point'
    assert cls.witness == (1, 5)
    with pytest.raises(ValueError, match='Linear'):
        merge_coplanar(r)


def test_degenerate_facet():
    r = Realization(tetrahedron(), [(0, 0, 0), (1, 0, 0), (2, 0, 0), (0, 0, 1)])
    cls = classify(r)
    assert cls.level == Level.NOT_EMBEDDED
    assert cls.reason == 'degenerate_facet'


def test_point_count():
    with pytest.raises(ValueError, match='3 points given for 4 vertices'):
        Realization(tetrahedron(), UNIT_TETRAHEDRON_COORDS[:3])


def test_realization_helpers():
    r = Realization(square_pyramid(), SQUARE_PYRAMID_COORDS).translate((2, 3, -1))
    assert r.extents() == (1, 1, 1)
    assert r.normalized().coords == SQUARE_PYRAMID_COORDS
    s = Realization(octahedron(), OCTAHEDRON_COORDS).apply_isometry((2, 0, 1), (1, -1, 1))
    assert s.point(5) == (1, 0, 0)
    assert classify(s).level == Level.PROPER


def test_in_general_position():
    assert in_general_position(UNIT_TETRAHEDRON_COORDS)
    assert not in_general_position(SQUARE_PYRAMID_COORDS)
    assert not in_general_position([(0, 0, 0), (1, 1, 1), (2, 2, 2)])


def test_chirotope_format():
    c = chirotope(Realization(tetrahedron(), UNIT_TETRAHEDRON_COORDS))
    assert c.to_string() == 'n=4 +'
    assert c.uniform
    assert (-c).to_string() == 'n=4 -'
    assert parse_chirotope('n=4 −') == -c
    assert parse_chirotope(c.to_string()) == c


def test_chirotope_of_octahedron():
    c = chirotope(Realization(octahedron(), OCTAHEDRON_COORDS))
    assert len(c.signs) == 15
    assert not c.uniform
    assert c.signs[0] == 0


@pytest.mark.parametrize("text", ['4 +', 'n=4 +x', 'n=5 ++'])
def test_parse_chirotope_errors(text):
    with pytest.raises(ValueError):
        parse_chirotope(text)


def test_chirotope_validation():
    with pytest.raises(ValueError):
        Chirotope(4, (2,))


def test_relabel_matches_realization():
    r = random_realization(octahedron())
    c = chirotope(r)
    for _ in range(5):
        perm = tuple(int(x) for x in rng.permutation(r.n) + 1)
        assert relabel_chirotope(c, perm) == chirotope(r.relabel(perm))


def test_om_equivalence():
    t = octahedron()
    r = random_realization(t)
    c = chirotope(r)
    aut = automorphisms(t)
    for perm in aut[1:4]:
        d = chirotope(r.relabel(perm))
        assert om_equivalent(c, d, aut)
        assert om_equivalent(c, -d, t)
        assert om_canonical(d, aut) == om_canonical(c, aut)
    assert om_equivalent(c, -c)


def test_om_classes():
    t = octahedron()
    c = chirotope(random_realization(t))
    d = chirotope(Realization(t, OCTAHEDRON_COORDS))
    perm = automorphisms(t)[1]
    chis = [c, d, relabel_chirotope(c, perm), -c]
    classes = om_classes(chis, t)
    assert sorted(classes) == [[0, 2, 3], [1]]
    assert [0, 3] in om_classes(chis)


def test_match_catalogue():
    t = octahedron()
    c = chirotope(random_realization(t))
    d = chirotope(Realization(t, OCTAHEDRON_COORDS))
    with pytest.warns(UserWarning, match=r'entries \[1\]'):
        found = match_catalogue([c, -c], [c, d], t)
    assert found == [0, 0]


def test_json_roundtrip():
    rs = [Realization(tetrahedron(), UNIT_TETRAHEDRON_COORDS),
          Realization(square_pyramid(), SQUARE_PYRAMID_COORDS)]
    text = realizations_to_json(rs, manifest={'command': 'test'})
    D = json.loads(text)
    assert D['manifest'] == {'command': 'test'}
    assert [d['class'] for d in D['realizations']] == ['GeneralPosition', 'Linear']
    assert realizations_from_json(text) == rs
    assert realizations_from_json(json.dumps(rs[0].to_dict())) == rs[:1]


def test_json_missing_field():
    with pytest.raises(ValueError, match='coords'):
        realizations_from_json('{"n": 4, "facets": [[1, 2, 3]]}')


@pytest.mark.parametrize("name,level", [('gp', Level.GENERAL_POSITION),
                                        ('GeneralPosition', Level.GENERAL_POSITION),
                                        ('general_position', Level.GENERAL_POSITION),
                                        ('linear', Level.LINEAR),
                                        ('Proper', Level.PROPER),
                                        ('NotEmbedded', Level.NOT_EMBEDDED)])
def test_level_parse(name, level):
    assert Level.parse(name) == level


def test_level_format():
    assert f'{Level.LINEAR:>8}' == '  Linear'
    assert str(Level.GENERAL_POSITION) == 'GeneralPosition'
    with pytest.raises(ValueError):
        Level.parse('embedded')
