import json

import pytest

from torusforge.data import (OCTAHEDRON_COORDS,
                             SQUARE_PYRAMID_COORDS,
                             octahedron,
                             square_pyramid)
from torusforge.mesh import export, read_mesh, read_obj, read_off, write_obj, write_off
from torusforge.realization import Realization, merge_coplanar


@pytest.fixture
def octa():
    return Realization(octahedron(), OCTAHEDRON_COORDS)


def test_off_counts(octa):
    text = write_off(octa)
    lines = text.splitlines()
    assert lines[0] == 'OFF'
    assert lines[1] == '6 8 12'
    assert lines[2] == '1 0 0'
    assert lines[8] == '3 0 1 4'


def test_off_roundtrip(octa):
    vertices, faces = read_off(write_off(octa, manifest={'seed': 1}))
    assert vertices == list(OCTAHEDRON_COORDS)
    assert faces == list(octa.triangulation.facets)


def test_obj_roundtrip(octa):
    text = write_obj(octa)
    assert text.startswith('# torusforge export\n')
    vertices, faces = read_obj(text)
    assert vertices == list(OCTAHEDRON_COORDS)
    assert faces == list(octa.triangulation.facets)
    assert read_mesh(text, 'obj') == (vertices, faces)


def test_manifest_comment(octa):
    manifest = {'command': 'export', 'seed': None}
    line = write_off(octa, manifest=manifest).splitlines()[1]
    assert line.startswith('# manifest: ')
    assert json.loads(line[len('# manifest: '):]) == manifest


def test_merged_export():
    r = Realization(square_pyramid(), SQUARE_PYRAMID_COORDS)
    merged = merge_coplanar(r)
    text = export(r, 'off', merged)
    vertices, faces = read_off(text)
    assert text.splitlines()[1] == '5 5 8'
    assert sorted(len(f) for f in faces) == [3, 3, 3, 3, 4]
    assert any(line.startswith('4 ') for line in text.splitlines())
    _, obj_faces = read_obj(export(r, 'obj', merged))
    assert obj_faces == faces


def test_refuses_non_embedded():
    coords = list(SQUARE_PYRAMID_COORDS)
    coords[4] = coords[0]
    r = Realization(square_pyramid(), coords)
    with pytest.raises(ValueError, match='not embedded'):
        write_off(r)
    with pytest.raises(ValueError, match='not embedded'):
        write_obj(r)


def test_bad_format(octa):
    with pytest.raises(ValueError, match='format'):
        export(octa, 'ply')
    with pytest.raises(ValueError, match='format'):
        read_mesh('', 'ply')


@pytest.mark.parametrize("text,message", [
    ('3 0 0\n', 'missing OFF header'),
    ('OFF\nx y z\n', 'counts line'),
    ('OFF\n2 0 0\n0 0 0\n', 'shorter'),
    ('OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2\n', 'face size'),
])
def test_read_off_errors(text, message):
    with pytest.raises(ValueError, match=message):
        read_off(text)
