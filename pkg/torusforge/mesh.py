"""
torusforge.mesh
---------------
OFF and OBJ export of realizations, for external viewers.

Vertex `v` of the triangulation is vertex `v - 1` of an OFF file and
vertex `v` of an OBJ file. Faces are the facets of the triangulation or
the faces of a merged polyhedral map. A run manifest, if given, is
written as a `# manifest:` comment.
"""

import json
from typing import List, Optional, Tuple

from .realization import Level, PolyhedralMap, Realization, classify

Mesh = Tuple[List[Tuple[int, int, int]], List[Tuple[int, ...]]]


def _faces(r: Realization, merged: Optional[PolyhedralMap]):
    if merged is not None:
        return [tuple(face) for face in merged.faces]
    return [tuple(f) for f in r.triangulation.facets]


def _check_embedded(r: Realization):
    cls = classify(r)
    if cls.level < Level.LINEAR:
        raise ValueError(f'cannot export a realization that is not embedded: {cls}')


def _header(manifest: Optional[dict]) -> str:
    if manifest is None:
        return ''
    return f'# manifest: {json.dumps(manifest, sort_keys=True)}\n'


def write_off(r: Realization,
              merged: Optional[PolyhedralMap] = None,
              manifest: Optional[dict] = None) -> str:
    """
    OFF text: header, counts line, vertex lines and polygon lines.

    Raises
    ------
    ValueError
        If `r` is not at least Linear.
    """
    _check_embedded(r)
    faces = _faces(r, merged)
    edges = {(min(a, b), max(a, b)) for face in faces for a, b in zip(face, face[1:] + face[:1])}
    lines = ['OFF\n', _header(manifest), f'{r.n} {len(faces)} {len(edges)}\n']
    lines.extend(f'{x} {y} {z}\n' for x, y, z in r.coords)
    lines.extend(f'{len(face)} ' + ' '.join(str(v - 1) for v in face) + '\n' for face in faces)
    return ''.join(lines)


def write_obj(r: Realization,
              merged: Optional[PolyhedralMap] = None,
              manifest: Optional[dict] = None) -> str:
    """OBJ text with `v` and `f` records, 1-based."""
    _check_embedded(r)
    lines = ['# torusforge export\n', _header(manifest)]
    lines.extend(f'v {x} {y} {z}\n' for x, y, z in r.coords)
    lines.extend('f ' + ' '.join(str(v) for v in face) + '\n' for face in _faces(r, merged))
    return ''.join(lines)


def _data_lines(text: str):
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if line:
            yield number, line


def read_off(text: str) -> Mesh:
    """Vertices and 1-based faces of an OFF file with integer coordinates."""
    lines = list(_data_lines(text))
    if not lines or lines[0][1] != 'OFF':
        raise ValueError('missing OFF header')
    try:
        nv, nf = (int(x) for x in lines[1][1].split()[:2])
    except (IndexError, ValueError):
        raise ValueError('OFF counts line is malformed')
    if len(lines) < 2 + nv + nf:
        raise ValueError(f'OFF file announces {nv} vertices and {nf} faces but is shorter')
    vertices = []
    for number, line in lines[2:2 + nv]:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f'line {number}: expected 3 coordinates')
        vertices.append(tuple(int(x) for x in parts))
    faces = []
    for number, line in lines[2 + nv:2 + nv + nf]:
        parts = [int(x) for x in line.split()]
        if parts[0] != len(parts) - 1:
            raise ValueError(f'line {number}: face size {parts[0]} does not match its indices')
        faces.append(tuple(i + 1 for i in parts[1:]))
    return vertices, faces


def read_obj(text: str) -> Mesh:
    """Vertices and faces of an OBJ file; `f` entries may carry `/` suffixes."""
    vertices, faces = [], []
    for number, line in _data_lines(text):
        tag, *parts = line.split()
        if tag == 'v':
            if len(parts) != 3:
                raise ValueError(f'line {number}: expected 3 coordinates')
            vertices.append(tuple(int(x) for x in parts))
        elif tag == 'f':
            faces.append(tuple(int(p.split('/')[0]) for p in parts))
    return vertices, faces


def read_mesh(text: str, fmt: str) -> Mesh:
    if fmt == 'off':
        return read_off(text)
    if fmt == 'obj':
        return read_obj(text)
    raise ValueError(f"format must be 'off' or 'obj', got {fmt!r}")


def export(r: Realization,
           fmt: str = 'off',
           merged: Optional[PolyhedralMap] = None,
           manifest: Optional[dict] = None) -> str:
    if fmt == 'off':
        return write_off(r, merged, manifest)
    if fmt == 'obj':
        return write_obj(r, merged, manifest)
    raise ValueError(f"format must be 'off' or 'obj', got {fmt!r}")
