"""
torusforge.data
---------------
Standard small triangulations and realizations.

The 7-vertex torus is the unique vertex-minimal triangulation of the
torus; it is neighborly and its automorphism group has order 42. The
spheres below are used as small test cases for classification, merging
and search.
"""

from typing import Sequence

from .surface import Triangulation


def moebius_torus() -> Triangulation:
    """
    The 7-vertex torus: facets {i, i+1, i+3} and {i, i+2, i+3} mod 7,
    labels shifted to 1..7.
    """
    facets = []
    for i in range(7):
        facets.append((i % 7 + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1))
        facets.append((i % 7 + 1, (i + 2) % 7 + 1, (i + 3) % 7 + 1))
    return Triangulation(7, facets)


def tetrahedron() -> Triangulation:
    return Triangulation(4, [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)])


def octahedron() -> Triangulation:
    """Octahedron with equator 1, 2, 3, 4 and poles 5, 6."""
    facets = []
    for i in range(4):
        a, b = i + 1, (i + 1) % 4 + 1
        facets.append((a, b, 5))
        facets.append((a, b, 6))
    return Triangulation(6, facets)


def square_pyramid() -> Triangulation:
    """
    Pyramid over the quadrilateral 1, 2, 3, 4 with apex 5; the base is
    split along the diagonal 1-3.
    """
    return Triangulation(5, [(1, 2, 3), (1, 3, 4),
                             (1, 2, 5), (2, 3, 5), (3, 4, 5), (1, 4, 5)])


SQUARE_PYRAMID_COORDS = ((0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1))

# base is a nonconvex quadrilateral with reflex corner at vertex 3
DART_PYRAMID_COORDS = ((0, 0, 0), (4, 0, 0), (1, 1, 0), (0, 4, 0), (0, 0, 1))

UNIT_TETRAHEDRON_COORDS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))

OCTAHEDRON_COORDS = ((1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def stellar_subdivision(t: Triangulation, facet: Sequence[int]) -> Triangulation:
    """Insert vertex n+1 inside `facet`, replacing it by three facets."""
    f = tuple(sorted(facet))
    if f not in t.facets:
        raise ValueError(f'{f} is not a facet')
    a, b, c = f
    w = t.n + 1
    facets = [g for g in t.facets if g != f] + [(a, b, w), (a, c, w), (b, c, w)]
    return Triangulation(w, facets)


def frame_torus() -> Triangulation:
    """
    16-vertex torus as a 4 x 4 grid: vertex 1 + 4 i + j sits at position
    i around the frame and j around its cross-section. Each grid square
    is split along its diagonal from (i, j) to (i + 1, j + 1).
    """
    def label(i, j):
        return 1 + 4 * (i % 4) + j % 4
    facets = []
    for i in range(4):
        for j in range(4):
            facets.append((label(i, j), label(i + 1, j), label(i + 1, j + 1)))
            facets.append((label(i, j), label(i + 1, j + 1), label(i, j + 1)))
    return Triangulation(16, facets)


def _frame_coords():
    outer = ((0, 0), (3, 0), (3, 3), (0, 3))
    inner = ((1, 1), (2, 1), (2, 2), (1, 2))
    # cross-section: outer top, inner top, inner bottom, outer bottom
    section = ((outer, 2), (inner, 3), (inner, 0), (outer, 1))
    coords = []
    for i in range(4):
        for square, z in section:
            coords.append(square[i] + (z,))
    return tuple(coords)


# picture frame with sloped top and bottom; every grid square is a planar
# convex quadrilateral and no two of them are coplanar
FRAME_TORUS_COORDS = _frame_coords()
