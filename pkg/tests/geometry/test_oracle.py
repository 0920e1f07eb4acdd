from itertools import combinations, product

import numpy as np

from torusforge.exactgeom import collinear, triangles_compatible

from .rational_oracle import oracle_compatible

rng = np.random.default_rng(0)


def labelled(T):
    # points double as labels, so shared labels are exactly shared points
    return {tuple(p): tuple(p) for p in T}


def unit_cube_triangles():
    points = list(product(range(2), repeat=3))
    return [T for T in combinations(points, 3) if not collinear(*T)]


def test_unit_cube_exhaustive():
    triangles = unit_cube_triangles()
    assert len(triangles) == 56
    disagreements = []
    for T1 in triangles:
        for T2 in triangles:
            if T1 == T2:
                continue
            if triangles_compatible(labelled(T1), labelled(T2)) != oracle_compatible(T1, T2):
                disagreements.append((T1, T2))
    assert disagreements == []


def random_triangle(points, side):
    while True:
        T = list(points)
        while len(T) < 3:
            p = tuple(int(x) for x in rng.integers(0, side + 1, size=3))
            if p not in T:
                T.append(p)
        if not collinear(*T):
            return T
        T = list(points)


def random_pair(side):
    T1 = random_triangle([], side)
    k = int(rng.integers(0, 3))
    shared = [T1[i] for i in sorted(rng.choice(3, size=k, replace=False))]
    while True:
        T2 = random_triangle(shared, side)
        if not set(T2[k:]) & set(T1):
            return T1, T2


def test_random_pairs(oracle_pairs):
    disagreements = []
    for _ in range(oracle_pairs):
        T1, T2 = random_pair(4)
        if triangles_compatible(labelled(T1), labelled(T2)) != oracle_compatible(T1, T2):
            disagreements.append((T1, T2))
    assert disagreements == []


def test_oracle_sanity():
    assert oracle_compatible([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 0, 0), (1, 0, 0), (0, 0, 1)])
    assert not oracle_compatible([(0, 0, 0), (2, 0, 0), (0, 2, 0)], [(1, 1, -1), (1, 1, 1), (2, 2, 1)])
    assert not oracle_compatible([(0, 0, 0), (2, 0, 0), (0, 2, 0)], [(0, 0, 0), (2, 0, 0), (1, 1, 0)])
    assert oracle_compatible([(0, 0, 0), (2, 0, 0), (0, 2, 0)], [(0, 0, 0), (2, 0, 0), (1, -1, 0)])
