import os
from pathlib import Path
from typing import List, Tuple

import numpy as np


def cache_dir() -> Path:
    """
    Directory for cached corpora: `$TORUSFORGE_CACHE` if set, otherwise
    `~/.cache/torusforge`.
    """
    value = os.environ.get('TORUSFORGE_CACHE')
    if value:
        return Path(value)
    return Path.home() / '.cache' / 'torusforge'


def _parse_sides(text: str) -> Tuple[int, int, int]:
    """
    Parse `AxBxC` into three nonnegative integers.

    Examples
    --------
    >>> _parse_sides('2x3x3')
    (2, 3, 3)
    """
    parts = text.lower().split('x')
    if len(parts) != 3:
        raise ValueError(f'expected a cuboid as AxBxC, got {text!r}')
    try:
        sides = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f'expected a cuboid as AxBxC, got {text!r}')
    if min(sides) < 0:
        raise ValueError(f'cuboid sides must be nonnegative, got {text!r}')
    return sides


def _item_seeds(seed: int, item: int, count: int) -> List[np.random.SeedSequence]:
    """
    Independent seed sequences `(item, 0), ..., (item, count - 1)` below
    `seed`, identical to `SeedSequence(seed, spawn_key=(item,)).spawn(count)`.
    """
    return [np.random.SeedSequence(seed, spawn_key=(item, k)) for k in range(count)]


def _check_choice(name: str, value, choices):
    if value not in choices:
        raise ValueError(f'{name} must be one of {sorted(choices)}, got {value!r}')
    return value
