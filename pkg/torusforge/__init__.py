from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version("torusforge")
except PackageNotFoundError:
    # package is not installed, perhaps we are in a git repo
    try:
        from setuptools_scm import get_version
        __version__ = get_version(root='..', relative_to=__file__)
    except (ImportError, LookupError):
        __version__ = "unknown"

from .surface import (Triangulation,
                      validate,
                      canonical_form,
                      automorphisms,
                      parse_triangulations)
from .enumerate import enumerate_tori, load_corpus
from .exactgeom import orient3d, segments_compatible, triangles_compatible
from .realization import Level, Realization, classify, chirotope, merge_coplanar
from .lattice_search import Cuboid, SearchTask, SearchControl, run, minimal_cuboid
from .heuristic import HeuristicConfig, realize, shrink, realize_corpus
