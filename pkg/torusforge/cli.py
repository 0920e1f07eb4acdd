"""
torusforge.cli
--------------
Command-line front end.

Subcommands: `enumerate`, `verify`, `search`, `certify`, `minimal`,
`heuristic`, `chirotope` and `export`. Every file written carries the
run manifest, which records the command and all parameters, so that
re-running it reproduces the output byte for byte.

Exit codes: 0 when the requested goal was achieved, 1 on errors, 3 when
no witness was found where one was requested, 4 on timeout and 5 when a
witness was found where non-existence was requested.
"""

import argparse
from dataclasses import asdict, dataclass, field
import json
import logging
from pathlib import Path
import sys
from typing import List, Optional, Sequence

from .data import moebius_torus, octahedron, tetrahedron
from .enumerate import (EnumerationControl,
                        enumerate_tori,
                        load_corpus,
                        write_corpus)
from .heuristic import (HeuristicConfig,
                        Failure,
                        format_corpus_results,
                        realize,
                        realize_corpus,
                        shrink)
from .lattice_search import (Cuboid,
                             SearchControl,
                             SearchTask,
                             census,
                             minimal_cuboid,
                             run)
from .mesh import export
from .realization import (Level,
                          MergeFailure,
                          chirotope,
                          classify,
                          match_catalogue,
                          merge_coplanar,
                          om_classes,
                          parse_chirotope,
                          realizations_from_json,
                          realizations_to_json)
from .surface import heawood_lower_bound, parse_triangulation, parse_triangulations

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NONE = 3
EXIT_TIMEOUT = 4
EXIT_UNEXPECTED_WITNESS = 5

BUILTIN = {'moebius': moebius_torus,
           'tetrahedron': tetrahedron,
           'octahedron': octahedron}

_REQUIRE = {'gp': Level.GENERAL_POSITION,
            'proper': Level.PROPER,
            'linear': Level.LINEAR}


@dataclass
class RunManifest(object):
    """
    Everything needed to repeat a run.

    Parameters
    ----------
    command : str
    inputs : list of str
        Input file paths.
    parameters : dict
        All remaining options, by name.
    seed : int, optional
    version : str
    outputs : list of str
    """
    command: str
    inputs: List[str] = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    seed: Optional[int] = None
    version: str = ''
    outputs: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunManifest':
        from . import __version__
        D = {k: v for k, v in vars(args).items() if k not in ('func', 'command')}
        inputs = [D[k] for k in ('file', 'corpus', 'catalogue') if D.get(k)]
        outputs = [D['out']] if D.get('out') else []
        return cls(command=args.command,
                   inputs=[str(x) for x in inputs],
                   parameters={k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(D.items())},
                   seed=D.get('seed'),
                   version=__version__,
                   outputs=outputs)


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _triangulations(args):
    """The triangulations selected by --torus, --triangulation, --corpus or --n."""
    if args.torus:
        return [BUILTIN[args.torus]()]
    if args.triangulation:
        return [parse_triangulation(args.triangulation)]
    if args.corpus:
        tris = parse_triangulations(Path(args.corpus).read_text())
    elif args.n is not None:
        tris = load_corpus(args.n, args.cache, _enumeration_control(args))
    else:
        raise ValueError('one of --torus, --triangulation, --corpus or --n is required')
    if args.index is not None:
        if not 0 <= args.index < len(tris):
            raise ValueError(f'--index {args.index} out of range for {len(tris)} triangulations')
        tris = [tris[args.index]]
    return tris


def _enumeration_control(args):
    return EnumerationControl(workers=args.workers, progress=args.progress, logging=args.log)


def _search_control(args):
    return SearchControl(max_nodes=args.max_nodes,
                         max_seconds=args.max_seconds,
                         workers=args.workers,
                         progress=args.progress,
                         logging=args.log)


def _certificate_exit(cert, goal):
    if cert.outcome == 'timeout':
        return EXIT_TIMEOUT
    if goal == 'none':
        return EXIT_UNEXPECTED_WITNESS if cert.outcome == 'witness' else EXIT_OK
    return EXIT_OK if cert.outcome == 'witness' else EXIT_NONE


# Subcommands

def cmd_enumerate(args) -> int:
    control = _enumeration_control(args)
    manifest = json.dumps(RunManifest.from_args(args).to_dict(), sort_keys=True)
    if args.n is not None:
        ns = [args.n]
    else:
        ns = list(range(heawood_lower_bound(0), args.nmax + 1))
    total = 0
    for n in ns:
        result = enumerate_tori(n, control)
        if result.note:
            print(result.note)
        else:
            path = write_corpus(result, args.cache, header=[f'manifest: {manifest}'])
            if args.log: logging.info(f'wrote {path}')
        total += result.count
        prefix = f'n={n} ' if args.nmax is not None else ''
        print(f'{prefix}count={result.count}')
    if args.nmax is not None:
        print(f'total={total}')
    return EXIT_OK


def _describe(r) -> str:
    cls = classify(r)
    if cls.level == Level.NOT_EMBEDDED:
        return str(cls)
    if cls.level == Level.LINEAR:
        pairs = f'coplanar pairs: {cls.witness}'
        merged = merge_coplanar(r)
        if isinstance(merged, MergeFailure):
            return f'Linear; {merged}; {pairs}'
        sizes = ' '.join(str(k) for k in sorted(len(f) for f in merged.faces))
        return (f'Linear; merged map: {len(merged.faces)} faces, {len(merged.edges)} edges '
                f'(face sizes {sizes}); {pairs}')
    uniform = 'uniform' if chirotope(r).uniform else 'non-uniform'
    if cls.level == Level.PROPER:
        return f'{cls}, chirotope {uniform}'
    return f'{cls.level}, chirotope {uniform}'


def cmd_verify(args) -> int:
    for r in realizations_from_json(Path(args.file).read_text()):
        print(_describe(r))
    return EXIT_OK


def cmd_search(args) -> int:
    manifest = RunManifest.from_args(args).to_dict()
    cuboid = Cuboid.parse(args.cuboid)
    goal = 'none' if args.command == 'certify' else args.goal
    control = _search_control(args)
    tris = _triangulations(args)
    if len(tris) == 1:
        cert = run(SearchTask(tris[0], cuboid, args.mode, goal), control)
        cert.manifest = manifest
        _emit(args, cert.to_json() + '\n')
        print(f'outcome={cert.outcome} witnesses={len(cert.witnesses)} nodes={cert.stats.nodes}',
              file=sys.stderr if not args.out else sys.stdout)
        return _certificate_exit(cert, goal)

    summary = census(tris, cuboid, args.mode, control, goal=goal)
    D = {'manifest': manifest,
         'certificates': [c.to_dict() for c in summary['certificate']]}
    _emit(args, json.dumps(D, indent=1) + '\n')
    successes = int((summary['outcome'] == 'witness').sum())
    timeouts = int((summary['outcome'] == 'timeout').sum())
    print(f'successes={successes}/{len(tris)} timeouts={timeouts}',
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_TIMEOUT if timeouts else EXIT_OK


def cmd_minimal(args) -> int:
    tris = _triangulations(args)
    if len(tris) != 1:
        raise ValueError('minimal takes a single triangulation; use --index with a corpus')
    try:
        cuboid, cert = minimal_cuboid(tris[0], args.mode, _search_control(args), args.max_side)
    except TimeoutError as e:
        print(f'timeout: {e}', file=sys.stderr)
        return EXIT_TIMEOUT
    except LookupError as e:
        print(str(e), file=sys.stderr)
        return EXIT_NONE
    cert.manifest = RunManifest.from_args(args).to_dict()
    if args.out:
        Path(args.out).write_text(cert.to_json() + '\n')
    print(cuboid)
    return EXIT_OK


def cmd_heuristic(args) -> int:
    manifest = RunManifest.from_args(args).to_dict()
    require = _REQUIRE[args.require]
    cfg = HeuristicConfig(box=Cuboid.parse(args.box),
                          max_distance=args.max_distance,
                          plateau=args.plateau,
                          restarts=args.restarts,
                          steps=args.steps,
                          seed=args.seed,
                          workers=args.workers,
                          progress=args.progress,
                          logging=args.log)
    tris = _triangulations(args)
    if len(tris) == 1:
        result = realize(tris[0], cfg, require)
        if isinstance(result, Failure):
            print(f'no realization in {cfg.box} after {result.log.steps} steps', file=sys.stderr)
            return EXIT_NONE
        if args.shrink:
            result = shrink(tris[0], result, require, logging_on=args.log)
        _emit(args, realizations_to_json([result], manifest) + '\n')
        print(f'{classify(result).level} in {Cuboid(*result.extents())}',
              file=sys.stderr if not args.out else sys.stdout)
        return EXIT_OK

    corpus = realize_corpus(tris, cfg, require)
    if args.shrink:
        for item in corpus.items:
            if item.realization is not None:
                item.realization = shrink(item.triangulation, item.realization, require,
                                          logging_on=args.log)
    header = f'# manifest: {json.dumps(manifest, sort_keys=True)}\n'
    _emit(args, header + format_corpus_results(corpus))
    print(f'successes={corpus.successes}/{len(corpus.items)}',
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK if corpus.successes == len(corpus.items) else EXIT_NONE


def cmd_chirotope(args) -> int:
    rs = realizations_from_json(Path(args.file).read_text())
    chis = [chirotope(r) for r in rs]
    for c in chis:
        print(c.to_string())
    if args.classes or args.catalogue:
        ts = {r.triangulation for r in rs}
        if len(ts) > 1:
            raise ValueError('chirotope classes need realizations of one triangulation')
        aut = ts.pop() if ts else None
        if args.classes:
            print(f'classes={len(om_classes(chis, aut))}')
        if args.catalogue:
            lines = [line for line in Path(args.catalogue).read_text().splitlines()
                     if line.strip() and not line.startswith('#')]
            catalogue = [parse_chirotope(line) for line in lines]
            for i, j in enumerate(match_catalogue(chis, catalogue, aut, args.log)):
                print(f'{i} catalogue={"-" if j is None else j}')
    return EXIT_OK


def cmd_export(args) -> int:
    rs = realizations_from_json(Path(args.file).read_text())
    if not 0 <= args.index < len(rs):
        raise ValueError(f'--index {args.index} out of range for {len(rs)} realizations')
    r = rs[args.index]
    merged = None
    if args.merged:
        merged = merge_coplanar(r)
        if isinstance(merged, MergeFailure):
            raise ValueError(str(merged))
    _emit(args, export(r, args.format, merged, RunManifest.from_args(args).to_dict()))
    return EXIT_OK


# Argument parsing

def _common(p: argparse.ArgumentParser):
    p.add_argument('--log', action='store_true', help='Write debug messages to the log.')
    p.add_argument('--progress', action='store_true', help='Show progress bars.')
    p.add_argument('--workers', type=int, default=1, help='Number of parallel workers.')
    p.add_argument('--cache', type=Path, default=None,
                   help='Corpus directory (default: $TORUSFORGE_CACHE or ~/.cache/torusforge).')
    p.add_argument('--out', default=None, help='Output file (default: standard output).')


def _source(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument('--torus', choices=sorted(BUILTIN), help='Built-in triangulation.')
    g.add_argument('--triangulation', help="Triangulation as '<n>: a b c, ...'.")
    g.add_argument('--corpus', help='File with one triangulation per line.')
    g.add_argument('--n', type=int, help='All tori with this many vertices, from the cache.')
    p.add_argument('--index', type=int, default=None, help='Select one triangulation of the corpus.')


def _budgets(p: argparse.ArgumentParser):
    p.add_argument('--max-nodes', type=int, default=None, help='Search node budget.')
    p.add_argument('--max-seconds', type=float, default=None, help='Search time budget.')


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(
        prog='torusforge',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        description='Enumerate triangulated tori and realize them with small integer coordinates.')
    sub = p.add_subparsers(dest='command', required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    q = sub.add_parser('enumerate', formatter_class=fmt, help='Enumerate tori into the corpus cache.')
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument('--n', type=int, help='Number of vertices.')
    g.add_argument('--nmax', type=int, help='All n from 7 up to this value.')
    _common(q)
    q.set_defaults(func=cmd_enumerate)

    q = sub.add_parser('verify', formatter_class=fmt, help='Classify realizations from a JSON file.')
    q.add_argument('file')
    _common(q)
    q.set_defaults(func=cmd_verify)

    for name, helptext in (('search', 'Search a cuboid for realizations.'),
                           ('certify', 'Prove that a cuboid holds no realization.')):
        q = sub.add_parser(name, formatter_class=fmt, help=helptext)
        _source(q)
        q.add_argument('--cuboid', required=True, help='Cuboid as AxBxC.')
        q.add_argument('--mode', choices=['gp', 'linear'], default='gp')
        if name == 'search':
            q.add_argument('--goal', choices=['first', 'all', 'none'], default='first')
        _budgets(q)
        _common(q)
        q.set_defaults(func=cmd_search)

    q = sub.add_parser('minimal', formatter_class=fmt, help='Find the smallest cuboid with a realization.')
    _source(q)
    q.add_argument('--mode', choices=['gp', 'linear'], default='gp')
    q.add_argument('--max-side', type=int, default=4)
    _budgets(q)
    _common(q)
    q.set_defaults(func=cmd_minimal)

    q = sub.add_parser('heuristic', formatter_class=fmt, help='Randomized realization search.')
    _source(q)
    q.add_argument('--seed', type=int, required=True, help='Random seed.')
    q.add_argument('--box', default='4x4x4', help='Box as AxBxC.')
    q.add_argument('--require', choices=sorted(_REQUIRE), default='gp')
    q.add_argument('--restarts', type=int, default=20)
    q.add_argument('--steps', type=int, default=20000)
    q.add_argument('--max-distance', type=int, default=1)
    q.add_argument('--plateau', type=float, default=0.05)
    q.add_argument('--shrink', action='store_true', help='Shrink every success.')
    _common(q)
    q.set_defaults(func=cmd_heuristic)

    q = sub.add_parser('chirotope', formatter_class=fmt, help='Chirotopes of realizations.')
    q.add_argument('file')
    q.add_argument('--classes', action='store_true', help='Count classes up to relabeling and reorientation.')
    q.add_argument('--catalogue', default=None, help='File of chirotopes to match against.')
    _common(q)
    q.set_defaults(func=cmd_chirotope)

    q = sub.add_parser('export', formatter_class=fmt, help='Write a realization as OFF or OBJ.')
    q.add_argument('file')
    q.add_argument('--format', choices=['off', 'obj'], default='off')
    q.add_argument('--index', type=int, default=0)
    q.add_argument('--merged', action='store_true', help='Export the merged polyhedral map.')
    _common(q)
    q.set_defaults(func=cmd_export)

    return p.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    if args.log:
        logging.basicConfig(level=logging.DEBUG)
    try:
        return args.func(args)
    except (ValueError, OverflowError, OSError) as e:
        print(f'torusforge {args.command}: error: {e}', file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
