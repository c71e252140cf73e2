"""``spalattice`` command line.

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 unreadable or invalid instance, 2 matching invalid or unstable, 3 the
exhaustive oracle refused an instance above its size bound.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .model import InstanceError, Matching, ParseError, format_instance, format_matching, parse_instance, parse_matching, validate_matching
from .poset import build_poset, explore_lattice, export_poset, find_target
from .rotations import reduce_instance
from .solvers import DEFAULT_BOUND, EnumerationLimitError, StableSet, brute_force_all_stable, lecturer_optimal, student_optimal
from .stability import blocking_pairs, format_blocking_pairs

EXIT_OK, EXIT_INPUT, EXIT_MATCHING, EXIT_BOUND = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _load_instance(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: {exc.strerror}") from None
    try:
        return parse_instance(data)
    except (ParseError, InstanceError) as exc:
        raise _Fail(EXIT_INPUT, f"{path}: {exc}") from None


def _load_matching(path: str, instance) -> Matching:
    try:
        m = parse_matching(Path(path).read_bytes())
    except OSError as exc:
        raise _Fail(EXIT_MATCHING, f"{path}: {exc.strerror}") from None
    except ParseError as exc:
        raise _Fail(EXIT_MATCHING, f"{path}: {exc}") from None
    problems = validate_matching(instance, m)
    if problems:
        raise _Fail(EXIT_MATCHING, "\n".join(f"{path}: {p}" for p in problems))
    return m


def _cmd_validate(args, out, err):
    _load_instance(args.instance)
    out.append("OK\n")


def _cmd_solve(args, out, err):
    inst = _load_instance(args.instance)
    m = student_optimal(inst) if args.side == "student" else lecturer_optimal(inst)
    out.append(format_matching(m))


def _cmd_check(args, out, err):
    inst = _load_instance(args.instance)
    m = _load_matching(args.matching, inst)
    bps = blocking_pairs(inst, m)
    if bps:
        out.append(format_blocking_pairs(bps))
        return EXIT_MATCHING
    out.append("STABLE\n")


def _cmd_enumerate(args, out, err):
    inst = _load_instance(args.instance)
    if args.engine == "oracle":
        try:
            stable = brute_force_all_stable(inst, bound=args.bound)
        except EnumerationLimitError as exc:
            raise _Fail(EXIT_BOUND, str(exc)) from None
    else:
        stable = StableSet.of(explore_lattice(inst).matchings)
    out.append(stable.to_text())
    if args.verbose:
        err.append(f"{len(stable)} stable matchings ({args.engine})\n")


def _cmd_rotations(args, out, err):
    lattice = explore_lattice(_load_instance(args.instance))
    out.extend(f"{rho.to_text()}\n" for rho in lattice.rotations)
    if args.verbose:
        err.append(f"{len(lattice.rotations)} meta-rotations\n")


def _cmd_poset(args, out, err):
    out.append(export_poset(build_poset(explore_lattice(_load_instance(args.instance))), args.format))


def _cmd_reduce(args, out, err):
    out.append(format_instance(reduce_instance(_load_instance(args.instance))))


def _cmd_target(args, out, err):
    inst = _load_instance(args.instance)
    m = _load_matching(args.matching, inst)
    bps = blocking_pairs(inst, m)
    if bps:
        raise _Fail(EXIT_MATCHING, "target matching is not stable\n" + format_blocking_pairs(bps).rstrip("\n"))
    out.extend(f"{rho.to_text()}\n" for rho in find_target(inst, m))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spalattice", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="print summaries on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate an instance")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("solve", help="student- or lecturer-optimal stable matching")
    p.add_argument("--side", choices=("student", "lecturer"), default="student")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("check", help="list blocking pairs of a matching")
    p.add_argument("--matching", required=True)
    p.add_argument("instance")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("enumerate", help="all stable matchings")
    p.add_argument("--engine", choices=("lattice", "oracle"), default="lattice")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="oracle search-space limit")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("rotations", help="every meta-rotation of the instance")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_rotations)

    p = sub.add_parser("poset", help="export the meta-rotation poset")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_poset)

    p = sub.add_parser("reduce", help="print the pruned instance")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("target", help="rotations leading to a given stable matching")
    p.add_argument("--matching", required=True)
    p.add_argument("instance")
    p.set_defaults(func=_cmd_target)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_INPUT
    out: list[str] = []
    err: list[str] = []
    try:
        code = args.func(args, out, err) or EXIT_OK
    except _Fail as exc:
        stderr.write("".join(err) + exc.message + "\n")
        return exc.code
    stdout.write("".join(out))
    stderr.write("".join(err))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
