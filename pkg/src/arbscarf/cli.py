"""Command-line front end.

Exit codes: 0 on success (including an UNSTABLE verdict from ``verify``),
1 on a solver invariant violation or iteration limit, 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .blocks import build_block_system
from .errors import ArbScarfError, InstanceError, InvariantViolation, IterationLimitExceeded, TooLarge
from .ffl import run_ffl
from .instance import parse_instance, random_instance, serialize_instance
from .scarf_core import run_scarf
from .verify import (
    COUNTEREXAMPLE_NAMES,
    Matching,
    brute_force_stable_matchings,
    builtin_counterexample,
    is_extreme_point_Q,
    is_fractional_stable,
    is_stable_matching,
    q_membership,
    tight_rank,
)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_matching(text: str, m: int) -> tuple[Fraction, ...]:
    """Lines ``e <id> <value>`` or ``e <id> = <value>``; missing ids are 0."""
    x = [Fraction(0)] * m
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line or line[0].startswith("iterations="):
            continue
        if line[0] != "e" or len(line) not in (3, 4) or (len(line) == 4 and line[2] != "="):
            raise InputError(f"line {lineno}: expected 'e <id> <value>'")
        try:
            eid = int(line[1])
            val = Fraction(line[-1])
        except (ValueError, ZeroDivisionError):
            raise InputError(f"line {lineno}: bad number") from None
        if not 1 <= eid <= m:
            raise InputError(f"line {lineno}: hyperedge {eid} outside 1..{m}")
        x[eid - 1] = val
    return tuple(x)


def _matching_lines(x: Sequence, iterations: int) -> list[str]:
    out = [f"e {k} = 1" for k, v in enumerate(x, start=1) if v == 1]
    out.append(f"iterations={iterations}")
    return out


def _emit(lines: Sequence[str], out) -> None:
    for line in lines:
        print(line, file=out)


def _write_trace(path: Optional[str], lines: Sequence[str]) -> None:
    if not path:
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("".join(line + "\n" for line in lines))
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def cmd_solve(args, out) -> int:
    inst = parse_instance(_read(args.input))
    verify = True if args.verify_invariants else None
    res = run_ffl(inst, verify=verify, max_iterations=args.max_iterations)
    _write_trace(args.trace, res.trace_lines)
    if args.format == "report":
        _emit(is_stable_matching(inst.system, res.matching).lines(), out)
        return 0
    if args.format == "trace":
        _emit(res.trace_lines, out)
    _emit(_matching_lines(res.matching.x, res.iterations), out)
    return 0


def cmd_solve_generic(args, out) -> int:
    inst = parse_instance(_read(args.input))
    bs = build_block_system(inst.system)
    res = run_scarf(bs, max_iterations=args.max_iterations)
    x = bs.edge_vector(res.x)
    lines = res.trace.lines()
    _write_trace(args.trace, lines)
    if args.format == "trace":
        _emit(lines, out)
    if args.format == "report":
        _emit(is_fractional_stable(inst.system, x).lines(), out)
        return 0
    if any(v.denominator != 1 for v in x):
        # not expected on arborescence instances; print the point in full
        _emit([f"e {k} = {_fmt(v)}" for k, v in enumerate(x, start=1) if v], out)
        print(f"iterations={res.iterations}", file=out)
    else:
        _emit(_matching_lines(x, res.iterations), out)
    return 0


def cmd_verify(args, out) -> int:
    inst = parse_instance(_read(args.input))
    x = parse_matching(_read(args.matching), inst.m)
    if all(v in (0, 1) for v in x):
        rep = is_stable_matching(inst.system, Matching(tuple(int(v) for v in x)))
    else:
        rep = is_fractional_stable(inst.system, x)
    _emit(rep.lines(), out)
    return 0


def cmd_oracle(args, out) -> int:
    inst = parse_instance(_read(args.input))
    found = sorted(tuple(mt.edges()) for mt in brute_force_stable_matchings(inst.system))
    for edges in found:
        print("matching " + " ".join(map(str, edges)), file=out)
    print(f"count={len(found)}", file=out)
    return 0


def cmd_gen(args, out) -> int:
    try:
        inst = random_instance(args.seed, args.n, args.extra_edges)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(serialize_instance(inst))
    return 0


def cmd_counterexample(args, out) -> int:
    inst, x = builtin_counterexample()
    out.write("# instance\n")
    out.write(serialize_instance(inst))
    print("# point", file=out)
    for k, (name, v) in enumerate(zip(COUNTEREXAMPLE_NAMES, x), start=1):
        print(f"e {k} = {_fmt(v)}  # {name}", file=out)
    rep = q_membership(inst.system, x)
    print("# constraints", file=out)
    _emit(rep.lines(), out)
    print(f"feasible={'yes' if rep.feasible else 'no'}", file=out)
    print(f"rank={tight_rank(inst.system, x)}", file=out)
    print(f"extreme={'yes' if is_extreme_point_Q(inst.system, x) else 'no'}", file=out)
    print(f"fractional={'yes' if any(v.denominator != 1 for v in x) else 'no'}", file=out)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "solve-generic": cmd_solve_generic,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "gen": cmd_gen,
    "counterexample": cmd_counterexample,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arbscarf", description="Stable matchings on arborescence hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def solver(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("input", help="instance file, or - for standard input")
        s.add_argument("--trace", metavar="PATH", help="write the per-iteration trace to PATH")
        s.add_argument("--max-iterations", type=int, default=None)
        s.add_argument("--format", choices=("matching", "trace", "report"), default="matching")
        return s

    s = solver("solve", "FFL engine (arborescence instances)")
    s.add_argument("--verify-invariants", action="store_true",
                   help="run the per-iteration consistency checks regardless of size")
    solver("solve-generic", "generic exact-rational Scarf engine")
    v = sub.add_parser("verify", help="check a matching file for stability")
    v.add_argument("input")
    v.add_argument("matching")
    o = sub.add_parser("oracle", help="enumerate every integral stable matching")
    o.add_argument("input")
    g = sub.add_parser("gen", help="emit a random instance")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--extra-edges", type=int, default=10)
    sub.add_parser("counterexample", help="fractional extreme point of the relaxation")
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return COMMANDS[args.command](args, out)
    except (InvariantViolation, IterationLimitExceeded) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (InstanceError, InputError, TooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArbScarfError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
