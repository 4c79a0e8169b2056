"""Command-line front end: ``icasm run|check|brute-check|analyze|encode|examples``."""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from . import programs
from .encoding import encode_ordered, even_ones_tm, length_mod3_tm, parse_tm
from .errors import ICASMError
from .hf import default_universe
from .insignificance import IsoSearchStrategy, brute_force_global_ic, check_run_local_ic
from .runs import Bounds, Outcome, RunTree, SchedulingMode, export_trace, format_trace, run
from .structure import InputStructure, format_structure, parse_structure
from .symmetry import automorphisms, colours, min_support, orbit, support_profile
from .transforms import load_program

EXIT_CODES = {
    Outcome.ACCEPTED: 0,
    Outcome.REJECTED: 1,
    Outcome.STEP_BOUND_EXCEEDED: 2,
    Outcome.ACTIVE_BOUND_EXCEEDED: 2,
    Outcome.STUCK: 2,
    Outcome.CAP_EXCEEDED: 2,
}
USAGE_ERROR = 3

TEST_TMS = {"even-ones": even_ones_tm, "mod3": length_mod3_tm}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _coeffs(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(c < 0 for c in out):
        raise argparse.ArgumentTypeError("coefficients must be non-negative")
    return out


def _add_input_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--structure", type=Path, help="input structure file")
    g.add_argument("--atoms", type=int, help="naked set with N atoms")


def _add_machine_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin", choices=[*programs.BUILTINS, "order"])
    g.add_argument("--program", type=Path, help="program file")
    p.add_argument("--tm", default="even-ones",
                   help="TM for --builtin order: even-ones, mod3, or a TM description file")
    _add_input_args(p)
    p.add_argument("--p", type=_coeffs, help="step bound coefficients, lowest degree first")
    p.add_argument("--q", type=_coeffs, help="active-object bound coefficients, lowest degree first")
    p.add_argument("--step-cap", type=int, default=100_000)
    p.add_argument("--per-state-active", action="store_true",
                   help="bound active objects per state instead of over the whole run")
    p.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="icasm", description="Run and analyse choice machines over hereditarily finite sets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a machine and print its verdict")
    _add_machine_args(p)
    p.add_argument("--mode", choices=[m.value for m in SchedulingMode], default="least-atom")
    p.add_argument("--trace", type=Path, help="write the run trace (tab separated) to this file")

    p = sub.add_parser("check", help="check local insignificance at every reachable state")
    _add_machine_args(p)
    p.add_argument("--ic-strategy", choices=["transpositions", "full"], default="transpositions")

    p = sub.add_parser("brute-check", help="decide insignificance of choice by full exploration")
    _add_machine_args(p)

    p = sub.add_parser("analyze", help="automorphisms, orbits and minimal supports")
    _add_input_args(p)
    p.add_argument("--object", action="append", default=[], help="HF object such as '{a0,a1}'")
    p.add_argument("--limit", type=int, default=8, help="largest n for the automorphism search")

    p = sub.add_parser("encode", help="standard encoding of an ordered structure")
    _add_input_args(p)
    p.add_argument("--order", help="atoms from smallest to largest, e.g. 2,0,1")

    sub.add_parser("examples", help="list built-in machines and sample inputs")
    return parser


# -- helpers ---------------------------------------------------------------------

def _structure(args) -> InputStructure:
    if args.atoms is not None:
        if args.atoms < 0:
            raise UsageError("--atoms must be non-negative")
        return InputStructure.naked(args.atoms)
    return parse_structure(args.structure.read_text())


def _tm(name: str):
    if name in TEST_TMS:
        return TEST_TMS[name]()
    return parse_tm(Path(name).read_text())


def _machine(args, inp: InputStructure):
    if args.builtin == "order":
        tm = _tm(args.tm)
        inputs = tuple(inp.arities.items())
        return programs.builtin_order_and_simulate(tm, inputs), programs.order_bounds(tm, inputs)
    if args.builtin:
        return programs.builtin(args.builtin), programs.default_bounds(args.builtin)
    program = load_program(args.program.read_text(), args.program.stem)
    return program, Bounds.unbounded(args.step_cap)


def _bounds(args, default: Bounds) -> Bounds:
    return Bounds(args.p or default.p, args.q or default.q, args.step_cap, args.per_state_active)


def _emit(args, payload: dict, text: str):
    print(json.dumps(payload, indent=2) if args.json else text)


# -- commands ----------------------------------------------------------------------

def cmd_run(args) -> int:
    inp = _structure(args)
    program, default = _machine(args, inp)
    bounds = _bounds(args, default)
    result = run(program, inp, bounds, SchedulingMode(args.mode))
    if isinstance(result, RunTree):
        counts = Counter({str(k): v for k, v in result.verdicts.items()})
        kinds = set(result.verdicts)
        code = EXIT_CODES[kinds.pop()] if len(kinds) == 1 else 2
        payload = {"mode": args.mode, "verdicts": dict(counts), "nodes": len(result.nodes),
                   "max_depth": result.max_depth, "complete": result.complete, "cycle": result.has_cycle}
        text = "\n".join(f"{k}: {v}" for k, v in sorted(counts.items()))
        text += f"\nnodes: {len(result.nodes)}  max depth: {result.max_depth}"
        _emit(args, payload, text)
        return code
    v = result.verdict
    if args.trace:
        args.trace.write_text(format_trace(export_trace(result), result.final.universe))
    payload = {"verdict": str(v.outcome), "steps": v.steps, "active": v.active_total,
               "bounds": {"p": bounds.steps(inp.n), "q": bounds.active(inp.n)}}
    _emit(args, payload, f"{v.outcome}\nsteps: {v.steps}\nactive objects: {v.active_total}")
    return EXIT_CODES[v.outcome]


def cmd_check(args) -> int:
    inp = _structure(args)
    program, default = _machine(args, inp)
    strat = IsoSearchStrategy(args.ic_strategy)
    report = check_run_local_ic(program, inp, _bounds(args, default), strat)
    payload = report.to_json()
    if report.passed:
        text = f"pass ({report.states_checked} states checked)"
    else:
        text = f"fail at state {report.state_id}, condition ({report.condition})"
        if payload["pair"]:
            text += "\n  " + "\n  ".join(payload["pair"])
        text += "\nwitnesses: " + " ".join(payload["witness"])
    _emit(args, payload, text)
    return 0 if report.passed else 1


def cmd_brute_check(args) -> int:
    inp = _structure(args)
    program, default = _machine(args, inp)
    value, reason = brute_force_global_ic(program, inp, _bounds(args, default), with_reason=True)
    label = {True: "pass", False: "fail", None: "indeterminate"}[value]
    _emit(args, {"verdict": label, "reason": reason}, f"{label}: {reason}")
    return {True: 0, False: 1, None: 2}[value]


def cmd_analyze(args) -> int:
    inp = _structure(args)
    u = default_universe()
    aut = automorphisms(inp, limit_n=args.limit)
    gens = aut.generators
    cols = colours(inp)
    objects = [u.atom(i) for i in range(inp.n)] if not args.object else [u.parse(o) for o in args.object]
    seen, orbits = set(), []
    for y in objects:
        if y in seen:
            continue
        orb = orbit(y, gens, u)
        seen |= orb.members
        supp = min_support(orb.members, inp, aut, u)
        own = min_support({y}, inp, aut, u)
        orbits.append({
            "representative": u.format(y),
            "size": len(orb),
            "min_support": None if supp is None else [f"a{i}" for i in sorted(supp)],
            "support_per_colour": None if supp is None else support_profile(supp, inp),
            "object_support": None if own is None else [f"a{i}" for i in sorted(own)],
        })
    payload = {
        "n": inp.n,
        "aut_order": aut.order,
        "generators": [g.cycle_notation() for g in gens],
        "colours": [[f"a{i}" for i in sorted(c)] for c in cols],
        "orbits": orbits,
    }
    print(json.dumps(payload, indent=2))
    return 0


def cmd_encode(args) -> int:
    inp = _structure(args)
    if args.order:
        try:
            order = [int(x) for x in args.order.split(",")]
        except ValueError:
            raise UsageError(f"bad --order {args.order!r}") from None
    else:
        order = list(range(inp.n))
    print(encode_ordered(inp, order))
    return 0


def cmd_examples(args) -> int:
    print("built-in machines:")
    for name in programs.BUILTINS:
        b = programs.default_bounds(name)
        print(f"  {name:<11} p={','.join(map(str, b.p))}  q={','.join(map(str, b.q))}")
    print(f"  {'order':<11} order, encode and simulate; --tm {'|'.join(TEST_TMS)}|FILE")
    print("\nsample structure (K2,2):")
    k22 = InputStructure(4, {"Boys": {(0,), (1,)}, "Girls": {(2,), (3,)},
                             "E": {(0, 2), (0, 3), (1, 2), (1, 3)}},
                         {"Boys": 1, "Girls": 1, "E": 2})
    print(format_structure(k22))
    print("usage: icasm run --builtin parity --atoms 3")
    return 0


COMMANDS = {
    "run": cmd_run,
    "check": cmd_check,
    "brute-check": cmd_brute_check,
    "analyze": cmd_analyze,
    "encode": cmd_encode,
    "examples": cmd_examples,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ICASMError, UsageError, OSError, KeyError) as exc:
        print(f"icasm: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
