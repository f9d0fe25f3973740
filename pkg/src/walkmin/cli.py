"""``walkmin`` command line: enumerate, test membership, build and verify reductions.

Exit codes: 0 success (``member`` also uses 1 for non-membership and
``verify`` 1 for a failed check), 2 for unparsable or invalid input,
3 when a size cap is exceeded without ``--force``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from .engine import UnknownVertexError, as_nfa, enumerate_matches, enumerate_trail_matches, shortest_matches
from .graph import Graph, GraphError, WalkError, load_graph, load_walk, to_dot, walk_to_json
from .reduction import (
    VARIANTS,
    DimacsError,
    InstanceTooLargeError,
    build_instance,
    parse_dimacs,
    random_instance,
)
from .regex import RegexSyntaxError, parse
from .semantics import SEMANTICS, iter_minimal, mm_dominator, mm_membership, sms_dominator, sms_membership
from .verify import CHECKS, check_all, delay_profile

DEFAULT_CAP = 20_000

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_CAP = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def product_cap() -> int:
    raw = os.environ.get("WALKMIN_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"WALKMIN_CAP must be an integer, got {raw!r}") from None


def _check_cap(g: Graph, nfa, force: bool) -> None:
    size = len(g.vertices) * nfa.n_states
    cap = product_cap()
    if size > cap and not force:
        raise CliError(f"product size |V|*|Q| = {size} exceeds the cap {cap}; "
                       "use --force or raise WALKMIN_CAP", EXIT_CAP)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_inputs(args) -> tuple[Graph, dict | None, object]:
    if not args.graph or args.regex is None:
        raise CliError("--graph and --regex are required")
    g, colors = load_graph(args.graph)
    r = parse(args.regex)
    return g, colors, r


# -- subcommands -------------------------------------------------------------

def cmd_enum(args) -> int:
    g, colors, r = _load_inputs(args)
    if args.source is None or args.target is None:
        raise CliError("--source and --target are required")
    for v in (args.source, args.target):
        if v not in g.vertices:
            raise CliError(f"unknown vertex {v!r}")
    if args.semantics == "match" and args.max_len is None:
        raise CliError("--max-len is required with --semantics match")
    if args.semantics != "match" and args.max_len is not None:
        raise CliError("--max-len only applies to --semantics match")
    nfa = as_nfa(r)
    _check_cap(g, nfa, args.force)

    s, t = args.source, args.target
    if args.semantics in ("mm", "sms"):
        walks = iter_minimal(g, nfa, s, t, args.semantics)
    elif args.semantics == "match":
        walks = iter(enumerate_matches(g, nfa, s, t, args.max_len))
    elif args.semantics == "trail":
        walks = iter(enumerate_trail_matches(g, nfa, s, t))
    else:
        walks = iter(shortest_matches(g, nfa, s, t))

    if args.format == "text" and not args.out:
        for w in walks:
            print(w, flush=True)
        return EXIT_OK
    found = list(walks)
    if args.format == "text":
        text = "".join(f"{w}\n" for w in found)
    elif args.format == "json":
        doc = {"semantics": args.semantics, "source": s, "target": t, "count": len(found),
               "walks": [walk_to_json(w) for w in found]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        used = {e for w in found for e in w.edges()}
        text = to_dot(g, colors, highlight=used)
    _emit(text, args.out)
    return EXIT_OK


def cmd_member(args) -> int:
    g, _, r = _load_inputs(args)
    if not args.walk:
        raise CliError("--walk is required")
    if args.semantics not in ("mm", "sms"):
        raise CliError("member supports --semantics mm or sms")
    w = load_walk(args.walk)
    nfa = as_nfa(r)
    _check_cap(g, nfa, args.force)
    decide, dominator = (mm_membership, mm_dominator) if args.semantics == "mm" \
        else (sms_membership, sms_dominator)
    member = decide(g, nfa, w)
    cert = None if member else dominator(g, nfa, w)
    if args.format == "json":
        doc = {"member": member, "semantics": args.semantics,
               "certificate": None if cert is None else walk_to_json(cert)}
        if not member and cert is None:
            doc["reason"] = "not a match"
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        lines = ["member" if member else "non-member"]
        if cert is not None:
            lines.append(f"certificate: {cert}")
        elif not member:
            lines.append("reason: the walk does not match the expression")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if member else EXIT_FAIL


def _read_instance(args):
    if args.cnf and args.random:
        raise CliError("give either --cnf or --random, not both")
    if args.cnf:
        return parse_dimacs(Path(args.cnf).read_text(encoding="utf-8")), None
    if args.random:
        try:
            k, l = (int(x) for x in args.random.split(","))  # noqa: E741
        except ValueError:
            raise CliError("--random expects K,L") from None
        seed = 0 if args.seed is None else args.seed
        return random_instance(k, l, random.Random(seed)), seed
    raise CliError("--cnf (or --random K,L with --seed) is required")


def cmd_reduce(args) -> int:
    inst, seed = _read_instance(args)
    ri = build_instance(inst, args.variant)
    if not args.out:
        raise CliError("--out DIR is required for reduce")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = ri.manifest()
    if seed is not None:
        manifest["seed"] = seed
    (out / "graph.json").write_text(json.dumps(ri.graph_json(), indent=2) + "\n", encoding="utf-8")
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    if ri.witness is not None:
        (out / "witness.json").write_text(json.dumps(walk_to_json(ri.witness), indent=2) + "\n",
                                          encoding="utf-8")
    print(f"k={ri.k} l={ri.l} |V|={len(ri.graph.vertices)} |E|={len(ri.graph.edges)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst, seed = _read_instance(args)
    checks = None
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise CliError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    try:
        report = check_all(inst, checks, force=args.force, seed=seed)
    except InstanceTooLargeError as exc:
        raise CliError(str(exc), EXIT_CAP) from None
    profile = delay_profile(inst, force=args.force) if args.delay else None
    if args.format == "json":
        doc = report.to_dict(timing=args.timing)
        if profile is not None:
            doc["delay"] = {"entries": profile.entries, "easy_count": profile.easy_count,
                            "gap_after_easy": profile.gap_after_easy,
                            "total_steps": profile.total_steps}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif args.format == "text":
        text = report.to_text(timing=args.timing)
        if profile is not None:
            text += (f"delay: {len(profile.entries)} outputs, {profile.total_steps} steps, "
                     f"gap after output {profile.easy_count}: {profile.gap_after_easy}\n")
    else:
        raise CliError("verify supports --format json or text")
    _emit(text, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_export_dot(args) -> int:
    if args.graph:
        g, colors = load_graph(args.graph)
    elif args.cnf or args.random:
        inst, _ = _read_instance(args)
        ri = build_instance(inst, args.variant)
        g, colors = ri.graph, ri.colors
    else:
        raise CliError("--graph or --cnf is required")
    _emit(to_dot(g, colors), args.out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--graph", help="graph JSON file")
    shared.add_argument("--regex", help="query expression, e.g. 'a*b+c'")
    shared.add_argument("--source")
    shared.add_argument("--target")
    shared.add_argument("--semantics", choices=SEMANTICS, default="mm")
    shared.add_argument("--max-len", type=int, dest="max_len", help="length bound for match semantics")
    shared.add_argument("--format", choices=("json", "text", "dot"), default="text")
    shared.add_argument("--out", help="output file (directory for reduce)")
    shared.add_argument("--seed", type=int, help="seed for --random instances")
    shared.add_argument("--force", action="store_true", help="ignore the size caps")
    shared.add_argument("--checks", help="comma-separated subset of verify checks")

    inst = argparse.ArgumentParser(add_help=False)
    inst.add_argument("--cnf", help="DIMACS CNF file")
    inst.add_argument("--random", metavar="K,L", help="random 3-CNF with K variables and L clauses")
    inst.add_argument("--variant", choices=VARIANTS, default="enum")

    parser = argparse.ArgumentParser(prog="walkmin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enum", parents=[shared], help="list the walks selected by a semantics")
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("member", parents=[shared], help="decide walk membership under mm or sms")
    p.add_argument("--walk", help="walk JSON file")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("reduce", parents=[shared, inst], help="build the 3-SAT gadget graph")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", parents=[shared, inst], help="run the construction checks")
    p.add_argument("--delay", action="store_true", help="also profile the enumeration delay")
    p.add_argument("--timing", action="store_true", help="include elapsed times in the report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", parents=[shared, inst], help="write a graph as DOT")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"walkmin: error: {exc}", file=sys.stderr)
        return exc.code
    except InstanceTooLargeError as exc:
        print(f"walkmin: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (RegexSyntaxError, GraphError, WalkError, DimacsError, UnknownVertexError,
            json.JSONDecodeError, OSError, ValueError) as exc:
        print(f"walkmin: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
