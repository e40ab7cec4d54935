"""Command-line interface: every subcommand is a thin shell over library calls.

Exit codes: 0 success, 1 `decide` found no family, 2 invalid input or parse
error, 3 capacity exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from kkextremal import bbw, construct, extremal, hypergraph, numeric, oracle, setfam
from kkextremal.errors import CapacityError, InvalidInput, KKError

SCHEMA = "1"
EXIT_NONE = 1
EXIT_INVALID = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4
# JSON numbers above this are emitted as decimal strings
SAFE_INT = 2**53


def _num(x: int):
    return str(x) if abs(x) >= SAFE_INT else x


def _emit(obj) -> None:
    print(json.dumps(obj))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _family(path: str) -> setfam.KSetFamily:
    return setfam.parse_family(_read(path))


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_decompose(args) -> int:
    if args.shadow:
        dec = bbw.shadow_decomposition_direct(_family(args.shadow))
    elif args.m is None:
        raise InvalidInput("give m or --shadow FILE")
    elif args.full:
        dec = numeric.full_k_binomial_decomposition(args.m, args.k)
    else:
        dec = numeric.k_binomial_decomposition(args.m, args.k)
    _emit({"schema": SCHEMA, "kind": dec.kind.value, "k": dec.k, "coeffs": [_num(a) for a in dec.coeffs]})
    return 0


def cmd_shadow(args) -> int:
    S = _family(args.file)
    sys.stdout.write(setfam.format_family(setfam.iterated_shadow(S, args.iter)))
    return 0


def cmd_hypergraph(args) -> int:
    sys.stdout.write(hypergraph.format_hypergraph(hypergraph.hypergraph_of_family(_family(args.file))))
    return 0


def cmd_family(args) -> int:
    H = hypergraph.parse_hypergraph(_read(args.file))
    sys.stdout.write(setfam.format_family(hypergraph.family_of_hypergraph(H, args.k)))
    return 0


def cmd_trees(args) -> int:
    S = _family(args.file)
    H = hypergraph.hypergraph_of_family(S)
    out = []
    for j, e in enumerate(H.edges, start=1):
        tree = hypergraph.build_extension_tree(H, None, j)
        leaves = []
        for leaf in tree.leaves():
            lv, le = leaf.path_vertices, leaf.path_edges
            top = S.n - e.bit_count() - lv.bit_count()
            shift = e.bit_count() + le.bit_count()
            leaves.append(
                {
                    "vertices": list(setfam.elements_of(lv)),
                    "edges": list(setfam.elements_of(le)),
                    "top": top,
                    "shift": shift,
                    "value": _num(numeric.binom(top, S.k - shift)),
                }
            )
        out.append(
            {
                "edge": list(setfam.elements_of(e)),
                "blocking": [list(setfam.elements_of(b)) for b in tree.blocking],
                "leaves": leaves,
            }
        )
    _emit({"schema": SCHEMA, "n": S.n, "k": S.k, "trees": out})
    return 0


def _trace_json(trace: bbw.WallTrace, final: bbw.BbwConfig, abrupt: bool) -> dict:
    balls = [{"pos": p, "delay": d, "count": str(c)} for (p, d), c in sorted(final.balls.items())]
    return {"schema": SCHEMA, "walls": [_num(w) for w in trace.walls], "balls": balls, "abrupt": abrupt}


def cmd_bbw_run(args) -> int:
    S = _family(args.file)
    H = hypergraph.hypergraph_of_family(S)
    config = bbw.init_from_hypergraph(H)
    steps = S.k + 1 if args.steps is None else args.steps
    trace, final, abrupt = bbw.run(config, steps)
    _emit(_trace_json(trace, final, abrupt))
    return 0


def cmd_bbw_hypotenusal(args) -> int:
    values = bbw.hypotenusal_numbers(args.count)
    _emit({"schema": SCHEMA, "values": [str(v) for v in values]})
    return 0


def cmd_check(args) -> int:
    S = _family(args.file)
    walls, abrupt = extremal.family_walls(S)
    _emit(
        {
            "schema": SCHEMA,
            "n": S.n,
            "k": S.k,
            "size": len(S),
            "extremal": extremal.is_extremal_direct(S),
            "beta": [_num(b) for b in bbw.shadow_decomposition_direct(S).coeffs],
            "depth": extremal.depth(S),
            "walls": [_num(w) for w in walls],
            "abrupt": abrupt,
        }
    )
    return 0


def cmd_construct(args) -> int:
    if args.kind in ("Aprime", "Bprime") and args.r is None:
        raise InvalidInput(f"{args.kind} needs --r")
    if args.kind == "A":
        H = construct.construction_A(args.j, args.counts, args.n)
    elif args.kind == "B":
        H = construct.construction_B(args.j, args.counts, args.n)
    elif args.kind == "Aprime":
        H = construct.construction_A_prime(args.j, args.r, args.counts, args.n)
    else:
        H = construct.construction_B_prime(args.j, args.r, args.counts, args.n)
    sys.stdout.write(hypergraph.format_hypergraph(H))
    return 0


def cmd_decide(args) -> int:
    H = construct.decide_hypergraph(args.n, args.k, args.m, args.depth)
    if H is None:
        print("NONE")
        return EXIT_NONE
    fits = args.n <= setfam.MAX_N and numeric.binom(args.n, args.k) <= construct.MATERIALIZE_LIMIT
    if args.hypergraph or not fits:
        sys.stdout.write(hypergraph.format_hypergraph(H))
    else:
        S = construct.decide_extremal_with_depth(args.n, args.k, args.m, args.depth)
        sys.stdout.write(setfam.format_family(S))
    return 0


def cmd_embed(args) -> int:
    S = _family(args.file)
    r0, padded = extremal.embed_extremal(S)
    sys.stdout.write(f"# r0={r0} r={padded.n - S.n}\n")
    sys.stdout.write(setfam.format_family(padded))
    return 0


def cmd_verify(args) -> int:
    report = oracle.verify_all(args.n, args.k, budget=args.budget, threads=args.threads, seed=args.seed, sample=args.sample)
    _emit(report)
    return 0 if report["passed"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kkextremal", description="Extremal families for the Kruskal-Katona shadow bound.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("decompose", help="k-binomial, full or shadow decomposition")
    s.add_argument("m", type=int, nargs="?")
    s.add_argument("--k", type=int, default=None)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--full", action="store_true")
    g.add_argument("--shadow", metavar="FAMILY_FILE")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("shadow", help="iterated shadow of a family")
    s.add_argument("file")
    s.add_argument("--iter", type=int, default=1)
    s.set_defaults(func=cmd_shadow)

    s = sub.add_parser("hypergraph", help="minimal non-face hypergraph of a family")
    s.add_argument("file")
    s.set_defaults(func=cmd_hypergraph)

    s = sub.add_parser("family", help="family of k-sets avoiding a hypergraph")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("trees", help="extension trees and leaf coefficients per edge")
    s.add_argument("file")
    s.set_defaults(func=cmd_trees)

    s = sub.add_parser("bbw", help="bins, balls and wall process")
    bsub = s.add_subparsers(dest="bbw_command", required=True)
    r = bsub.add_parser("run", help="wall trace of a family's process")
    r.add_argument("file")
    r.add_argument("--steps", type=int, default=None)
    r.set_defaults(func=cmd_bbw_run)
    h = bsub.add_parser("hypotenusal", help="first N hypotenusal numbers")
    h.add_argument("--count", type=int, required=True)
    h.set_defaults(func=cmd_bbw_hypotenusal)

    s = sub.add_parser("check", help="extremality, beta, depth and walls of a family")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("construct", help="hypergraph of construction A, B, Aprime or Bprime")
    s.add_argument("kind", choices=construct.KINDS)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--counts", type=_int_list, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("decide", help="extremal family with given size and depth, or NONE")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--hypergraph", action="store_true", help="print the hypergraph instead of the family")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("embed", help="pad a family with fresh vertices until it is extremal")
    s.add_argument("file")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("verify", help="exhaustive invariant report")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sample", type=int, default=2000, help="extremal families checked by per-set verdicts")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "decompose" and args.shadow is None and args.k is None:
        print("error: --k is required unless --shadow is given", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (KKError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
