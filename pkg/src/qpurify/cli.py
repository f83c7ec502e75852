"""Command-line front end: analyze, pair and search.

Exit codes: 0 success / purifiable, 1 well-formed but not purifiable,
2 invalid input, 3 internal verification failure (or a search beating the
analytic optimum, which would falsify the optimality claim).
"""

from __future__ import annotations

import argparse
import sys

from . import ranges, serialize
from .canonical import NotWClass, w_canonicalize
from .protocol import ProtocolError, optimal_probability, purify_pair
from .search import SearchConfig, search_best_protocol

EXIT_OK = 0
EXIT_NOT_PURIFIABLE = 1
EXIT_BAD_INPUT = 2
EXIT_VERIFICATION = 3

SEARCH_EXCESS_TOL = 1e-6


def _print_json(obj) -> None:
    print(serialize.dumps_17g(obj))


def cmd_analyze(args) -> int:
    state = serialize.load_state(args.state, tol=args.tol)
    sub = ranges.range_basis(state, rank_tol=args.tol)
    cls = ranges.classify_range(state, rank_tol=args.tol)
    verdicts = {n: ranges.purifiable_n_copies(state, n, rank_tol=args.tol)
                for n in (1, 2)}
    if args.json:
        _print_json(serialize.classification_to_json(sub, cls, verdicts,
                                                     args.tol))
    else:
        print(f"rank: {sub.dim}")
        print(f"class: {cls.kind.value}")
        for i, ray in enumerate(cls.rays):
            print(f"product ray {i}: a={ray.factor_a} b={ray.factor_b}")
        lam = sub.kept_eigenvalues[0]
        print(f"rank margins: kept_min={sub.kept_eigenvalues[-1] / lam:.3e} "
              f"dropped_max={sub.dropped_max / lam:.3e} (relative)")
        for n, ok in sorted(verdicts.items()):
            print(f"purifiable (n={n}): {'yes' if ok else 'no'}")
    return EXIT_OK if verdicts[2] else EXIT_NOT_PURIFIABLE


def cmd_pair(args) -> int:
    rho = serialize.load_state(args.state_a, tol=args.tol)
    sigma = serialize.load_state(args.state_b, tol=args.tol)
    report = purify_pair(rho, sigma)
    if args.json:
        _print_json(serialize.report_to_json(report, args.tol))
    else:
        print(f"verdict: {report.verdict}")
        if report.purifiable:
            print(f"probability: {report.probability!r}")
            print(f"schmidt margin: {report.schmidt_margin:.3e}")
            print("operators act on (A,A') and (B,B'); see --json for entries")
        else:
            print(f"reason: {report.reason}")
    return EXIT_OK if report.purifiable else EXIT_NOT_PURIFIABLE


def cmd_search(args) -> int:
    rho = serialize.load_state(args.state_a, tol=args.tol)
    sigma = serialize.load_state(args.state_b, tol=args.tol)
    cfg = SearchConfig(seed=args.seed, restarts=args.restarts,
                       iterations_per_restart=args.iters)
    result = search_best_protocol(rho, sigma, cfg)

    analytic = None
    try:
        analytic = optimal_probability(w_canonicalize(rho),
                                       w_canonicalize(sigma))
    except NotWClass:
        pass

    payload = {
        "feasible": result.feasible,
        "best_probability": result.best_probability,
        "output_purity": result.output_purity,
        "output_schmidt_gap": result.output_schmidt_gap,
        "restart_index": result.restart_index,
        "analytic_optimum": analytic,
        "gap": (result.best_probability - analytic
                if analytic is not None and result.feasible else None),
        "seed": args.seed,
        "restarts": args.restarts,
        "iterations_per_restart": args.iters,
    }
    if args.json:
        payload["best_m"] = serialize.matrix_to_pairs(result.best_m)
        payload["best_n"] = serialize.matrix_to_pairs(result.best_n)
        _print_json(payload)
    else:
        if result.feasible:
            print(f"best probability found: {result.best_probability!r}")
        else:
            print("infeasible within budget")
        if analytic is not None:
            print(f"analytic optimum: {analytic!r}")
            if result.feasible:
                print(f"gap (found - analytic): "
                      f"{result.best_probability - analytic!r}")

    if (analytic is not None and result.feasible
            and result.best_probability > analytic + SEARCH_EXCESS_TOL):
        print("error: search exceeded the analytic optimum", file=sys.stderr)
        return EXIT_VERIFICATION
    if analytic is None or not result.feasible:
        return EXIT_NOT_PURIFIABLE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpurify",
        description="Decide and construct LOCC purification of pairs of "
                    "two-qubit mixed states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--tol", type=float, default=1e-9,
                       help="validation / rank tolerance (default 1e-9)")
        p.add_argument("--json", action="store_true",
                       help="machine-readable output, floats at 17 digits")

    p = sub.add_parser("analyze", help="classify one state's range")
    p.add_argument("state")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pair", help="purify a pair of states")
    p.add_argument("state_a")
    p.add_argument("state_b")
    add_common(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("search",
                       help="seeded random-restart search over product filters")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--iters", type=int, default=2000)
    add_common(p)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except serialize.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ProtocolError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
