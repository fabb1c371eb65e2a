"""Command-line front end.

Exit status: 0 success, 1 usage or computation error, 2 criteria
disagreement (a theorem violation, reserved for that alone).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .automorphisms import (
    DEFAULT_AUT_SEARCH_ORDER,
    MAX_AUT_SEARCH_ORDER,
    inner_automorphisms,
    is_p_group,
)
from .catalog import SCHEMA_VERSION, builtin_catalog, export_report, load_table, realize
from .core import GroupError, InvariantError, SizeError, generating_set, prime_divisors
from .criteria import CRITERIA, AutLimits, CrossValidation, cross_validate
from .series import build_stabilized_chain, fitting_action, k_series, l_series, verify_chain_stabilized
from .subgroups import center

EXIT_OK, EXIT_ERROR, EXIT_DISAGREE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _limits(args) -> AutLimits:
    cap = args.max_aut_order
    if cap < 1 or cap > MAX_AUT_SEARCH_ORDER:
        raise GroupError(f"--max-aut-order must be in 1..{MAX_AUT_SEARCH_ORDER}")
    return AutLimits(max_group_order=cap)


def _emit(text: str) -> None:
    sys.stdout.write(text)


def cmd_analyze(args) -> int:
    g = realize(args.spec)
    limits = _limits(args)
    criteria = CRITERIA if args.criterion == "all" else (args.criterion,)
    cv = cross_validate(g, limits, criteria=criteria, baer=args.criterion == "all")
    _emit(export_report([cv], args.format, timing=args.timing))
    if args.format == "text":
        _emit(f"autonilpotent: {_yes_no(cv.autonilpotent)}\n")
    if not cv.consistent:
        print("criteria disagree: theorem violation", file=sys.stderr)
        return EXIT_DISAGREE
    skipped = [r for r in cv.reports.values() if r.status == "skipped"]
    for r in skipped:
        print(f"{r.criterion}: skipped ({r.evidence.get('reason')})", file=sys.stderr)
    return EXIT_ERROR if len(skipped) == len(cv.reports) else EXIT_OK


def _yes_no(v) -> str:
    return {True: "yes", False: "no", None: "undecided"}[v]


def cmd_aut(args) -> int:
    g = realize(args.spec)
    aut = _limits(args).aut(g)
    inn = len(np.unique(inner_automorphisms(g).maps, axis=0))
    gens = list(generating_set(g))
    primes = sorted(prime_divisors(g) | prime_divisors(aut.order))
    flags = {p: is_p_group(aut, p) for p in primes}
    if args.format == "json":
        doc = {
            "schema": SCHEMA_VERSION,
            "group": g.name,
            "order": g.order,
            "aut_order": aut.order,
            "inn_order": inn,
            "center_order": center(g).order,
            "generators": gens,
            "p_group": {str(p): v for p, v in flags.items()},
            "automorphisms": aut.maps.tolist(),
        }
        if args.table:
            doc["operator_group"] = aut.to_json_dict()
        _emit(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    lines = [
        f"group: {g.name} (order {g.order})",
        f"|Aut G| = {aut.order}",
        f"|Inn G| = {inn}",
    ]
    for p, v in flags.items():
        lines.append(f"Aut G is a {p}-group: {_yes_no(v)}")
    lines.append(f"generators: {gens}")
    lines.append("automorphisms (generator images):")
    for row in aut.maps[:, gens].tolist() if gens else [[]] * aut.order:
        lines.append(f"  {row}")
    _emit("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_series(args) -> int:
    g = realize(args.spec)
    if args.operators == "aut":
        act = _limits(args).aut(g)
    elif args.operators == "inn":
        act = inner_automorphisms(g)
    else:
        act = fitting_action(g)
    res = k_series(act) if args.kind == "k" else l_series(act)
    chain_info = None
    if args.kind == "k":
        chain = build_stabilized_chain(act)
        if chain is not None:
            check = verify_chain_stabilized(act, chain)
            chain_info = {"verified": check.ok, "normal_in_group": check.normal_in_group}
    if args.format == "json":
        doc = {
            "schema": SCHEMA_VERSION,
            "group": g.name,
            "order": g.order,
            "operators": act.name,
            "kind": res.kind,
            "orders": res.orders,
            "terms": [list(t.members) for t in res.terms],
            "terminated": res.terminated,
            "limit_order": res.limit.order,
        }
        if chain_info is not None:
            doc["chain"] = chain_info
        _emit(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    orders = ", ".join(str(o) for o in res.orders)
    if res.kind == "K":
        tail = "" if res.terminated else f", {res.limit.order} (stall)"
    else:
        tail = " (limit = whole group)" if res.terminated else f" (limit order {res.limit.order})"
    lines = [f"{res.kind}-series of {g.name} under {act.name}: orders {orders}{tail}"]
    for i, t in enumerate(res.terms):
        lines.append(f"  {res.kind}_{i}: {list(t.members)}")
    if chain_info is not None:
        lines.append(
            f"stabilized chain verified: {_yes_no(chain_info['verified'])}; "
            f"terms normal in G: {_yes_no(chain_info['normal_in_group'])}"
        )
    _emit("\n".join(lines) + "\n")
    return EXIT_OK


def _scan_one(job):
    spec, g, limits = job
    try:
        return cross_validate(g, limits)
    except GroupError as exc:
        return CrossValidation(spec, g.order, {}, {}, error=str(exc))


def cmd_scan(args) -> int:
    if args.jobs < 1:
        raise GroupError("--jobs must be >= 1")
    limits = _limits(args)
    cat = builtin_catalog(args.max_order)
    jobs = [(e.spec, e.group, limits) for e in cat]
    if args.jobs == 1:
        results = [_scan_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_scan_one, jobs))
    _emit(export_report(results, args.format, timing=args.timing))
    bad = [cv for cv in results if not cv.consistent]
    auto = [cv for cv in results if cv.autonilpotent]
    skipped = sum(r.status == "skipped" for cv in results for r in cv.reports.values())
    errors = sum(cv.error is not None for cv in results)
    print(
        f"scanned {len(results)} groups: {len(auto)} autonilpotent, "
        f"{len(bad)} disagreements, {skipped} criteria skipped, {errors} errors",
        file=sys.stderr,
    )
    return EXIT_DISAGREE if bad else EXIT_OK


def cmd_validate_file(args) -> int:
    try:
        g = load_table(args.path)
    except InvariantError as exc:
        print(f"invalid: {exc.invariant} violated at {exc.where}", file=sys.stderr)
        return EXIT_ERROR
    except (GroupError, OSError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(f"valid: {g.name} (order {g.order})\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument(
        "--max-aut-order",
        type=int,
        default=DEFAULT_AUT_SEARCH_ORDER,
        help=f"largest group order for the Aut search (default {DEFAULT_AUT_SEARCH_ORDER}, "
        f"at most {MAX_AUT_SEARCH_ORDER})",
    )
    parser = _Parser(prog="autonil", description="Autonilpotency toolkit for small finite groups.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="run the autonilpotency criteria")
    p.add_argument("spec")
    p.add_argument("--criterion", choices=("all",) + CRITERIA, default="all")
    p.add_argument("--timing", action="store_true", help="include elapsed times (non-deterministic)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("aut", parents=[common], help="compute Aut(G)")
    p.add_argument("spec")
    p.add_argument("--table", action="store_true", help="include the operator group table (json)")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("series", parents=[common], help="compute a K- or L-series")
    p.add_argument("spec")
    p.add_argument("--operators", choices=("aut", "inn", "fitting"), default="aut")
    p.add_argument("--kind", choices=("k", "l"), default="l")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("scan", parents=[common], help="cross-validate the builtin catalog")
    p.add_argument("--max-order", type=int, default=48)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include elapsed times (non-deterministic)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("validate-file", help="check a Cayley-table JSON file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate_file)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "table", False) and args.format != "json":
        print("autonil: error: --table requires --format json", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except SizeError as exc:
        print(f"size limit ({args.command}): {exc}", file=sys.stderr)
        return EXIT_ERROR
    except GroupError as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
