"""Command-line entry point.

Exit codes: 0 success, 1 a checked property is false, 2 usage or input
error, 3 a search budget was exhausted.

Usage::

    biasmatch table --kmax 22 --rmax 10 --format csv
    biasmatch fkr 3 3
    biasmatch verify-balance --k 3 --r 2 --pair "2,0;+1" --n 12
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import constructor, oracle, randomized, thresholds
from .errors import BudgetExceeded, NoPerfectMatching
from .exactmath import parse_pair, truncate_decimal
from .hypergraph import ColouredHypergraph

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _emit(payload) -> None:
    if isinstance(payload, str):
        sys.stdout.write(payload)
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _alpha(text: str | None):
    if text is None:
        return None
    return tuple(Fraction(x) for x in text.split(","))


def _spec(args) -> constructor.ExtremalSpec:
    if None in (args.k, args.r, args.pair, args.n):
        raise UsageError("need --k, --r, --pair and --n")
    return constructor.ExtremalSpec(args.k, args.r, parse_pair(args.pair), args.n, _alpha(getattr(args, "alpha", None)))


def _hypergraph(args) -> ColouredHypergraph:
    if args.input:
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
        return ColouredHypergraph.loads(text)
    return constructor.build_extremal(_spec(args))


def _timing(args, report: dict) -> dict:
    if args.no_timing:
        report["wall_time_ms"] = 0
    return report


# subcommands


def cmd_table(args) -> int:
    rows = thresholds.render_table(args.kmax, args.rmax, jobs=args.jobs)
    _emit(thresholds.table_csv(rows) if args.format == "csv" else thresholds.table_json(rows))
    return EXIT_OK


def cmd_fkr(args) -> int:
    f, argmax = thresholds.f_kr(args.K, args.R)
    star = thresholds.f_star(args.K, args.R)
    _emit({
        "k": args.K,
        "r": args.R,
        "f": _frac(f),
        "decimal": truncate_decimal(f),
        "argmax": [p.to_json() for p in argmax],
        "f_star": _frac(star),
        "equals_f_star": f == star,
    })
    return EXIT_OK


def cmd_mconj(args) -> int:
    m = thresholds.m_conjectured(args.ell, args.k)
    _emit({"ell": args.ell, "k": args.k, "m": _frac(m), "decimal": truncate_decimal(m)})
    return EXIT_OK


def cmd_classify(args) -> int:
    _emit(thresholds.classify(args.K, args.R).to_json())
    return EXIT_OK


def cmd_construct(args) -> int:
    h = constructor.build_extremal(_spec(args))
    _emit(h.to_text() if args.format == "text" else h.to_json())
    return EXIT_OK


def cmd_mindeg(args) -> int:
    from math import comb

    h = _hypergraph(args)
    d = constructor.min_degree(h, args.ell, budget=args.budget)
    denom = comb(h.n - args.ell, h.k - args.ell)
    _emit({
        "instance_digest": h.digest,
        "ell": args.ell,
        "min_degree": d,
        "relative": _frac(Fraction(d, denom)) if denom else None,
    })
    return EXIT_OK


def cmd_verify_balance(args) -> int:
    spec = _spec(args)
    host = ColouredHypergraph.loads(Path(args.input).read_text()) if args.input else None
    started = time.perf_counter()
    report = oracle.verify_balance(spec, host=host, budget=args.budget)
    out = report.to_json()
    out["part_sizes"] = list(spec.part_sizes)
    out["wall_time_ms"] = 0 if args.no_timing else round((time.perf_counter() - started) * 1000, 3)
    _emit(out)
    return EXIT_OK if report.all_balanced else EXIT_FAILED


def cmd_find_switcher(args) -> int:
    h = _hypergraph(args)
    stats = oracle.SearchStats(args.budget)
    started = time.perf_counter()
    sw = oracle.find_switcher(h, args.max_order, stats=stats)
    _emit(_timing(args, oracle.oracle_report(h, f"switcher order<={args.max_order or h.k * h.k + h.k}", sw, stats.nodes, started)))
    if args.expect == "none" and sw is not None or args.expect == "found" and sw is None:
        return EXIT_FAILED
    return EXIT_OK


def cmd_membership(args) -> int:
    h = _hypergraph(args)
    started = time.perf_counter()
    found = oracle.family_membership(h, budget=args.budget)
    _emit(_timing(args, oracle.oracle_report(h, "family membership", found, 0, started)))
    if args.expect == "member" and found is None or args.expect == "none" and found is not None:
        return EXIT_FAILED
    return EXIT_OK


def cmd_disjoint_nbhd(args) -> int:
    h = _hypergraph(args)
    started = time.perf_counter()
    value = oracle.disjoint_common_neighbourhood(h, args.x, args.y, budget=args.budget)
    _emit(_timing(args, oracle.oracle_report(h, f"disjoint common neighbourhood {args.x},{args.y}", value, 0, started)))
    return EXIT_FAILED if args.min is not None and value < args.min else EXIT_OK


def cmd_sample(args) -> int:
    h = randomized.sample_hkp(args.n, args.k, Fraction(args.p), args.seed)
    if args.colour_seed is not None:
        h = randomized.random_colouring(h, args.r, args.colour_seed)
    _emit(h.to_text() if args.format == "text" else h.to_json())
    return EXIT_OK


def _random_trial(job: tuple) -> dict:
    n, k, r, p, seed, with_bias, spot, no_timing, budget = job
    started = time.perf_counter()
    h = randomized.sample_hkp(n, k, Fraction(p), seed)
    report = randomized.check_random_properties(h, r, budget=budget)
    record = {
        "n": n, "k": k, "r": r, "p": p, "seed": seed,
        "edges": len(h),
        "property_i": report.property_i,
        "property_ii": report.property_ii,
        "bias": None,
    }
    if spot:
        record["property_iii_sampled"] = randomized.spot_check_property_iii(h, spot, seed, budget=budget)
    if with_bias:
        coloured = randomized.random_colouring(h, r, seed)
        try:
            res = randomized.bias_search(coloured, randomized.BiasSearchConfig(seed=seed))
            record["bias"] = _frac(res.bias)
        except NoPerfectMatching:
            record["bias"] = "no-perfect-matching"
    record["wall_time_ms"] = 0 if no_timing else round((time.perf_counter() - started) * 1000, 3)
    return record


def cmd_check_random(args) -> int:
    jobs = [
        (args.n, args.k, args.r, str(Fraction(args.p)), args.seed + t, args.bias, args.spot_iii, args.no_timing, args.budget)
        for t in range(args.trials)
    ]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_random_trial, jobs))
    else:
        records = [_random_trial(j) for j in jobs]
    if args.results:
        for rec in records:
            randomized.append_record(args.results, rec)
    _emit(records if args.trials > 1 else records[0])
    ok = all(rec["property_i"] and rec["property_ii"] for rec in records)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_bias_search(args) -> int:
    h = _hypergraph(args)
    if args.colour_seed is not None:
        h = randomized.random_colouring(h, args.r or h.r, args.colour_seed)
    config = randomized.BiasSearchConfig(
        gamma_target=Fraction(args.gamma),
        switcher_budget=args.switcher_budget,
        seed=args.seed,
        max_nodes=args.budget or randomized.BiasSearchConfig.max_nodes,
    )
    started = time.perf_counter()
    res = randomized.bias_search(h, config)
    out = res.to_json()
    out["instance_digest"] = h.digest
    out["wall_time_ms"] = 0 if args.no_timing else round((time.perf_counter() - started) * 1000, 3)
    if args.results:
        randomized.append_record(args.results, {
            "n": h.n, "k": h.k, "r": h.r, "p": None, "seed": args.seed,
            "property_i": None, "property_ii": None,
            "bias": out["bias"], "wall_time_ms": out["wall_time_ms"],
        })
    _emit(out)
    return EXIT_OK if res.reached_target else EXIT_FAILED


def cmd_tight_cycle(args) -> int:
    from math import comb

    h = constructor.build_tight_cycle_counterexample(args.n)
    if args.format == "text":
        _emit(h.to_text())
        return EXIT_OK
    if args.format == "json":
        _emit(h.to_json())
        return EXIT_OK
    big = 7 * args.n // 8
    part_of = [1 if v < big else 2 for v in range(h.n)]
    types: dict[str, int] = {}
    for e in h.edges:
        t = constructor.edge_type(e, part_of, 2)
        types[f"{t[0]},{t[1]}"] = types.get(f"{t[0]},{t[1]}", 0) + 1
    d = constructor.min_degree(h, 1, budget=args.budget)
    rel = Fraction(d, comb(h.n - 1, 3))
    _emit({
        "n": h.n,
        "part_sizes": [big, h.n - big],
        "edges_by_type": dict(sorted(types.items(), reverse=True)),
        "min_degree": d,
        "relative_min_degree": _frac(rel),
        "relative_decimal": truncate_decimal(rel, 6),
        "limit": "365/512",
    })
    return EXIT_OK


# parser


def _add_budget(p) -> None:
    p.add_argument("--budget", type=int, default=None, help="node budget (capped by BIASMATCH_BUDGET)")
    p.add_argument("--no-timing", action="store_true", help="report wall_time_ms as 0 for byte-stable output")


def _add_instance(p, alpha: bool = False) -> None:
    p.add_argument("--input", help="hypergraph file (text or JSON interchange), '-' for stdin")
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--pair", help="k-valid pair as 'j1,...,jr;+1' or ';-1'")
    p.add_argument("--n", type=int)
    if alpha:
        p.add_argument("--alpha", help="comma-separated rationals; default 1/r each")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="biasmatch",
        description="Colour-bias perfect matching thresholds and brute-force oracles.",
    )
    parser.add_argument("--config", help="JSON file of option defaults; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)
    subs: dict[str, argparse.ArgumentParser] = {}

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        subs[name] = p
        return p

    p = add("table", cmd_table, "threshold table f_{k,r} with m'_k")
    p.add_argument("--kmax", type=int, default=22)
    p.add_argument("--rmax", type=int, default=10)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--jobs", type=int, default=1)

    p = add("fkr", cmd_fkr, "exact f_{k,r} and its maximising pairs")
    p.add_argument("K", type=int)
    p.add_argument("R", type=int)

    p = add("mconj", cmd_mconj, "conjectured perfect-matching threshold m_{ell,k}")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--k", type=int, required=True)

    p = add("classify", cmd_classify, "compare f_{k,r} with m'_k")
    p.add_argument("K", type=int)
    p.add_argument("R", type=int)

    p = add("construct", cmd_construct, "edge-maximal family member")
    _add_instance(p, alpha=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = add("mindeg", cmd_mindeg, "brute-force minimum ell-degree")
    _add_instance(p)
    p.add_argument("--ell", type=int, default=1)
    _add_budget(p)

    p = add("verify-balance", cmd_verify_balance, "every perfect matching has the predicted colour profile")
    _add_instance(p, alpha=True)
    _add_budget(p)

    p = add("find-switcher", cmd_find_switcher, "minimum-order switcher search")
    _add_instance(p)
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--expect", choices=["none", "found"])
    _add_budget(p)

    p = add("membership", cmd_membership, "extremal family membership search")
    _add_instance(p)
    p.add_argument("--expect", choices=["member", "none"])
    _add_budget(p)

    p = add("disjoint-nbhd", cmd_disjoint_nbhd, "disjoint (k-1)-sets in N(x) & N(y)")
    _add_instance(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--min", type=int, default=None, help="exit 1 when the packing is smaller")
    _add_budget(p)

    p = add("sample", cmd_sample, "binomial random k-graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", required=True, help="edge probability, e.g. 1/2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--colour-seed", type=int, default=None, help="also colour edges uniformly from 1..r")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = add("check-random", cmd_check_random, "random-graph properties (i) and (ii)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--p", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1, help="seeds seed..seed+trials-1")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bias", action="store_true", help="also run bias search on a random colouring")
    p.add_argument("--spot-iii", type=int, default=0, help="sampled subsets for property (iii)")
    p.add_argument("--results", help="append JSON-lines records here")
    _add_budget(p)

    p = add("bias-search", cmd_bias_search, "switcher-based colour-bias perfect matching")
    _add_instance(p)
    p.add_argument("--colour-seed", type=int, default=None, help="recolour edges uniformly at random first")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", default="0")
    p.add_argument("--switcher-budget", type=int, default=None)
    p.add_argument("--results")
    _add_budget(p)

    p = add("tight-cycle-example", cmd_tight_cycle, "4-graph with balanced tight Hamilton cycles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=["summary", "text", "json"], default="summary")
    p.add_argument("--budget", type=int, default=None)

    return parser, subs


def run(argv: list[str] | None = None) -> int:
    parser, subs = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
        if args.config:
            defaults = json.loads(Path(args.config).read_text())
            subs[args.command].set_defaults(**{key.replace("-", "_"): v for key, v in defaults.items()})
            args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError, KeyError, OSError, NoPerfectMatching) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
