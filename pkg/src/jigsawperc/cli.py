"""Command-line interface.

Exit codes: 0 on success, 1 when ``verify`` finds a failing check, 2 on
parameter or input errors (argparse usage errors also exit with 2).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

from . import _kernels
from .errors import InputError, ParameterError
from .graph import GenParams, generate_double_graph, read_double_graph, write_double_graph

EXIT_OK, EXIT_FAIL, EXIT_PARAM = 0, 1, 2


def _emit(obj, out: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, default=str)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _graph_from_args(args):
    if getattr(args, "input", None):
        return read_double_graph(args.input)
    if args.n is None or args.p1 is None or args.p2 is None:
        raise ParameterError("give --input FILE or all of --n, --p1, --p2")
    return generate_double_graph(GenParams(args.n, args.p1, args.p2, args.seed))


def cmd_gen(args) -> int:
    g = _graph_from_args(args)
    if args.out:
        write_double_graph(g, args.out)
    else:
        print(f"{g.n} {len(g.red)} {len(g.blue)}")
        for u, v in g.red.tolist() + g.blue.tolist():
            print(u, v)
    return EXIT_OK


def cmd_run(args) -> int:
    from .jigsaw import run_jigsaw

    g = _graph_from_args(args)
    res = run_jigsaw(g)
    report = {
        "n": g.n, "red_edges": len(g.red), "blue_edges": len(g.blue),
        "percolated": res.percolated, "rounds": res.rounds, "max_cluster": res.max_cluster,
        "clusters": len(res.final_partition), "max_cluster_trace": res.max_cluster_trace,
        "backend": _kernels.BACKEND,
    }
    _emit(report, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .harness import SweepConfig, run_sweep, summary_path, write_records

    cfg = SweepConfig(n=args.n, c_values=args.c or [], trials=args.trials, seed=args.seed,
                      split=args.split, out=args.out, fmt=args.format, workers=args.workers,
                      timing=args.timing)
    for msg in cfg.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    result = run_sweep(cfg)
    if args.out is None:
        write_records(result.records, sys.stdout, args.format)
    else:
        print(f"wrote {len(result.records)} records to {args.out}; summary in {summary_path(args.out)}",
              file=sys.stderr)
    for s in result.summaries:
        print(f"c={s.c:g} fraction={s.fraction:.3f} ci=[{s.ci_low:.3f}, {s.ci_high:.3f}] "
              f"mean_rounds={s.mean_rounds:.2f} mean_max_cluster={s.mean_max_cluster:.1f}", file=sys.stderr)
    return EXIT_OK


def _parse_clusters(text: str):
    return [frozenset(int(v) for v in block.split(",") if v.strip()) for block in text.split(";") if block.strip()]


def cmd_absorb(args) -> int:
    from .absorption import AbsorptionInput, find_percolating_input, run_absorption

    g = _graph_from_args(args)
    if args.v1 is not None:
        inp = AbsorptionInput.make(args.v1, _parse_clusters(args.clusters or ""))
    else:
        found = find_percolating_input(g, cap=args.cap)
        if found is None:
            _emit({"n": g.n, "percolating_input": None}, args.out)
            return EXIT_OK
        inp = found[0]
    trace = run_absorption(g, inp)
    _emit({
        "n": g.n,
        "v1": inp.v1,
        "clusters": [sorted(c) for c in inp.clusters],
        "percolated": trace.percolated,
        "steps": trace.steps,
        "vertex_order": list(trace.vertex_order),
        "per_step_added": [[sorted(c) for c in step] for step in trace.per_step_added[: max(trace.steps, 0)]],
    }, args.out)
    return EXIT_OK


def cmd_construct(args) -> int:
    from .construction import supercritical_pipeline

    if args.p1 is None or args.p2 is None:
        p = math.sqrt((1 + args.epsilon) / (4 * args.n * math.log(args.n)))
        args.p1 = p if args.p1 is None else args.p1
        args.p2 = p if args.p2 is None else args.p2
    rep = supercritical_pipeline(args.n, args.p1, args.p2, args.epsilon, args.seed, force=args.force,
                                 track_queries=args.track_queries, max_rounds=args.max_rounds)
    p = rep.params
    _emit({
        "n": p.n, "p1": p.p1, "p2": p.p2, "epsilon": p.epsilon,
        "omega": p.omega, "delta": p.delta, "eps_star": p.eps_star, "k0": p.k0, "k1": p.k1,
        "rho": p.rho, "p1_1": p.p1_1, "p1_2": p.p1_2, "pool_size": p.pool_size,
        "rounds": rep.rounds, "reached_k1": rep.reached_k1, "lemma_event": rep.lemma_event,
        "best_round": rep.best_round, "best_frontier_ratio": rep.best_frontier_ratio,
        "percolated": rep.percolated, "warnings": rep.warnings,
    }, args.report)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    from .enumeration import bound_suite, count_minimal_configs, count_Mklr, count_Mprime

    if args.all:
        reports = bound_suite(tree_cap=args.cap, mprime_cap=min(args.cap, 5))
    elif args.l is None:
        reports = [count_minimal_configs(args.k, cap=args.cap)]
    elif args.r is None:
        reports = [count_Mprime(args.k, args.l, cap=args.cap)]
    else:
        reports = [count_Mklr(args.k, args.l, args.r, cap=args.cap)]
    _emit([r.as_dict() for r in reports], args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_verification

    rows = run_verification(tree_cap=args.cap, quick=args.quick)
    width = max(len(r.name) for r in rows)
    for r in rows:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")
    failed = sum(not r.passed for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_bottleneck(args) -> int:
    from .analysis.bottleneck import bottleneck_report, threshold_N
    from .harness import bottleneck_compare

    N = args.N if args.N is not None else threshold_N(args.n, args.c)
    rep = bottleneck_report(N, args.n)
    out = {"n": args.n, "N": float(N), "found": rep.found, "root": rep.root, "residual": rep.residual,
           "two_ln_n": 2 * math.log(args.n)}
    if args.trials:
        cmp = bottleneck_compare(int(args.n), args.c, args.trials, args.seed, workers=args.workers)
        out["simulation"] = cmp.as_dict()
    _emit(out, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jigsawperc", description="Jigsaw percolation laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_flags(p, with_input=True):
        p.add_argument("--n", type=int)
        p.add_argument("--p1", type=float)
        p.add_argument("--p2", type=float)
        p.add_argument("--seed", type=int, default=0)
        if with_input:
            p.add_argument("--input", help="double graph in the 'n m1 m2' text format")

    p = sub.add_parser("gen", help="sample G(n, p1, p2)")
    graph_flags(p, with_input=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run the jigsaw process on one graph")
    graph_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="threshold sweep over c with p1 p2 = c / (4 n ln n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, nargs="*")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--split", choices=("symmetric", "asymmetric"), default="symmetric")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--timing", action="store_true", help="record wall-clock runtime_ms (breaks byte-identity)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("absorb", help="run or search absorption inputs")
    graph_flags(p)
    p.add_argument("--v1", type=int)
    p.add_argument("--clusters", help="e.g. '2,3;4' for clusters {2,3} and {4}")
    p.add_argument("--cap", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_absorb)

    p = sub.add_parser("construct", help="supercritical construction pipeline")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p1", type=float)
    p.add_argument("--p2", type=float)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", action="store_true")
    p.add_argument("--track-queries", action="store_true")
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--report")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("enumerate", help="exact configuration counts against their bounds")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--l", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--cap", type=int, default=6)
    p.add_argument("--all", action="store_true", help="the whole bound suite up to the cap")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="identity, domination and bound checks")
    p.add_argument("--cap", type=int, default=6)
    p.add_argument("--quick", action="store_true", help="smaller identity grids")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bottleneck", help="solve 2xN e^(-xN) = n^(-1/x)")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--N", type=float, help="override N = n p1 p2")
    p.add_argument("--trials", type=int, default=0, help="also simulate this many subcritical trials")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bottleneck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
