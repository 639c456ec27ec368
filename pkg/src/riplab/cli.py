"""Command-line front end.

Every subcommand prints a small stable ``key=value`` line (or a bare
decision word) on stdout and can persist a JSON report carrying the tool
version, command, seed, parameters, and results.  Exit codes: 0 success,
1 internal error, 2 bad arguments or unreadable/invalid input files,
3 enumeration budget exceeded, 4 matrix does not have unit columns.

All randomness enters through --seed; there is no fallback to system
entropy, so every published number is reproducible from its report.
"""

import argparse
import math
import sys
import time
import traceback

from .certify import (
    BudgetExceededError,
    DEFAULT_BUDGET,
    UnitColumnError,
    coherence,
    exact_rip,
    lazy_certify,
)
from .fileio import (
    FileFormatError,
    certificate_dict,
    experiment_dict,
    read_graph_file,
    read_matrix_file,
    rip_report_dict,
    witness_dict,
    write_graph_file,
    write_matrix_file,
    write_report,
)
from .linalg import PSD_TOL
from .randgen import (
    Seed,
    gen_bernoulli_sensing,
    gen_gnp_half,
    gen_model_a,
    gen_model_b,
    plant_clique,
)
from .reduction import (
    PRESETS,
    ReductionParams,
    asym_preset,
    cholesky_reduce,
    run_distinguishing_experiment,
    spectral_clique_refuter,
)


def _stable_report_dict(report):
    # timing lives once, in the top-level wall_time_ns; keeping it out of the
    # results section makes re-runs byte-identical there
    d = rip_report_dict(report)
    del d["elapsed_ns"]
    return d


def _add_seed_flags(p):
    p.add_argument("--seed", type=int, required=True,
                   help="seed value (required; no entropy fallback)")
    p.add_argument("--stream", type=int, default=0, help="seed substream (default 0)")


def build_parser():
    p = argparse.ArgumentParser(
        prog="rip-lab",
        description="Restricted isometry certification, seeded random models, "
        "and clique-based hardness experiments.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    px = sub.add_parser("exact", help="exact RIP parameter by subset enumeration")
    px.add_argument("--matrix", required=True)
    px.add_argument("--order", type=int, required=True)
    px.add_argument("--threshold", type=float, default=None,
                    help="stop early once a subset deviation exceeds this")
    px.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    px.add_argument("--workers", type=int, default=None)
    px.add_argument("--out", default=None, help="write a JSON report here")
    px.set_defaults(func=cmd_exact)

    pc = sub.add_parser("coherence", help="largest off-diagonal Gram entry")
    pc.add_argument("--matrix", required=True)
    pc.add_argument("--out", default=None)
    pc.set_defaults(func=cmd_coherence)

    pl = sub.add_parser("lazy", help="probe a small order, lift to the largest certifiable one")
    pl.add_argument("--matrix", required=True)
    pl.add_argument("--probe-order", type=int, required=True)
    pl.add_argument("--delta", type=float, required=True)
    pl.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    pl.add_argument("--workers", type=int, default=None)
    pl.add_argument("--out", default=None)
    pl.set_defaults(func=cmd_lazy)

    pg = sub.add_parser("generate", help="seeded random matrices and graphs")
    gsub = pg.add_subparsers(dest="model", required=True)

    gb = gsub.add_parser("bernoulli", help="n x N sensing matrix, entries +-1/sqrt(n)")
    gb.add_argument("--dims", type=int, nargs=2, required=True, metavar=("ROWS", "COLS"))
    gm = gsub.add_parser("model-a", help="symmetric sign matrix, zero diagonal")
    gm.add_argument("--n", type=int, required=True)
    gmb = gsub.add_parser("model-b", help="I + c*A/sqrt(n)")
    gmb.add_argument("--n", type=int, required=True)
    gmb.add_argument("--c", type=float, default=0.3)
    gg = gsub.add_parser("gnp", help="G(n, 1/2) graph")
    gg.add_argument("--n", type=int, required=True)
    gp = gsub.add_parser("planted", help="G(n, 1/2) with a planted clique")
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--t", type=int, required=True, help="clique size")
    for gpp in (gb, gm, gmb, gg, gp):
        _add_seed_flags(gpp)
        gpp.add_argument("--out", required=True, help="output matrix/graph file")
        gpp.add_argument("--report", default=None, help="write a JSON report here")
        gpp.set_defaults(func=cmd_generate)

    pr = sub.add_parser("reduce", help="graph -> factor of I + c*A/sqrt(n), or zero")
    pr.add_argument("--graph", required=True)
    pr.add_argument("--c", type=float, default=0.3)
    pr.add_argument("--psd-tol", type=float, default=PSD_TOL)
    pr.add_argument("--out", required=True, help="output matrix file")
    pr.add_argument("--report", default=None)
    pr.set_defaults(func=cmd_reduce)

    pf = sub.add_parser("refute", help="spectral clique refuter (exact soundness)")
    pf.add_argument("--graph", required=True)
    pf.add_argument("--k", type=int, required=True)
    pf.add_argument("--report", default=None)
    pf.set_defaults(func=cmd_refute)

    pe = sub.add_parser("experiment", help="two-arm planted-clique distinguishing run")
    pe.add_argument("--preset", choices=sorted(PRESETS) + ["asym"], default=None)
    pe.add_argument("--n", type=int, default=None)
    pe.add_argument("--eps", type=float, default=None,
                    help="exponent for --preset asym")
    pe.add_argument("--clique-size", type=int, default=None)
    pe.add_argument("--order", type=int, default=None)
    pe.add_argument("--delta", type=float, default=None)
    pe.add_argument("--trials", type=int, default=None)
    pe.add_argument("--c", type=float, default=None)
    pe.add_argument("--psd-tol", type=float, default=None)
    pe.add_argument("--rect-cols", type=int, default=None)
    pe.add_argument("--rect-aspect", type=float, default=None,
                    help="total-width-to-n ratio; rect-cols = (aspect-1)*n")
    pe.add_argument("--null-stat", choices=["lambda1", "exact"], default="lambda1")
    pe.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _add_seed_flags(pe)
    pe.add_argument("--out", default=None)
    pe.set_defaults(func=cmd_experiment)

    return p


def cmd_exact(args):
    t0 = time.perf_counter_ns()
    phi = read_matrix_file(args.matrix)
    report, witness = exact_rip(
        phi, args.order, threshold=args.threshold, budget=args.budget, workers=args.workers
    )
    print(f"delta={report.value!r}")
    if args.out:
        write_report(
            args.out,
            command=args.raw_argv,
            seed=None,
            params={
                "order": args.order,
                "threshold": args.threshold,
                "budget": args.budget,
                "rows": phi.shape[0],
                "cols": phi.shape[1],
            },
            results={"report": _stable_report_dict(report),
                     "witness": witness_dict(witness)},
            wall_time_ns=time.perf_counter_ns() - t0,
        )
    return 0


def cmd_coherence(args):
    t0 = time.perf_counter_ns()
    phi = read_matrix_file(args.matrix)
    mu = coherence(phi)
    print(f"mu={mu!r}")
    if args.out:
        write_report(
            args.out,
            command=args.raw_argv,
            seed=None,
            params={"rows": phi.shape[0], "cols": phi.shape[1]},
            results={"mu": mu},
            wall_time_ns=time.perf_counter_ns() - t0,
        )
    return 0


def cmd_lazy(args):
    t0 = time.perf_counter_ns()
    phi = read_matrix_file(args.matrix)
    cert, probe = lazy_certify(
        phi, args.probe_order, args.delta, budget=args.budget, workers=args.workers
    )
    print(f"epsilon={cert.probe_parameter!r} k_max={cert.max_certified_order}")
    if args.out:
        cols = phi.shape[1]
        if cert.max_certified_order >= cert.probe_order:
            naive = math.comb(cols, cert.max_certified_order)
            ratio = naive / probe.subsets_examined
        else:
            naive = None
            ratio = None
        write_report(
            args.out,
            command=args.raw_argv,
            seed=None,
            params={
                "probe_order": args.probe_order,
                "delta": args.delta,
                "budget": args.budget,
                "rows": phi.shape[0],
                "cols": cols,
            },
            results={
                "certificate": certificate_dict(cert),
                "probe_report": _stable_report_dict(probe),
                "naive_plan_subsets": naive,
                "lazy_vs_naive_ratio": ratio,
            },
            wall_time_ns=time.perf_counter_ns() - t0,
        )
    return 0


def cmd_generate(args):
    t0 = time.perf_counter_ns()
    seed = Seed(args.seed, args.stream)
    if args.model == "bernoulli":
        rows, cols = args.dims
        m = gen_bernoulli_sensing(rows, cols, seed)
        write_matrix_file(args.out, m)
        params = {"model": "bernoulli", "rows": rows, "cols": cols}
        results = {"rows": rows, "cols": cols}
    elif args.model == "model-a":
        m = gen_model_a(args.n, seed)
        write_matrix_file(args.out, m)
        params = {"model": "model-a", "n": args.n}
        results = {"rows": args.n, "cols": args.n}
    elif args.model == "model-b":
        m = gen_model_b(args.n, args.c, seed)
        write_matrix_file(args.out, m)
        params = {"model": "model-b", "n": args.n, "c": args.c}
        results = {"rows": args.n, "cols": args.n}
    elif args.model == "gnp":
        g = gen_gnp_half(args.n, seed)
        write_graph_file(args.out, g)
        params = {"model": "gnp", "n": args.n}
        results = {"n": g.n, "edges": g.edge_count()}
    else:  # planted
        inst = plant_clique(gen_gnp_half(args.n, seed), args.t, seed)
        write_graph_file(args.out, inst.graph)
        print("clique: " + " ".join(str(v) for v in inst.planted))
        params = {"model": "planted", "n": args.n, "t": args.t}
        results = {
            "n": inst.graph.n,
            "edges": inst.graph.edge_count(),
            "clique": list(inst.planted),
        }
    print(f"wrote={args.out}")
    if args.report:
        write_report(
            args.report,
            command=args.raw_argv,
            seed=seed,
            params=params,
            results=results,
            wall_time_ns=time.perf_counter_ns() - t0,
        )
    return 0


def cmd_reduce(args):
    t0 = time.perf_counter_ns()
    g = read_graph_file(args.graph)
    params = ReductionParams(c=args.c, psd_tol=args.psd_tol)
    c_matrix = cholesky_reduce(g, params)
    not_psd = not c_matrix.any()
    write_matrix_file(args.out, c_matrix)
    print("status=not-psd" if not_psd else "status=ok")
    print(f"wrote={args.out}")
    if args.report:
        write_report(
            args.report,
            command=args.raw_argv,
            seed=None,
            params={"n": g.n, "c": args.c, "psd_tol": args.psd_tol},
            results={"n": g.n, "not_psd": not_psd},
            wall_time_ns=time.perf_counter_ns() - t0,
        )
    return 0


def cmd_refute(args):
    t0 = time.perf_counter_ns()
    g = read_graph_file(args.graph)
    decision = spectral_clique_refuter(g, args.k)
    print(decision)
    if args.report:
        write_report(
            args.report,
            command=args.raw_argv,
            seed=None,
            params={"n": g.n, "k": args.k},
            results={"decision": decision},
            wall_time_ns=time.perf_counter_ns() - t0,
        )
    return 0


def cmd_experiment(args):
    t0 = time.perf_counter_ns()
    if args.preset == "asym":
        if args.n is None or args.eps is None:
            raise ValueError("--preset asym requires --n and --eps")
        base = asym_preset(args.n, args.eps)
    elif args.preset is not None:
        base = dict(PRESETS[args.preset])
    else:
        base = {}

    def pick(flag, key, fallback=None):
        if flag is not None:
            return flag
        if key in base:
            return base[key]
        return fallback

    n = pick(args.n, "n")
    clique_size = pick(args.clique_size, "clique_size")
    order = pick(args.order, "k")
    delta = pick(args.delta, "delta")
    trials = pick(args.trials, "trials", 20)
    missing = [
        name
        for name, v in [("--n", n), ("--clique-size", clique_size),
                        ("--order", order), ("--delta", delta)]
        if v is None
    ]
    if missing:
        raise ValueError(f"missing required experiment parameters: {', '.join(missing)}")

    rect_cols = args.rect_cols
    if args.rect_aspect is not None:
        if rect_cols is not None:
            raise ValueError("give either --rect-cols or --rect-aspect, not both")
        if args.rect_aspect <= 1:
            raise ValueError(f"--rect-aspect must exceed 1, got {args.rect_aspect}")
        rect_cols = int(round((args.rect_aspect - 1) * int(n)))

    params = ReductionParams(
        c=0.3 if args.c is None else args.c,
        psd_tol=PSD_TOL if args.psd_tol is None else args.psd_tol,
    )
    seed = Seed(args.seed, args.stream)
    report = run_distinguishing_experiment(
        n,
        clique_size,
        order,
        delta,
        params=params,
        trials=trials,
        base_seed=seed,
        rect_cols=rect_cols,
        null_statistic=args.null_stat,
        budget=args.budget,
    )
    sep = report.separation
    print(f"tp={sep.true_positives} fp={sep.false_positives} trials={trials}")
    if args.out:
        write_report(
            args.out,
            command=args.raw_argv,
            seed=seed,
            params={
                "preset": args.preset,
                "n": report.n,
                "clique_size": report.clique_size,
                "order": report.k,
                "delta": report.delta,
                "trials": trials,
                "c": params.c,
                "psd_tol": params.psd_tol,
                "rect_cols": rect_cols,
                "null_statistic": args.null_stat,
                "budget": args.budget,
            },
            results=experiment_dict(report),
            wall_time_ns=time.perf_counter_ns() - t0,
        )
    return 0


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args.raw_argv = list(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UnitColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (FileFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
