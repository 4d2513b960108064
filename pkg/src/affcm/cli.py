"""Command-line entry point: ``affcm gen | run | bench | stats``.

Exit codes: 0 success, 1 bad input, 2 usage error, 3 a run hit ``--max-iter``
without converging (suppressed by ``--allow-maxiter``).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import ENGINES
from .core import ALGORITHMS, INIT_METHODS, ConfigurationError, Dataset, RunConfig, initialize_centers
from .datagen import PRESETS, generate_gaussian_mixture, load_mixture_spec
from .io import SCHEMA_VERSION, read_csv, read_json, trace_to_dict, write_csv, write_json
from .metrics import evaluate
from .rng import derive_seeds
from .stats import friedman_ranks, nemenyi_cd

logger = logging.getLogger("affcm")

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_MAXITER = 0, 1, 2, 3

HIGHER_IS_BETTER = {"pc": True, "fStar": True, "ari": True, "nmi": True}
TRIAL_METRICS = ("iterations", "time", "jFuzzy", "jHard", "pc", "dbi", "xb", "fStar", "ari", "nmi")


class UsageError(Exception):
    pass


def worker_count() -> int:
    raw = os.environ.get("AFFCM_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigurationError(f"AFFCM_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


# ----------------------------------------------------------------------------
# gen


def cmd_gen(args) -> int:
    if args.preset and args.spec:
        raise UsageError("use either --preset or --spec")
    if args.preset:
        data = PRESETS[args.preset](args.seed if args.seed is not None else 0)
    elif args.spec:
        comps, seed = load_mixture_spec(args.spec)
        data = generate_gaussian_mixture(comps, args.seed if args.seed is not None else seed)
    else:
        raise UsageError("one of --preset or --spec is required")
    write_csv(data, args.out)
    logger.info("wrote %d samples to %s", data.n, args.out)
    return EXIT_OK


# ----------------------------------------------------------------------------
# run


def _config(args, algorithm: str, seed: int) -> RunConfig:
    return RunConfig(
        n_clusters=args.c, m=args.m, epsilon=args.eps, max_iter=args.max_iter,
        seed=seed, init=args.init, algorithm=algorithm,
    )


def _check_c(data: Dataset, c: int) -> None:
    if c > data.n:
        raise ConfigurationError(f"c={c} exceeds the number of samples n={data.n}")


def _single_run(data, cfg, init_centers, timing):
    trace = ENGINES[cfg.algorithm](data, cfg, init_centers=init_centers, timing=timing)
    trace.metrics = evaluate(data, trace.centers, trace.memberships, cfg.m)
    return trace


def cmd_run(args) -> int:
    data = read_csv(args.data, args.header)
    _check_c(data, args.c)
    cfg = _config(args, args.algo, args.seed)
    trace = _single_run(data, cfg, None, not args.no_timing)
    write_json(trace_to_dict(trace, with_memberships=args.with_memberships), args.trace)
    logger.info(
        "%s: %d iterations, converged=%s, J_fuzzy=%.6g",
        args.algo, trace.iterations, trace.converged, trace.records[-1].fuzzy_objective,
    )
    if not trace.converged and not args.allow_maxiter:
        return EXIT_MAXITER
    return EXIT_OK


# ----------------------------------------------------------------------------
# bench


def _trial_record(k, seed, trace):
    rec = {
        "trial": k,
        "seed": seed,
        "iterations": trace.iterations,
        "converged": trace.converged,
        "time": trace.wall_time,
        "initCenters": trace.initial_centers,
    }
    rec.update(trace.metrics)
    return rec


def _summaries(records):
    mean, std = {}, {}
    for key in TRIAL_METRICS:
        vals = [r[key] for r in records if r.get(key) is not None]
        if vals:
            mean[key] = float(np.mean(vals))
            std[key] = float(np.std(vals))
    return mean, std


def run_bench(data: Dataset, args) -> tuple[dict, bool]:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad or not algos:
        raise UsageError(f"unknown algorithms {bad}; choose from {', '.join(ALGORITHMS)}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    seeds = derive_seeds(args.seed, args.trials)
    # every algorithm in trial k starts from the same centers
    inits = [initialize_centers(data, _config(args, algos[0], s)).centers for s in seeds]
    jobs = [(k, a) for k in range(args.trials) for a in algos]
    timing = not args.no_timing

    def job(item):
        k, a = item
        return _single_run(data, _config(args, a, seeds[k]), inits[k], timing)

    workers = min(worker_count(), len(jobs))
    if workers == 1:
        traces = [job(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(job, jobs))
    by_job = dict(zip(jobs, traces))

    report = {
        "schema": SCHEMA_VERSION,
        "dataset": str(args.data),
        "n": data.n,
        "p": data.p,
        "c": args.c,
        "m": args.m,
        "eps": args.eps,
        "trials": args.trials,
        "seed": args.seed,
        "algorithms": [],
    }
    all_converged = True
    for a in algos:
        per = [_trial_record(k, seeds[k], by_job[(k, a)]) for k in range(args.trials)]
        all_converged &= all(r["converged"] for r in per)
        mean, std = _summaries(per)
        report["algorithms"].append({"name": a, "perTrial": per, "mean": mean, "std": std})
    return report, all_converged


def cmd_bench(args) -> int:
    data = read_csv(args.data, args.header)
    _check_c(data, args.c)
    report, all_converged = run_bench(data, args)
    write_json(report, args.report)
    for entry in report["algorithms"]:
        logger.info("%-6s mean iterations %.2f", entry["name"], entry["mean"]["iterations"])
    if not all_converged and not args.allow_maxiter:
        return EXIT_MAXITER
    return EXIT_OK


# ----------------------------------------------------------------------------
# stats


def stats_from_reports(reports: list[dict], metric: str, alpha: float) -> dict:
    if len(reports) < 2:
        raise UsageError("need at least two reports (datasets)")
    names = [e["name"] for e in reports[0]["algorithms"]]
    if len(names) < 2:
        raise UsageError("need at least two algorithms")
    scores = []
    for rep in reports:
        means = {e["name"]: e["mean"].get(metric) for e in rep["algorithms"]}
        if sorted(means) != sorted(names):
            raise ConfigurationError("all reports must cover the same algorithms")
        if any(means[a] is None for a in names):
            raise ConfigurationError(f"metric {metric!r} missing from report {rep.get('dataset')!r}")
        scores.append([means[a] for a in names])
    higher = HIGHER_IS_BETTER.get(metric, False)
    res = friedman_ranks(scores, higher_is_better=higher, alpha=alpha)
    cd = nemenyi_cd(len(names), len(reports), alpha)
    return {
        "schema": SCHEMA_VERSION,
        "metric": metric,
        "alpha": alpha,
        "higherIsBetter": higher,
        "datasets": [r.get("dataset") for r in reports],
        "algorithms": names,
        "scores": scores,
        "ranks": res.ranks,
        "meanRanks": dict(zip(names, res.mean_ranks.tolist())),
        "statistic": res.statistic,
        "pValue": res.p_value,
        "significant": res.significant,
        "cd": cd,
    }


def cmd_stats(args) -> int:
    reports = [read_json(p) for p in args.reports]
    out = stats_from_reports(reports, args.metric, args.alpha)
    if args.out:
        write_json(out, args.out)
    else:
        from .io import dumps

        sys.stdout.write(dumps(out))
    return EXIT_OK


# ----------------------------------------------------------------------------


def _add_run_options(p):
    p.add_argument("--data", required=True, help="CSV dataset")
    p.add_argument("--header", choices=("auto", "yes", "no"), default="auto")
    p.add_argument("--c", type=int, required=True, help="number of clusters")
    p.add_argument("--m", type=float, default=2.0, help="fuzzifier (> 1)")
    p.add_argument("--eps", type=float, default=1e-6, help="stop when ||V_new - V||_F < eps")
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", choices=INIT_METHODS, default="distinct-sample-draw")
    p.add_argument("--no-timing", action="store_true", help="record 0 ns per iteration (reproducible output)")
    p.add_argument("--allow-maxiter", action="store_true", help="exit 0 even if a run does not converge")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affcm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic dataset")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--spec", help="JSON mixture spec")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="one clustering run, written as a trace")
    r.add_argument("--algo", choices=ALGORITHMS, required=True)
    _add_run_options(r)
    r.add_argument("--trace", required=True, help="output trace JSON")
    r.add_argument("--with-memberships", action="store_true")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="multi-trial comparison with shared initializations")
    _add_run_options(b)
    b.add_argument("--algos", default=",".join(ALGORITHMS))
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--report", required=True, help="output report JSON")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("stats", help="Friedman ranks and Nemenyi CD over bench reports")
    s.add_argument("--reports", nargs="+", required=True)
    s.add_argument("--metric", default="iterations")
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--out")
    s.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"affcm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"affcm: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
