"""Command-line front end.

Subcommands: simulate, transform, compare, complexity, excursions,
appendix-verify, demo.  Each writes a ``report.json`` plus data CSVs into
the output directory and exits 0 exactly when every declared check in the
report passed.  The master seed comes from --seed, then the config file,
then the ALPSLAB_SEED environment variable, then a fixed default.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import chain, demo, harness, randomwalk, transform
from .config import ConfigError, RunConfig, default_config, parse_config
from .ladder import Spacing, build_ladder, skew_constants
from .util import spawn_rngs, write_csv

_DEFAULT_SEED = 20210

SUBCOMMANDS = ("simulate", "transform", "compare", "complexity",
               "excursions", "appendix-verify", "demo")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="alpslab",
        description="Tempering-chain simulation laboratory")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--seed", type=int, help="master seed (overrides config)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for replica-parallel experiments")
    p.add_argument("--out-dir", help="output directory (overrides config)")
    p.add_argument("--steps", type=int, help="override simulation step count")
    p.add_argument("--replicas", type=int, help="override replica count")
    p.add_argument("--dims", type=int, nargs="+",
                   help="override dimension list for scans")
    p.add_argument("--spacing", choices=("standard", "quanta"),
                   help="override ladder spacing")
    p.add_argument("--quanta-k", type=float, default=3.0,
                   help="exponent for quanta spacing (> 2)")
    p.add_argument("--plots", action="store_true",
                   help="also emit SVG plots (requires matplotlib)")
    return p


def _resolve(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else default_config()
    if args.seed is not None:
        cfg.seed = args.seed
    if cfg.seed is None:
        cfg.seed = int(os.environ.get("ALPSLAB_SEED", _DEFAULT_SEED))
    if args.out_dir:
        cfg.out_dir = args.out_dir
    if args.steps:
        cfg.steps = args.steps
    if args.replicas:
        cfg.replicas = args.replicas
    if args.dims:
        cfg.dims = tuple(args.dims)
    if args.spacing == "quanta":
        cfg.spacing = Spacing.quanta(args.quanta_k)
    elif args.spacing == "standard":
        cfg.spacing = Spacing.standard()
    if args.plots:
        cfg.plots = True
    return cfg


def _meta(cfg: RunConfig) -> dict:
    return {"config_hash": cfg.hash, "seed": cfg.seed}


def _maybe_plot(cfg: RunConfig, name: str, xs, ys, xlabel: str, ylabel: str):
    if not cfg.plots:
        return
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("plots requested but matplotlib is unavailable", file=sys.stderr)
        return
    fig, ax = plt.subplots(figsize=(9, 3))
    ax.plot(xs, ys, lw=0.6)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(os.path.join(cfg.out_dir, name), format="svg")
    plt.close(fig)


def _cmd_simulate(cfg: RunConfig) -> harness.ExperimentReport:
    ladder = build_ladder(cfg.target.dimension, cfg.resolved_betamax,
                          cfg.ell0, cfg.spacing)
    trace = chain.run(cfg.target, ladder, cfg.steps, seed=cfg.seed,
                      state_mode=cfg.state_mode)
    report = harness.ExperimentReport(kind="simulate", config=cfg.to_dict(),
                                      seed=cfg.seed)
    occupancy = float(np.mean(trace.mode == 0))
    report.add(harness.Metric(name="mode0_occupancy", estimate=occupancy,
                              n=len(trace)))
    rows = harness.acceptance_profile(trace, ladder, cfg.target)
    try:
        rate, n = harness.interior_rate(rows, ladder.k)
        report.add(harness.Metric(name="interior_acceptance", estimate=rate, n=n))
    except ValueError:
        pass
    ladder.to_csv(os.path.join(cfg.out_dir, "ladder.csv"), meta=_meta(cfg))
    trace.to_csv(os.path.join(cfg.out_dir, "trace.csv"), meta=_meta(cfg))
    harness.profile_to_csv(os.path.join(cfg.out_dir, "acceptance_profile.csv"),
                           rows, meta=_meta(cfg))
    _maybe_plot(cfg, "beta_trace.svg", trace.t, trace.beta, "t", "beta")
    return report


def _cmd_transform(cfg: RunConfig) -> harness.ExperimentReport:
    ladder = build_ladder(cfg.target.dimension, cfg.resolved_betamax,
                          cfg.ell0, cfg.spacing)
    constants = skew_constants(cfg.target, cfg.ell0)
    trace = chain.run(cfg.target, ladder, cfg.steps, seed=cfg.seed,
                      state_mode=cfg.state_mode)
    path_x = chain.poissonize(trace)
    path_h = transform.to_H(path_x, ladder)
    path_z = transform.to_Z(path_h)
    path_w = transform.to_W(path_z, constants)
    for path, name in ((path_x, "stage_x.csv"), (path_h, "stage_h.csv"),
                       (path_z, "stage_z.csv"), (path_w, "stage_w.csv")):
        path.to_csv(os.path.join(cfg.out_dir, name), meta=_meta(cfg))
    report = harness.ExperimentReport(kind="transform", config=cfg.to_dict(),
                                      seed=cfg.seed)
    report.add(harness.Metric(name="total_time_scale",
                              estimate=path_w.time_scale, n=len(trace)))
    _maybe_plot(cfg, "stage_w.svg", path_w.times, path_w.values, "t", "W")
    return report


def _cmd_compare(cfg: RunConfig) -> harness.ExperimentReport:
    dims = (min(cfg.dims), max(cfg.dims))
    rows_all = []
    wins = 0
    reps = cfg.seed_replications
    for j in range(reps):
        rows = harness.weak_convergence_test(
            cfg.target, dims, cfg.t_values, cfg.replicas, seed=cfg.seed + j,
            ell0=cfg.ell0, betamax_factor=cfg.betamax_factor)
        rows_all.extend((j,) + (r.d, r.t, r.ks, r.n_chain, r.n_ref) for r in rows)
        by = {(r.d, r.t): r.ks for r in rows}
        wins += all(by[(dims[1], t)] < by[(dims[0], t)]
                    for t in cfg.t_values if t > 0)
    frac = wins / reps
    report = harness.ExperimentReport(kind="compare", config=cfg.to_dict(),
                                      seed=cfg.seed)
    report.add(harness.Metric(
        name="ks_smaller_at_larger_d", estimate=frac, n=reps,
        target=1.0, tolerance=0.10).check_abs())
    write_csv(os.path.join(cfg.out_dir, "ks_table.csv"),
              ["replication", "d", "t", "ks", "n_chain", "n_ref"],
              rows_all, meta=_meta(cfg))
    return report


def _cmd_complexity(cfg: RunConfig) -> harness.ExperimentReport:
    rows = harness.complexity_scan(
        cfg.target, cfg.dims, cfg.spacing, cfg.replicas, seed=cfg.seed,
        ell0=cfg.ell0, betamax_factor=cfg.betamax_factor, threads=cfg.threads)
    report = harness.ExperimentReport(kind="complexity", config=cfg.to_dict(),
                                      seed=cfg.seed)
    censored = sum(r.censored_lanes for r in rows)
    report.add(harness.Metric(name="censored_lanes", estimate=float(censored),
                              n=len(rows), target=0.0, tolerance=0.0).check_abs())
    if cfg.spacing.kind == "standard":
        spread = harness.ratio_spread(rows, "ratio_dlog2")
        report.add(harness.Metric(name="dlog2_ratio_spread", estimate=spread,
                                  n=len(rows), target=1.0, tolerance=1.0).check_abs())
    else:
        spread = harness.ratio_spread(rows, "ratio_d")
        report.add(harness.Metric(name="d_ratio_spread", estimate=spread,
                                  n=len(rows), target=1.0, tolerance=1.0).check_abs())
        decreasing = all(a.ratio_dlog2 > b.ratio_dlog2
                         for a, b in zip(rows, rows[1:]))
        report.add(harness.Metric(name="dlog2_ratio_decreasing",
                                  estimate=float(decreasing), n=len(rows),
                                  target=1.0, tolerance=0.0).check_abs())
    harness.scan_to_csv(os.path.join(cfg.out_dir, "complexity_scan.csv"),
                        rows, meta=_meta(cfg))
    return report


def _cmd_excursions(cfg: RunConfig) -> harness.ExperimentReport:
    ladder = build_ladder(cfg.target.dimension, cfg.resolved_betamax,
                          cfg.ell0, cfg.spacing)
    constants = skew_constants(cfg.target, cfg.ell0)
    stats = harness.excursion_experiment(
        cfg.target, ladder, constants, lanes=cfg.replicas, steps=cfg.steps,
        seed=cfg.seed, min_peak=cfg.min_peak)
    predicted = constants.alpha
    se = math.sqrt(predicted * (1 - predicted) / max(1, stats.n_excursions))
    report = harness.ExperimentReport(kind="excursions", config=cfg.to_dict(),
                                      seed=cfg.seed)
    report.add(harness.Metric(
        name="positive_excursion_fraction", estimate=stats.fraction_positive,
        se=se, n=stats.n_excursions, target=predicted,
        tolerance=3 * se).check_abs())
    return report


def _cmd_appendix(cfg: RunConfig) -> harness.ExperimentReport:
    worst, violations = randomwalk.bound_sweep(
        range(2, cfg.m_max + 1), cfg.n_max, n_min=16, initials=(0, 1))
    randomwalk.sweep_to_csv(os.path.join(cfg.out_dir, "refrw_sweep.csv"),
                            worst, meta=_meta(cfg))
    report = harness.ExperimentReport(kind="appendix-verify",
                                      config=cfg.to_dict(), seed=cfg.seed)
    report.add(harness.Metric(name="bound_violations",
                              estimate=float(len(violations)),
                              n=len(worst), target=0.0, tolerance=0.0).check_abs())
    rng = spawn_rngs(cfg.seed, 1, stream="appendix-occupation")[0]
    fracs = randomwalk.occupation_experiment(
        randomwalk.BirthDeathChain(m=50, hold=0.5), n=10_000, replicas=200,
        rng=rng)
    report.add(harness.Metric(name="lazy_mean_occupation",
                              estimate=float(fracs.mean()),
                              se=float(fracs.std(ddof=1) / math.sqrt(fracs.size)),
                              n=fracs.size, target=0.0, tolerance=0.05).check_abs())
    return report


def _cmd_demo(cfg: RunConfig) -> harness.ExperimentReport:
    report = demo.demo_scenario(seed=cfg.seed, out_dir=cfg.out_dir,
                                steps=cfg.steps)
    if cfg.plots:
        import csv
        with open(os.path.join(cfg.out_dir, "fig2_beta_trace.csv")) as f:
            rows = [r for r in csv.reader(x for x in f if not x.startswith("#"))]
        ts = [float(r[0]) for r in rows[1:]]
        bs = [float(r[1]) for r in rows[1:]]
        _maybe_plot(cfg, "fig2_beta_trace.svg", ts, bs, "t", "beta")
    return report


_HANDLERS = {
    "simulate": _cmd_simulate,
    "transform": _cmd_transform,
    "compare": _cmd_compare,
    "complexity": _cmd_complexity,
    "excursions": _cmd_excursions,
    "appendix-verify": _cmd_appendix,
    "demo": _cmd_demo,
}


def dispatch(cfg: RunConfig, command: str) -> int:
    """Run one subcommand; writes report.json and returns the exit status."""
    os.makedirs(cfg.out_dir, exist_ok=True)
    report = _HANDLERS[command](cfg)
    report.write(os.path.join(cfg.out_dir, "report.json"))
    for m in report.metrics:
        status = "PASS" if m.passed else ("FAIL" if m.passed is False else "info")
        print(f"[{status}] {m.name} = {m.estimate:.6g}"
              + (f" (target {m.target:.6g} +- {m.tolerance:.3g})"
                 if m.target is not None else ""))
    return 0 if report.passed else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        return 2
    cfg.threads = args.threads
    return dispatch(cfg, args.command)


if __name__ == "__main__":
    sys.exit(main())
