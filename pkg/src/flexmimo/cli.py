"""``flexmimo`` command line: hardening, se-ee and trajectory experiments."""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import hardening as hd
from . import se_ee
from .config import (OPTIMIZERS, ConfigError, RunConfig, SystemConfig, dumps, load_config,
                     validate)
from .io import write_csv, write_json, write_svg
from .trajectory import (TrajectoryProblem, brute_force_oracle, cem_optimize, diffusion_optimize,
                         pg_optimize, random_search)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="64-bit seed")
    common.add_argument("--trials", type=int, help="Monte Carlo trials")

    p = argparse.ArgumentParser(prog="flexmimo", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hardening", parents=[common], help="channel-hardening variance")
    h.add_argument("--flexible", type=int, help="flexible antennas k")
    h.add_argument("--positions", type=int, help="candidate positions N")

    s = sub.add_parser("se-ee", parents=[common], help="SE-EE tradeoff curves")
    s.add_argument("--points", type=int, help="transmit power sweep points")

    t = sub.add_parser("trajectory", parents=[common], help="antenna trajectory optimisation")
    t.add_argument("--optimizer", choices=OPTIMIZERS)
    t.add_argument("--objective", choices=("sum_se", "total_ee"))
    t.add_argument("--budget", type=float, help="travel budget per antenna [m]")
    t.add_argument("--steps", type=int, help="waypoints per antenna")
    return p


def build_run_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else SystemConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.command == "hardening":
        h = cfg.hardening
        for flag, name in (("flexible", "flexible"), ("positions", "positions"), ("trials", "trials")):
            if getattr(args, flag) is not None:
                setattr(h, name, getattr(args, flag))
    elif args.command == "se-ee":
        if args.trials is not None:
            cfg.se_ee.trials = args.trials
        if args.points is not None:
            cfg.se_ee.points = args.points
    else:
        t = cfg.trajectory
        for name in ("optimizer", "objective", "budget", "steps"):
            if getattr(args, name) is not None:
                setattr(t, name, getattr(args, name))
    validate(cfg)
    return RunConfig(args.command, cfg, args.out)


def _outdir(run: RunConfig) -> Path | None:
    if run.out is None:
        return None
    out = Path(run.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_hardening(run: RunConfig) -> None:
    h = run.system.hardening
    res = hd.flp_variance_mc(hd.HardeningConfig(h.flexible, h.positions, h.trials, run.system.seed))
    analytic = hd.flp_variance_analytic(h.flexible, h.positions)
    print(f"k={h.flexible} N={h.positions} trials={h.trials} seed={run.system.seed}")
    print(f"variance = {res.variance:.6f} +/- {res.stderr:.6f} (closed form {analytic:.6f})")
    out = _outdir(run)
    if out is None:
        return
    k_list = sorted(set(h.curve_k))
    n_max = max(h.n_max, max(k_list))
    rows = hd.hardening_curve(k_list, n_max, h.m_max)
    write_csv(rows, out / "hardening.csv")
    idx = [r["index"] for r in rows]
    series = {"fixed": (idx[:h.m_max], [r["fip_variance"] for r in rows[:h.m_max]])}
    for k in k_list:
        series[f"flexible k={k}"] = (idx[k - 1:], [r[f"flp_k{k}"] for r in rows[k - 1:]])
    write_svg(series, out / "hardening.svg", "Channel hardening", "antennas / positions", "variance",
              logy=True)
    write_json({
        "experiment": "hardening",
        "seed": run.system.seed,
        "flexible": h.flexible,
        "positions": h.positions,
        "trials": h.trials,
        "mc_variance": res.variance,
        "mc_stderr": res.stderr,
        "mc_mean_gain": res.mean_gain,
        "analytic_variance": analytic,
        "equivalent_positions": {str(k): hd.equivalent_positions(k, h.m_max) for k in k_list},
        "equivalent_target_antennas": h.m_max,
        "config": dataclasses.asdict(run.system),
    }, out / "summary.json")


def run_se_ee(run: RunConfig) -> None:
    s, sysc = run.system.se_ee, run.system
    sweep = se_ee.default_sweep(s.points, s.p_min_db, s.p_max_db)
    kinds = [spec.build() for spec in s.systems]
    rows, series, table = [], {}, []
    for kind in kinds:
        curve = se_ee.se_ee_curve(kind, sweep, sysc.power, sysc.channel, s.trials, sysc.seed)
        for pt in curve:
            rows.append({"system": kind.label, "tx_power": pt.tx_power, "se": pt.se, "ee": pt.ee,
                         "se_stderr": pt.se_stderr})
        series[kind.label] = ([pt.se for pt in curve], [pt.ee for pt in curve])
        best = se_ee.max_ee_point(curve)
        table.append({"system": kind.label, "max_ee": best.ee, "se_at_max_ee": best.se,
                      "p_at_max_ee": best.tx_power, "se_at_max_p": curve[-1].se})
    for row in table:
        print(f"{row['system']:>24s}  max EE {row['max_ee']:.6g} bit/J at SE {row['se_at_max_ee']:.4f}")
    out = _outdir(run)
    if out is None:
        return
    write_csv(rows, out / "se_ee.csv")
    write_csv(table, out / "compare.csv")
    write_svg(series, out / "se_ee.svg", "SE-EE tradeoff", "SE [bit/s/Hz]", "EE [bit/J]")
    write_json({"experiment": "se-ee", "seed": sysc.seed, "trials": s.trials, "systems": table,
                "config": dataclasses.asdict(sysc)}, out / "summary.json")


def make_problem(cfg: SystemConfig) -> TrajectoryProblem:
    t = cfg.trajectory
    return TrajectoryProblem(cfg.scene.build(), cfg.channel, cfg.power, t.objective, t.steps,
                             t.budget, cfg.seed)


def optimize(cfg: SystemConfig):
    t = cfg.trajectory
    problem = make_problem(cfg)
    if t.optimizer == "diffusion":
        return problem, diffusion_optimize(problem, dataclasses.replace(t.diffusion, seed=cfg.seed))
    if t.optimizer == "cem":
        c = t.cem
        return problem, cem_optimize(problem, c.iterations, c.population, c.elite_fraction, cfg.seed,
                                     c.smoothing)
    if t.optimizer == "random":
        return problem, random_search(problem, t.random_samples, cfg.seed)
    if t.optimizer == "pg":
        return problem, pg_optimize(problem, t.pg_episodes, t.pg, cfg.seed)
    return problem, brute_force_oracle(problem, t.grid_resolution)


def run_trajectory(run: RunConfig) -> None:
    cfg = run.system
    problem, report = optimize(cfg)
    print(f"{cfg.trajectory.optimizer} {problem.objective}: best {report.best_objective:.6g} "
          f"after {report.evaluations} evaluations")
    out = _outdir(run)
    if out is None:
        return
    wp = report.best_waypoints
    init = problem.scene.antenna_init
    rows = []
    for m in range(wp.shape[0]):
        rows.append({"antenna": m, "step": 0, "x": init[m, 0], "y": init[m, 1]})
        for t in range(wp.shape[1]):
            rows.append({"antenna": m, "step": t + 1, "x": wp[m, t, 0], "y": wp[m, t, 1]})
    write_csv(rows, out / "trajectory.csv")
    write_csv([{"iteration": i, "best_objective": v} for i, v in enumerate(report.curve)],
              out / "curve.csv", columns=["iteration", "best_objective"])
    write_svg({report.method: (list(range(len(report.curve))), report.curve)}, out / "curve.svg",
              "Best objective so far", "iteration", problem.objective)
    write_json({
        "experiment": "trajectory",
        "optimizer": cfg.trajectory.optimizer,
        "objective": problem.objective,
        "best_objective": report.best_objective,
        "evaluations": report.evaluations,
        "seed": cfg.seed,
        "config": dataclasses.asdict(cfg),
    }, out / "summary.json")


_RUNNERS = {"hardening": run_hardening, "se-ee": run_se_ee, "trajectory": run_trajectory}


def run(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run_cfg = build_run_config(args)
        _RUNNERS[run_cfg.experiment](run_cfg)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"flexmimo: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
