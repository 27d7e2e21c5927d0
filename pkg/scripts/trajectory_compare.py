"""Optimiser comparison on small instances and the clustered-user EE/SE contrast."""
import argparse
from pathlib import Path

import numpy as np

from flexmimo.io import write_csv, write_svg
from flexmimo.trajectory import (SUM_SE, TOTAL_EE, brute_force_oracle, cem_optimize, diffusion_optimize,
                                 pg_optimize, random_search, tiny_instance)
from flexmimo.trajectory.diffusion import DiffusionConfig
from flexmimo.trajectory.scenarios import clustered_instance, final_centroid_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/trajectory")
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows, curves = [], {}
    for seed in range(args.seeds):
        prob = tiny_instance(seed)
        oracle = brute_force_oracle(prob, 11).best_objective
        diff = diffusion_optimize(prob, DiffusionConfig(seed=seed))
        reports = {
            "diffusion": diff,
            "cem": cem_optimize(prob, 30, 64, 0.125, seed, 0.4),
            "random": random_search(prob, diff.evaluations, seed),
            "pg": pg_optimize(prob, 120, seed=seed),
        }
        for name, rep in reports.items():
            rows.append({"seed": seed, "method": name, "ratio_to_oracle": rep.best_objective / oracle,
                         "evaluations": rep.evaluations})
            if seed == 0:
                curves[name] = (list(range(len(rep.curve))), [v / oracle for v in rep.curve])
    write_csv(rows, out / "tiny_ratios.csv")
    write_svg(curves, out / "tiny_curves.svg", "Best objective / oracle (seed 0)", "iteration", "ratio")
    for name in ("diffusion", "cem", "random", "pg"):
        r = [row["ratio_to_oracle"] for row in rows if row["method"] == name]
        print(f"{name:>9s}: mean ratio {np.mean(r):.3f}, worst {np.min(r):.3f}")

    dist_rows = []
    for seed in range(args.seeds):
        for obj in (SUM_SE, TOTAL_EE):
            prob = clustered_instance(seed, obj)
            rep = diffusion_optimize(prob, DiffusionConfig(seed=seed))
            dist_rows.append({"seed": seed, "objective": obj,
                              "centroid_distance": final_centroid_distance(prob, rep.best_waypoints)})
    write_csv(dist_rows, out / "clustered.csv")
    for obj in (SUM_SE, TOTAL_EE):
        d = [r["centroid_distance"] for r in dist_rows if r["objective"] == obj]
        print(f"{obj:>9s}: mean final distance to user centroid {np.mean(d):.3f} m")


if __name__ == "__main__":
    main()
