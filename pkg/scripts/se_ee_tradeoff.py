"""SE-EE curves for fixed and flexible arrays, and the effect of the movement cost."""
import argparse
from pathlib import Path

from flexmimo.core import ChannelParams, PowerModel
from flexmimo.io import write_csv, write_svg
from flexmimo.se_ee import Fixed, Flexible, compare_systems, default_sweep, se_ee_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/se_ee")
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    kinds = [Fixed(20), Fixed(4), Flexible(4, 30), Flexible(4, 60)]
    sweep = default_sweep()
    series, rows = {}, []
    for kind in kinds:
        curve = se_ee_curve(kind, sweep, PowerModel(), ChannelParams(), args.trials, args.seed)
        series[kind.label] = ([p.se for p in curve], [p.ee for p in curve])
        rows += [{"system": kind.label, "tx_power": p.tx_power, "se": p.se, "ee": p.ee} for p in curve]
    write_csv(rows, out / "se_ee.csv")
    write_svg(series, out / "se_ee.svg", "SE-EE tradeoff", "SE [bit/s/Hz]", "EE [bit/J]")

    # how the flexible advantage erodes as moving gets more expensive
    sweep_rows = []
    for c_move in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0]:
        table = compare_systems([Fixed(20), Flexible(4, 30)], PowerModel(move_cost=c_move), ChannelParams(),
                                sweep, args.trials, args.seed)
        ratio = table[1]["max_ee"] / table[0]["max_ee"]
        sweep_rows.append({"move_cost": c_move, "fixed_max_ee": table[0]["max_ee"],
                           "flexible_max_ee": table[1]["max_ee"], "ratio": ratio})
        print(f"c_move={c_move:5.1f} W/m  flexible/fixed max-EE ratio {ratio:.3f}")
    write_csv(sweep_rows, out / "move_cost.csv")


if __name__ == "__main__":
    main()
