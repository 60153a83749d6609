"""Command-line harness.

Subcommands: weights, regret, bai, chartime, gen, slope.  Arm numbers in
all output are 1-based.  The worker pool for replicated experiments is
capped by the VECBANDIT_THREADS environment variable.
"""

import argparse
import os
import sys

import numpy as np

from . import harness
from .bai import oracle_weights
from .model import Divergence, relative_losses
from .optweight import grid_oracle, solve_minmax_simplex


def _build_parser():
    p = argparse.ArgumentParser(prog="vecbandit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weights", help="exact optimal mixing weights")
    w.add_argument("--instance", required=True, metavar="F")
    w.add_argument("--grid-check", type=float, default=None, metavar="STEP")

    r = sub.add_parser("regret", help="replicated regret experiment")
    r.add_argument("--algo", required=True, choices=list(harness.REGRET_ALGOS))
    r.add_argument("--instance", required=True, metavar="F")
    r.add_argument("--horizons", required=True, help="comma-separated T values")
    r.add_argument("--reps", type=int, required=True, metavar="R")
    r.add_argument("--seed", type=int, required=True, metavar="S")
    r.add_argument("--out", required=True, metavar="DIR")
    r.add_argument("--N", type=int, default=None, help="override forced exploration")

    b = sub.add_parser("bai", help="replicated best-arm identification")
    b.add_argument("--algo", required=True, choices=list(harness.BAI_ALGOS))
    b.add_argument("--instance", required=True, metavar="F")
    b.add_argument("--delta", type=float, required=True, metavar="D")
    b.add_argument("--reps", type=int, required=True, metavar="R")
    b.add_argument("--seed", type=int, required=True, metavar="S")
    b.add_argument("--out", required=True, metavar="DIR")
    b.add_argument("--max-rounds", type=int, default=10**6, metavar="M")
    b.add_argument("--cadence", type=int, default=10, metavar="R")

    c = sub.add_parser("chartime", help="characteristic time and oracle weights")
    c.add_argument("--instance", required=True, metavar="F")

    g = sub.add_parser("gen", help="write a built-in instance")
    g.add_argument("--kind", required=True, choices=["table1", "lb", "lb-alt"])
    g.add_argument("--epsilon", type=float, default=0.1, metavar="E")
    g.add_argument("--out", required=True, metavar="F")

    s = sub.add_parser("slope", help="log-log slope of mean regret")
    s.add_argument("--in", dest="in_csv", required=True, metavar="CSV")
    return p


def _cmd_weights(args):
    model = harness.load_instance(args.instance)
    rel = relative_losses(model)
    res = solve_minmax_simplex(rel)
    print(f"value {res.value:.12g}")
    print("weights " + " ".join(f"{x:.12g}" for x in res.weights.w))
    print("support " + " ".join(str(i + 1) for i in res.support))
    if args.grid_check is not None:
        _, gval = grid_oracle(rel, args.grid_check)
        print(f"grid_value {gval:.12g}")
        print(f"grid_gap {gval - res.value:.3g}")
    return 0


def _cmd_regret(args):
    model = harness.load_instance(args.instance)
    horizons = tuple(int(x) for x in args.horizons.split(","))
    cfg = harness.ExperimentConfig(
        model=model,
        algo=args.algo,
        horizons=horizons,
        replications=args.reps,
        base_seed=args.seed,
        N_override=args.N,
    )
    rows = harness.run_experiment(cfg)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"regret_{args.algo}.csv")
    harness.write_rows(rows, harness.REGRET_HEADER, path)
    for (algo, T), (mean, se) in harness.mean_regret_by_T(rows).items():
        print(f"{algo} T={T} mean_regret={mean:.4f} se={se:.4f}")
    print(f"wrote {path}")
    return 0


def _cmd_bai(args):
    model = harness.load_instance(args.instance)
    cfg = harness.ExperimentConfig(
        model=model,
        algo=args.algo,
        deltas=(args.delta,),
        replications=args.reps,
        base_seed=args.seed,
        max_rounds=args.max_rounds,
        oracle_cadence=args.cadence,
    )
    rows = harness.run_experiment(cfg)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"bai_{args.algo}.csv")
    harness.write_rows(rows, harness.BAI_HEADER, path)
    taus = [r["tau"] for r in rows]
    errs = sum(1 - r["correct"] for r in rows)
    print(
        f"{args.algo} delta={args.delta} reps={len(rows)} "
        f"median_tau={int(np.median(taus))} errors={errs} "
        f"truncated={sum(r['truncated'] for r in rows)}"
    )
    print(f"wrote {path}")
    return 0


def _cmd_chartime(args):
    model = harness.load_instance(args.instance)
    omega, t_star = oracle_weights(model.means, Divergence(family=model.family))
    print(f"T_star {t_star:.12g}")
    print("omega_star " + " ".join(f"{x:.12g}" for x in omega.w))
    return 0


def _cmd_gen(args):
    if args.kind == "table1":
        model = harness.gen_table1()
    else:
        model = harness.gen_lb_instance(args.epsilon, alt=(args.kind == "lb-alt"))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(harness.serialize_instance(model) + "\n")
    print(f"wrote {args.out}")
    return 0


def _cmd_slope(args):
    rows = harness.read_regret_csv(args.in_csv)
    by_algo = {}
    for r in rows:
        by_algo.setdefault(r["algo"], []).append(r)
    for algo, rs in sorted(by_algo.items()):
        means = harness.mean_regret_by_T(rs)
        points = [(T, mean) for (_, T), (mean, _) in means.items()]
        fit = harness.fit_slope(points)
        print(
            f"{algo} slope={fit.slope:.4f} intercept={fit.intercept:.4f} "
            f"r2={fit.r2:.4f} excluded={fit.excluded}"
        )
    return 0


_COMMANDS = {
    "weights": _cmd_weights,
    "regret": _cmd_regret,
    "bai": _cmd_bai,
    "chartime": _cmd_chartime,
    "gen": _cmd_gen,
    "slope": _cmd_slope,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
