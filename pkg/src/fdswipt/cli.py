"""Command-line entry point.

Powers are given in dB relative to the antenna noise (0 dB = unit power)
and converted to linear once, here.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .joint_solver import JointSettings, brute_force_oracle, solve
from .model import Channel, SystemParams
from .power_solver import PowerSolverSettings
from .sim_harness import (
    ChannelModel,
    SweepRow,
    SweepSpec,
    db_to_linear,
    run_sweep,
    sample_channel,
    trial_rng,
    write_csv,
)

log = logging.getLogger("fdswipt")

ORACLE_TOL = 0.05


def _common(p: argparse.ArgumentParser):
    p.add_argument("--kappa", type=float, default=0.3,
                   help="residual SI power fraction after cancellation")
    p.add_argument("--eps-fraction", type=float, default=0.0,
                   help="CSI error energy as a fraction of the estimated SI gain")
    p.add_argument("--sigma-p-sq", type=float, default=0.1, help="conversion noise variance")
    p.add_argument("--alpha", type=float, default=1.0, help="energy conversion efficiency")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta-eta", type=float, default=0.05)
    p.add_argument("--bisect-tol", type=float, default=1e-4)
    p.add_argument("--alt-tol", type=float, default=1e-4)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdswipt", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimize one channel realization")
    _common(p)
    p.add_argument("--p-max-db", type=float, default=10.0)
    p.add_argument("--q-bar", type=float, default=0.5)
    p.add_argument("--channel", type=str, default=None,
                   help="explicit power gains g_cb,g_ad,g_ab,g_cd (skips random draw)")
    p.add_argument("--out", type=Path, default=None, help="optional single-row CSV")

    p = sub.add_parser("sweep-pmax", help="sum-rate versus power budget")
    _common(p)
    p.add_argument("--p-max-db", type=float, nargs="+", default=[0, 5, 10, 15, 20, 25])
    p.add_argument("--q-bar", type=float, nargs="+", default=[0.1, 0.5])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("sweep_pmax.csv"))

    p = sub.add_parser("sweep-rsi", help="sum-rate versus residual SI above noise")
    _common(p)
    p.add_argument("--rsi-db", type=float, nargs="+", default=[0, 4, 8, 12, 16, 20])
    p.add_argument("--p-max-db", type=float, nargs="+", default=[10, 20])
    p.add_argument("--q-bar", type=float, nargs="+", default=[0.5])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("sweep_rsi.csv"),
                   help="one file per budget: <stem>_pmax<dB>dB<suffix>")

    p = sub.add_parser("oracle-check", help="compare the solver with a grid search")
    _common(p)
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--p-max-db", type=float, default=10.0)
    p.add_argument("--q-bar", type=float, default=0.5)
    p.add_argument("--grid-n", type=int, default=64)
    return parser


def _settings(args) -> JointSettings:
    return JointSettings(alt_tol=args.alt_tol, power=PowerSolverSettings(
        delta_eta=args.delta_eta, bisect_tol=args.bisect_tol))


def _params(args, p_max_db: float, q_bar: float) -> SystemParams:
    return SystemParams(sigma_p1_sq=args.sigma_p_sq, sigma_p2_sq=args.sigma_p_sq,
                        alpha=args.alpha, p_max=db_to_linear(p_max_db),
                        q_bar_21=q_bar, q_bar_12=q_bar)


def _meta(args) -> dict:
    skip = {"command", "verbose", "out", "jobs"}
    return {"command": args.command,
            **{k: v for k, v in sorted(vars(args).items()) if k not in skip}}


def _cmd_solve(args) -> int:
    sp = _params(args, args.p_max_db, args.q_bar)
    if args.channel:
        gains = [float(g) for g in args.channel.split(",")]
        if len(gains) != 4:
            raise ValueError("--channel expects four comma-separated power gains")
        ch = Channel.from_power_gains(*gains)
    else:
        ch = sample_channel(trial_rng(args.seed, 0),
                            ChannelModel(kappa=args.kappa, eps_fraction=args.eps_fraction))
    sol = solve(ch, sp, _settings(args))
    if sol.infeasible:
        print(f"infeasible: harvest threshold {args.q_bar:g} cannot be met "
              f"with P_max = {args.p_max_db:g} dB", file=sys.stderr)
        return 1
    print(f"channel gains     |h_cb|^2={ch.g_cb:.6g} |h_ad|^2={ch.g_ad:.6g} "
          f"|h_ab|^2={abs(ch.h_ab_hat) ** 2:.6g} |h_cd|^2={abs(ch.h_cd_hat) ** 2:.6g}")
    print(f"powers            P1={sol.powers.p1:.6g} P2={sol.powers.p2:.6g}")
    print(f"splits            rho1={sol.splits.rho1:.9g} rho2={sol.splits.rho2:.9g}"
          + ("  (clamped)" if sol.rho_clamped else ""))
    print(f"rate split eta    {sol.eta_opt:.6g}")
    print(f"rates [bit/s/Hz]  C21={sol.c_21:.6g} C12={sol.c_12:.6g} sum={sol.r_sum:.6g}")
    print(f"harvested         Q21={sol.q_21:.6g} Q12={sol.q_12:.6g}")
    print(f"outer iterations  {sol.outer_iters} (converged={sol.converged})")
    if args.out:
        row = SweepRow("p_max_db", args.p_max_db, args.q_bar, "joint", sol.r_sum, 1, 0)
        write_csv([row], args.out, _meta(args))
    return 0


def _cmd_sweep_pmax(args) -> int:
    spec = SweepSpec("p_max_db", tuple(args.p_max_db), tuple(args.q_bar), args.trials, args.seed)
    model = ChannelModel(kappa=args.kappa, eps_fraction=args.eps_fraction)
    rows = run_sweep(spec, _params(args, 0.0, 0.0), model, _settings(args), args.jobs)
    write_csv(rows, args.out, _meta(args))
    log.info("wrote %d rows to %s", len(rows), args.out)
    return 0


def _cmd_sweep_rsi(args) -> int:
    model = ChannelModel(si_mode="rsi_above_noise", eps_fraction=args.eps_fraction)
    for p_db in args.p_max_db:
        spec = SweepSpec("rsi_db", tuple(args.rsi_db), tuple(args.q_bar), args.trials, args.seed,
                         p_max_db=p_db)
        rows = run_sweep(spec, _params(args, p_db, 0.0), model, _settings(args), args.jobs)
        out = args.out.with_name(f"{args.out.stem}_pmax{p_db:g}dB{args.out.suffix}")
        write_csv(rows, out, {**_meta(args), "p_max_db": p_db})
        log.info("wrote %d rows to %s", len(rows), out)
    return 0


def _cmd_oracle_check(args) -> int:
    sp = _params(args, args.p_max_db, args.q_bar)
    model = ChannelModel(kappa=args.kappa, eps_fraction=args.eps_fraction)
    settings = _settings(args)
    deficits = []
    for i in range(args.instances):
        ch = sample_channel(trial_rng(args.seed, i), model)
        sol = solve(ch, sp, settings)
        ref = brute_force_oracle(ch, sp, args.grid_n)
        if sol.infeasible != ref.infeasible:
            print(f"instance {i}: feasibility disagrees (solver={not sol.infeasible}, "
                  f"oracle={not ref.infeasible})", file=sys.stderr)
            return 1
        if not sol.infeasible:
            deficits.append(ref.r_sum - sol.r_sum)
            log.info("instance %d: solver %.6f oracle %.6f", i, sol.r_sum, ref.r_sum)
    worst = max(deficits, default=0.0)
    print(f"instances={args.instances} max_deficit={worst:.6g} bits (limit {ORACLE_TOL})")
    return 0 if worst <= ORACLE_TOL else 1


COMMANDS = {
    "solve": _cmd_solve,
    "sweep-pmax": _cmd_sweep_pmax,
    "sweep-rsi": _cmd_sweep_rsi,
    "oracle-check": _cmd_oracle_check,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
