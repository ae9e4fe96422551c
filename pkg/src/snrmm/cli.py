"""Command-line entry point: every library capability, machine-first JSON output."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import bayes, experiments, minimax, risk, tuning
from .estimators import EstimatorKind, Tuning
from .experiments import parse_estimator


class CliError(Exception):
    """Validation failure: exits 2 with a one-line diagnostic."""


def _positive(value: float, flag: str) -> float:
    if not value > 0:
        raise CliError(f"{flag} must be positive, got {value}")
    return value


def _non_negative(value: float, flag: str) -> float:
    if value < 0:
        raise CliError(f"{flag} must be non-negative, got {value}")
    return value


def _space(args) -> risk.SparseSpace:
    try:
        return risk.SparseSpace(
            n=args.n,
            k=args.k,
            tau=args.tau,
            sigma=args.sigma,
            a_bound=getattr(args, "bounded", None),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")


def _tuning_from_args(args) -> Tuning:
    lam = _non_negative(args.lam, "--lambda")
    gamma = _non_negative(args.gamma, "--gamma")
    return Tuning(lam=lam, gamma=gamma)


def _cmd_risk(args) -> None:
    kind = parse_estimator(args.estimator)
    tun = _tuning_from_args(args)
    if args.oracle == "quadrature":
        report = risk.quad_risk(kind, tun, args.mu)
    elif args.oracle == "mc":
        report = risk.mc_risk(kind, tun, args.mu, args.samples, args.seed)
    else:
        if kind is EstimatorKind.SOFT:
            value = risk.risk_soft(tun.lam, args.mu)
        elif kind is EstimatorKind.HARD:
            value = risk.risk_hard(tun.lam, args.mu)
        elif kind is EstimatorKind.LINEAR:
            value = risk.risk_linear(tun.lam, args.mu)
        elif kind is EstimatorKind.SOFT_LINEAR:
            value = risk.risk_elastic(tun.lam, tun.gamma, args.mu)
        else:
            value = risk.risk_zero(args.mu)
        report = risk.RiskReport(value=value, method="closed_form", error_bound=0.0)
    _emit(
        {
            "value": report.value,
            "method": report.method,
            "error_bound": report.error_bound,
        }
    )


def _cmd_suprisk(args) -> None:
    kind = parse_estimator(args.estimator)
    report = risk.sup_risk(kind, _tuning_from_args(args), _space(args))
    _emit(
        {
            "value": report.value,
            "method": report.method,
            "error_bound": report.error_bound,
        }
    )


def _cmd_tune(args) -> None:
    kind = parse_estimator(args.estimator)
    space = _space(args)
    if kind is EstimatorKind.SOFT_LINEAR:
        result = tuning.optimize_lambda_gamma(space, refine_tol=args.refine_tol)
    elif kind in (EstimatorKind.SOFT, EstimatorKind.HARD, EstimatorKind.LINEAR):
        result = tuning.optimize_lambda(
            kind, space, grid_points=args.grid_points, refine_tol=args.refine_tol
        )
    else:
        raise CliError(f"--estimator {args.estimator}: nothing to tune")
    _emit(
        {
            "lambda_opt": result.tuning.lam,
            "gamma_opt": result.tuning.gamma,
            "value": result.value,
            "evaluations": result.evaluations,
            "boundary": result.boundary,
            "gamma_clamped": result.gamma_clamped,
        }
    )


def _cmd_minimax(args) -> None:
    space = _space(args)
    if args.regime is None:
        decision = minimax.classify_regime(space)
        regime = decision.regime
        if regime is minimax.Regime.UNCLASSIFIED:
            raise CliError(
                f"space sits in the unclassified band (mu={decision.mu:.4g}, "
                f"ratio={decision.ratio:.4g}); pass --regime explicitly"
            )
    else:
        regime = minimax.Regime(args.regime)
    approx = minimax.minimax_approx(space, regime)
    _emit(
        {
            "regime": approx.regime.value,
            "first_order": approx.first_order,
            "second_order": approx.second_order,
            "lower_bound": approx.lower_bound,
            "upper_bound": approx.upper_bound,
            "nu": approx.nu,
            "bounded_space": approx.bounded_space,
            "note": approx.note,
        }
    )


def _cmd_bayes(args) -> None:
    sided = bayes.Sided.SYMMETRIC if args.sided == "symmetric" else bayes.Sided.ONE_SIDED
    try:
        prior = bayes.BlockPrior(
            spike=bayes.SpikePrior(mu=args.mu, m=args.m, sided=sided),
            blocks=args.blocks,
        )
        estimate = bayes.mc_bayes_risk(prior, reps=args.reps, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(
        {
            "value": estimate.value,
            "standard_error": estimate.standard_error,
            "reps": estimate.reps,
            "seed": estimate.seed,
        }
    )


def _cmd_simulate(args) -> None:
    try:
        config = experiments.load_config(args.config)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"config {args.config!r}: {exc}") from exc
    rows = experiments.run_sweep(config)
    experiments.write_csv(rows, args.out)
    _emit(
        {
            "out": args.out,
            "rows": len(rows),
            "n": config.n,
            "k": config.k,
            "sweep": config.sweep,
            "estimators": [k.value for k in config.estimators],
            "master_seed": config.master_seed,
        }
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snrmm",
        description="Risk analysis and simulations for sparse-mean estimators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_estimator(p):
        p.add_argument(
            "--estimator",
            required=True,
            choices=["soft", "hard", "linear", "softlinear", "zero"],
            help="estimator family",
        )

    def add_tuning(p):
        p.add_argument(
            "--lambda",
            dest="lam",
            type=float,
            required=True,
            help="threshold / shrinkage level (observation units; dimensionless for linear)",
        )
        p.add_argument(
            "--gamma",
            type=float,
            default=0.0,
            help="quadratic shrinkage weight, dimensionless (softlinear only)",
        )

    def add_space(p):
        p.add_argument("--n", type=int, required=True, help="ambient dimension (count)")
        p.add_argument("--k", type=int, required=True, help="sparsity budget (count)")
        p.add_argument(
            "--tau", type=float, required=True, help="per-coordinate signal budget (observation units)"
        )
        p.add_argument(
            "--sigma", type=float, required=True, help="noise level (observation units)"
        )

    p = sub.add_parser("risk", help="one-dimensional risk of a fixed tuning")
    add_estimator(p)
    add_tuning(p)
    p.add_argument("--mu", type=float, required=True, help="signal value (unit-noise scale)")
    p.add_argument(
        "--oracle",
        choices=["quadrature", "mc"],
        default=None,
        help="evaluate by an oracle instead of the closed form",
    )
    p.add_argument("--samples", type=int, default=10**6, help="MC sample count")
    p.add_argument("--seed", type=int, default=0, help="MC seed (64-bit integer)")
    p.set_defaults(func=_cmd_risk)

    p = sub.add_parser("suprisk", help="worst-case risk of a fixed tuning over the space")
    add_estimator(p)
    add_tuning(p)
    add_space(p)
    p.set_defaults(func=_cmd_suprisk)

    p = sub.add_parser("tune", help="minimize worst-case risk over the tuning")
    add_estimator(p)
    add_space(p)
    p.add_argument("--grid-points", type=int, default=512, help="coarse grid size")
    p.add_argument("--refine-tol", type=float, default=1e-8, help="refinement tolerance")
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("minimax", help="regime classification and risk approximations")
    add_space(p)
    p.add_argument(
        "--regime",
        choices=["low", "moderate", "high"],
        default=None,
        help="force a regime instead of classifying",
    )
    p.add_argument(
        "--bounded",
        type=float,
        default=None,
        help="sup-norm multiplier A > 1 for the bounded space",
    )
    p.set_defaults(func=_cmd_minimax)

    p = sub.add_parser("bayes", help="Monte-Carlo Bayes risk of a block spike prior")
    p.add_argument("--m", type=int, required=True, help="block dimension (count)")
    p.add_argument("--mu", type=float, required=True, help="spike location (unit-noise scale)")
    p.add_argument("--blocks", type=int, required=True, help="number of blocks (count)")
    p.add_argument("--reps", type=int, required=True, help="MC repetitions")
    p.add_argument("--seed", type=int, required=True, help="seed (64-bit integer)")
    p.add_argument(
        "--sided",
        choices=["symmetric", "onesided"],
        default="symmetric",
        help="spike prior family",
    )
    p.set_defaults(func=_cmd_bayes)

    p = sub.add_parser("simulate", help="run a sweep config and write the CSV")
    p.add_argument("--config", required=True, help="JSON config path")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # runtime failure
        sys.stderr.write(f"runtime error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
