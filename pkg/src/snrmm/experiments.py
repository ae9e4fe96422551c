"""Deterministic simulation sweeps: signal generation, grid-search tuning,
scaled MSE with t confidence intervals, CSV emission.

Every random stream is derived from (master_seed, sweep index, rep index), so
results are bitwise reproducible regardless of worker count, and noise
replicates are shared across estimators within a sweep cell to sharpen
ordering comparisons.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .estimators import EstimatorKind, Tuning, apply, hard_threshold, soft_threshold

_SEED_MASK = (1 << 64) - 1

CSV_HEADER = (
    "estimator,n,k,tau,sigma,mu,sweep_value,mse_scaled,ci_low,ci_high,"
    "lambda_opt,gamma_opt,reps,seed"
)

POWER_RULES = {
    "pow(2/3)": 2.0 / 3.0,
    "pow(3/4)": 3.0 / 4.0,
    "pow(1/2)": 1.0 / 2.0,
}

_ESTIMATOR_NAMES = {
    "soft": EstimatorKind.SOFT,
    "hard": EstimatorKind.HARD,
    "linear": EstimatorKind.LINEAR,
    "softlinear": EstimatorKind.SOFT_LINEAR,
    "soft-linear": EstimatorKind.SOFT_LINEAR,
    "zero": EstimatorKind.ZERO,
}


def parse_estimator(name: str) -> EstimatorKind:
    try:
        return _ESTIMATOR_NAMES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown estimator {name!r}") from None


@dataclass(frozen=True)
class SimConfig:
    n: int
    sparsity_rule: str | int  # "pow(2/3)" | "pow(3/4)" | "pow(1/2)" | explicit k
    tau: float
    sweep: str  # "sigma" | "mu"
    sweep_grid: Tuple[float, ...]
    reps: int
    master_seed: int
    estimators: Tuple[EstimatorKind, ...]
    tuning_grid_size: int = 200
    signal_value: Optional[float] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.sweep not in ("sigma", "mu"):
            raise ValueError(f"sweep must be 'sigma' or 'mu', got {self.sweep!r}")
        grid = tuple(float(v) for v in self.sweep_grid)
        if not grid:
            raise ValueError("sweep_grid must be nonempty")
        if any(v <= 0 for v in grid):
            raise ValueError("sweep_grid values must be positive")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep_grid must be strictly increasing")
        object.__setattr__(self, "sweep_grid", grid)
        if self.reps < 2:
            raise ValueError("reps must be at least 2 (confidence intervals)")
        if not self.estimators:
            raise ValueError("estimators list must be nonempty")
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if self.tuning_grid_size < 2:
            raise ValueError("tuning_grid_size must be at least 2")
        self.k  # validates the sparsity rule

    @property
    def k(self) -> int:
        if isinstance(self.sparsity_rule, int):
            k = self.sparsity_rule
        elif isinstance(self.sparsity_rule, str) and self.sparsity_rule in POWER_RULES:
            k = int(math.floor(self.n ** POWER_RULES[self.sparsity_rule]))
        else:
            raise ValueError(
                f"sparsity_rule must be an explicit k or one of {sorted(POWER_RULES)}, "
                f"got {self.sparsity_rule!r}"
            )
        if not 1 <= k <= self.n:
            raise ValueError(f"sparsity k={k} outside [1, n={self.n}]")
        return k

    @property
    def magnitude(self) -> float:
        return self.tau if self.signal_value is None else self.signal_value


_CONFIG_KEYS = {
    "n",
    "sparsity_rule",
    "tau",
    "sweep",
    "sweep_grid",
    "reps",
    "master_seed",
    "estimators",
    "tuning_grid_size",
    "signal_value",
}


def load_config(path: str) -> SimConfig:
    """Read a SimConfig from JSON; unknown keys are rejected."""
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("config must be a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    missing = _CONFIG_KEYS - {"tuning_grid_size", "signal_value"} - set(raw)
    if missing:
        raise ValueError(f"missing config keys: {sorted(missing)}")
    kwargs = dict(raw)
    kwargs["estimators"] = tuple(parse_estimator(e) for e in raw["estimators"])
    kwargs["sweep_grid"] = tuple(float(v) for v in raw["sweep_grid"])
    return SimConfig(**kwargs)


@dataclass(frozen=True)
class SimResult:
    estimator: EstimatorKind
    sweep_value: float
    mse_scaled: float
    ci_low: float
    ci_high: float
    lambda_opt: float
    gamma_opt: float
    reps: int
    n: int
    k: int
    tau: float
    sigma: float
    mu: float
    seed: int


def gen_signal(n: int, k: int, value: float, seed: int) -> np.ndarray:
    """Exactly k coordinates equal to value at uniformly random positions."""
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    rng = np.random.default_rng(int(seed) & _SEED_MASK)
    theta = np.zeros(n)
    support = rng.choice(n, size=k, replace=False)
    theta[support] = value
    return theta


def _cell_replicates(config: SimConfig, sweep_index: int, sigma: float):
    """(thetas, ys) arrays of shape (reps, n), derived from the master seed."""
    n, k = config.n, config.k
    value = config.magnitude
    thetas = np.empty((config.reps, n))
    ys = np.empty((config.reps, n))
    master = int(config.master_seed) & _SEED_MASK
    for r in range(config.reps):
        ss = np.random.SeedSequence([master, sweep_index, r])
        sig_ss, noise_ss = ss.spawn(2)
        sig_seed = int(sig_ss.generate_state(1, np.uint64)[0])
        thetas[r] = gen_signal(n, k, value, sig_seed)
        z = np.random.default_rng(noise_ss).standard_normal(n)
        ys[r] = thetas[r] + sigma * z
    return thetas, ys


def _threshold_grid(config: SimConfig, sigma: float, points: int) -> np.ndarray:
    """Log-spaced unit-noise thresholds bracketing every recommended tuning."""
    eps = config.k / config.n
    nu = math.sqrt(2.0 * math.log(1.0 / eps)) if eps < 1 else 0.0
    mu_t = config.magnitude / sigma
    top = max(3.0 * (mu_t + nu), 1e-2)
    return np.geomspace(1e-3, top, points)


def _per_rep_mse(config: SimConfig, kind: EstimatorKind, sigma: float,
                 thetas: np.ndarray, ys: np.ndarray):
    """Scaled per-rep MSE for every tuning on the kind's grid.

    Returns (tunings, mse) with mse of shape (len(tunings), reps).
    """
    norm_sq = np.sum(thetas * thetas, axis=1)  # = k * magnitude^2 per rep
    if kind is EstimatorKind.ZERO:
        mse = (np.sum(thetas * thetas, axis=1) / norm_sq)[None, :]
        return [Tuning(0.0, 0.0)], mse

    if kind in (EstimatorKind.SOFT, EstimatorKind.HARD):
        lts = _threshold_grid(config, sigma, config.tuning_grid_size)
        lams = sigma * lts
        fn = soft_threshold if kind is EstimatorKind.SOFT else hard_threshold
        est = fn(ys[None, :, :], lams[:, None, None])
        d = est - thetas[None, :, :]
        mse = np.sum(d * d, axis=2) / norm_sq[None, :]
        return [Tuning(l, 0.0) for l in lams], mse

    if kind is EstimatorKind.LINEAR:
        lams = np.geomspace(1e-4, 1e6, config.tuning_grid_size)
        y_sq = np.sum(ys * ys, axis=1)
        y_dot = np.sum(ys * thetas, axis=1)
        w = 1.0 / (1.0 + lams)
        mse = (
            w[:, None] ** 2 * y_sq[None, :]
            - 2.0 * w[:, None] * y_dot[None, :]
            + norm_sq[None, :]
        ) / norm_sq[None, :]
        return [Tuning(l, 0.0) for l in lams], mse

    if kind is EstimatorKind.SOFT_LINEAR:
        lts = _threshold_grid(config, sigma, 60)
        lams = sigma * lts
        gammas = np.concatenate(([0.0], np.geomspace(1e-3, 1e9, 59)))
        w = 1.0 / (1.0 + gammas)
        tunings = []
        blocks = []
        for lam in lams:
            s = soft_threshold(ys, lam)
            s_sq = np.sum(s * s, axis=1)
            s_dot = np.sum(s * thetas, axis=1)
            mse_g = (
                w[:, None] ** 2 * s_sq[None, :]
                - 2.0 * w[:, None] * s_dot[None, :]
                + norm_sq[None, :]
            ) / norm_sq[None, :]
            blocks.append(mse_g)
            tunings.extend(Tuning(lam, g) for g in gammas)
        return tunings, np.concatenate(blocks, axis=0)

    raise ValueError(f"unknown estimator kind {kind!r}")  # pragma: no cover


def evaluate_cell_tuning(config: SimConfig, sweep_index: int, kind: EstimatorKind,
                         tuning: Tuning) -> np.ndarray:
    """Per-rep scaled MSE of one fixed tuning on a cell's shared replicates.

    Exposes the exact replicates the sweep uses, for dominance and oracle
    cross-checks.
    """
    sigma, _ = _cell_sigma_mu(config, sweep_index)
    thetas, ys = _cell_replicates(config, sweep_index, sigma)
    est = apply(kind, tuning, ys)
    d = est - thetas
    return np.sum(d * d, axis=1) / np.sum(thetas * thetas, axis=1)


def _cell_sigma_mu(config: SimConfig, sweep_index: int) -> Tuple[float, float]:
    v = config.sweep_grid[sweep_index]
    if config.sweep == "sigma":
        return v, config.tau / v
    return config.tau / v, v


def _simulate_cell(config: SimConfig, sweep_index: int) -> List[SimResult]:
    sigma, mu = _cell_sigma_mu(config, sweep_index)
    thetas, ys = _cell_replicates(config, sweep_index, sigma)
    v = config.sweep_grid[sweep_index]
    tquant = float(stats.t.ppf(0.975, config.reps - 1))
    out = []
    for kind in config.estimators:
        try:
            tunings, mse = _per_rep_mse(config, kind, sigma, thetas, ys)
            means = np.mean(mse, axis=1)
            best = int(np.argmin(means))
            per_rep = mse[best]
            mean = float(means[best])
            se = float(np.std(per_rep, ddof=1) / math.sqrt(config.reps))
            ci_low, ci_high = mean - tquant * se, mean + tquant * se
            lam_opt, gamma_opt = tunings[best].lam, tunings[best].gamma
        except FloatingPointError:  # poison only this row
            mean = ci_low = ci_high = lam_opt = gamma_opt = float("nan")
        out.append(
            SimResult(
                estimator=kind,
                sweep_value=v,
                mse_scaled=mean,
                ci_low=ci_low,
                ci_high=ci_high,
                lambda_opt=lam_opt,
                gamma_opt=gamma_opt,
                reps=config.reps,
                n=config.n,
                k=config.k,
                tau=config.tau,
                sigma=sigma,
                mu=mu,
                seed=config.master_seed,
            )
        )
    return out


def worker_count() -> int:
    """Worker cap from SNRMM_THREADS; results never depend on it."""
    raw = os.environ.get("SNRMM_THREADS", "1")
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"SNRMM_THREADS must be a positive integer, got {raw!r}")
    if count < 1:
        raise ValueError(f"SNRMM_THREADS must be a positive integer, got {raw!r}")
    return count


def run_sweep(config: SimConfig) -> List[SimResult]:
    """Simulate every (estimator, sweep value) cell.

    Cells are independent tasks; rows come back ordered by the config's
    estimator order, then by sweep value.
    """
    indices = range(len(config.sweep_grid))
    workers = min(worker_count(), len(config.sweep_grid))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(lambda s: _simulate_cell(config, s), indices))
    else:
        cells = [_simulate_cell(config, s) for s in indices]
    order = {kind: i for i, kind in enumerate(config.estimators)}
    rows = [row for cell in cells for row in cell]
    rows.sort(key=lambda r: (order[r.estimator], r.sweep_value))
    return rows


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(results: Sequence[SimResult], path: str) -> None:
    """Write the sweep rows with deterministic 17-significant-digit formatting."""
    if not results:
        raise ValueError("no results to write")
    lines = [CSV_HEADER]
    for r in results:
        lines.append(
            ",".join(
                [
                    r.estimator.value,
                    str(r.n),
                    str(r.k),
                    _fmt(r.tau),
                    _fmt(r.sigma),
                    _fmt(r.mu),
                    _fmt(r.sweep_value),
                    _fmt(r.mse_scaled),
                    _fmt(r.ci_low),
                    _fmt(r.ci_high),
                    _fmt(r.lambda_opt),
                    _fmt(r.gamma_opt),
                    str(r.reps),
                    str(r.seed),
                ]
            )
        )
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write results to {path!r}: {exc}") from exc


def read_csv(path: str) -> List[SimResult]:
    """Parse a sweep CSV back into rows (inverse of write_csv)."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header in {path!r}")
    out = []
    for ln in lines[1:]:
        f = ln.split(",")
        out.append(
            SimResult(
                estimator=parse_estimator(f[0]),
                n=int(f[1]),
                k=int(f[2]),
                tau=float(f[3]),
                sigma=float(f[4]),
                mu=float(f[5]),
                sweep_value=float(f[6]),
                mse_scaled=float(f[7]),
                ci_low=float(f[8]),
                ci_high=float(f[9]),
                lambda_opt=float(f[10]),
                gamma_opt=float(f[11]),
                reps=int(f[12]),
                seed=int(f[13]),
            )
        )
    return out
