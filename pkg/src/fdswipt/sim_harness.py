"""Monte-Carlo sweeps over flat Rayleigh fading channels.

Each trial draws its channel from its own RNG stream keyed on
``(seed, trial_index)``, so results do not depend on execution order and the
same draws are reused across grid points and schemes (paired comparisons).
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .joint_solver import JointSettings, Solution, solve, solve_fixed_splits
from .model import Channel, SplitPair, SystemParams

SI_MODES = ("cancellation_fraction", "rsi_above_noise")
SCHEMES = ("joint", "fixed_rho")
X_NAMES = ("p_max_db", "rsi_db")
CSV_HEADER = ("x_name", "x_value", "q_bar", "scheme", "mean_sum_rate_bits", "trials",
              "infeasible")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ChannelModel:
    si_mode: str = "cancellation_fraction"
    kappa: float = 0.3
    rsi_db: float = 0.0
    eps_fraction: float = 0.0

    def __post_init__(self):
        if self.si_mode not in SI_MODES:
            raise ValueError(f"si_mode must be one of {SI_MODES}, got {self.si_mode!r}")
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError("kappa must lie in [0, 1]")
        if self.eps_fraction < 0:
            raise ValueError("eps_fraction must be nonnegative")


@dataclass(frozen=True)
class SweepSpec:
    x_name: str
    x_values: tuple[float, ...]
    q_bars: tuple[float, ...] = (0.1, 0.5)
    trials: int = 1000
    seed: int = 0
    schemes: tuple[str, ...] = SCHEMES
    p_max_db: float = 10.0  # fixed budget when sweeping RSI
    fixed_rho: float = 0.5

    def __post_init__(self):
        if self.x_name not in X_NAMES:
            raise ValueError(f"x_name must be one of {X_NAMES}, got {self.x_name!r}")
        if not self.x_values or not self.q_bars or not self.schemes:
            raise ValueError("sweep grids must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown:
            raise ValueError(f"unknown schemes {sorted(unknown)}")


@dataclass(frozen=True)
class SweepRow:
    x_name: str
    x_value: float
    q_bar: float
    scheme: str
    mean_sum_rate: float
    trials: int
    infeasible: int


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _complex_gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal(2 * n) * math.sqrt(0.5)
    return z[0::2] + 1j * z[1::2]


def sample_channel(rng: np.random.Generator, model: ChannelModel,
                   sigma_a_sq: float = 1.0) -> Channel:
    """Draw unit-variance Rayleigh links and residual SI channels.

    The SI draw ``g`` is scaled by ``sqrt(kappa)`` (fraction of SI power left
    after cancellation), or so that ``E|h_hat|^2 = sigma_a_sq * 10^(rsi_db/10)``.
    """
    h_cb, h_ad, g_ab, g_cd = _complex_gaussian(rng, 4)
    if model.si_mode == "cancellation_fraction":
        scale = math.sqrt(model.kappa)
    else:
        scale = math.sqrt(sigma_a_sq * db_to_linear(model.rsi_db))
    h_ab, h_cd = g_ab * scale, g_cd * scale
    root = math.sqrt(model.eps_fraction)
    return Channel(complex(h_cb), complex(h_ad), complex(h_ab), complex(h_cd),
                   root * abs(h_ab), root * abs(h_cd))


def _points(spec: SweepSpec, sp: SystemParams, model: ChannelModel):
    """(x, q_bar, params, channel model) in grid-major, then q_bar order."""
    for x in spec.x_values:
        for q in spec.q_bars:
            if spec.x_name == "p_max_db":
                p_max, m = db_to_linear(x), model
            else:
                p_max, m = db_to_linear(spec.p_max_db), replace(
                    model, si_mode="rsi_above_noise", rsi_db=x)
            yield x, q, replace(sp, p_max=p_max, q_bar_21=q, q_bar_12=q), m


def _run_trial(args) -> list[Solution]:
    spec, sp, model, settings, trial = args
    out = []
    for _, _, params, m in _points(spec, sp, model):
        ch = sample_channel(trial_rng(spec.seed, trial), m, sp.sigma_a1_sq)
        for scheme in spec.schemes:
            if scheme == "joint":
                out.append(solve(ch, params, settings))
            else:
                rho = SplitPair(spec.fixed_rho, spec.fixed_rho)
                out.append(solve_fixed_splits(ch, params, rho, settings.power))
    return out


def run_trials(spec: SweepSpec, sp: SystemParams = SystemParams(),
               model: ChannelModel = ChannelModel(),
               settings: JointSettings = JointSettings(),
               n_jobs: int = 1) -> dict[tuple[float, float, str], list[Solution]]:
    """Per-trial solutions keyed by ``(x_value, q_bar, scheme)``.

    Each list is indexed by trial; entries at the same index share a channel
    draw.  ``n_jobs > 1`` spreads trials over worker processes without
    changing any result.
    """
    jobs = [(spec, sp, model, settings, t) for t in range(spec.trials)]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            per_trial = list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * n_jobs))))
    else:
        per_trial = [_run_trial(j) for j in jobs]

    keys = [(x, q, scheme) for x, q, _, _ in _points(spec, sp, model) for scheme in spec.schemes]
    return {key: [sols[i] for sols in per_trial] for i, key in enumerate(keys)}


def summarize(spec: SweepSpec, results: Mapping[tuple[float, float, str], Sequence[Solution]]
              ) -> list[SweepRow]:
    rows = []
    for (x, q, scheme), sols in results.items():
        rates = [s.r_sum for s in sols if not s.infeasible]
        mean = float(np.mean(rates)) if rates else float("nan")
        rows.append(SweepRow(spec.x_name, x, q, scheme, mean, len(sols), len(sols) - len(rates)))
    return rows


def run_sweep(spec: SweepSpec, sp: SystemParams = SystemParams(),
              model: ChannelModel = ChannelModel(),
              settings: JointSettings = JointSettings(), n_jobs: int = 1) -> list[SweepRow]:
    """Mean sum-rate per grid point, threshold and scheme (feasible trials only)."""
    return summarize(spec, run_trials(spec, sp, model, settings, n_jobs))


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def write_csv(rows: Iterable[SweepRow], path, meta: Optional[Mapping[str, object]] = None):
    """Write sweep rows, preceded by ``# key=value`` lines for ``meta``."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            for key, value in (meta or {}).items():
                fh.write(f"# {key}={value}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for r in rows:
                writer.writerow([r.x_name, _fmt(r.x_value), _fmt(r.q_bar), r.scheme,
                                 _fmt(r.mean_sum_rate), r.trials, r.infeasible])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
