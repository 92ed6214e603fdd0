"""Transmit-power optimization for fixed splitting ratios.

The sum-rate is maximized through a rate split: for each share ``eta`` of the
target rate ``r`` assigned to the 2 -> 1 link, the largest achievable ``r`` is
found by bisection, each step being an exact two-variable feasibility test.
The best ``eta`` on a uniform grid wins.

All ``eta`` values are bisected in lockstep.  Every bracket starts as
``[0, r_max]`` and halves each step, so the step count is shared and each row
follows exactly the same path it would follow alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .feasible_region import SLACK_TOL, constraint_arrays, select_best, vertex_candidates
from .model import (
    Channel,
    PowerPair,
    SplitPair,
    SystemParams,
    capacity_1to2,
    capacity_2to1,
    harvested_1to2,
    harvested_2to1,
    sum_rate,
    zero_rsi_sum_rate,
)


@dataclass(frozen=True)
class PowerSolverSettings:
    delta_eta: float = 0.05
    bisect_tol: float = 1e-4
    include_incumbent_eta: bool = True

    def __post_init__(self):
        if not 0 < self.delta_eta <= 1:
            raise ValueError("delta_eta must lie in (0, 1]")
        if self.bisect_tol <= 0:
            raise ValueError("bisect_tol must be positive")


@dataclass(frozen=True)
class PowerResult:
    r_opt: float
    eta_opt: float
    powers: PowerPair
    iterations: int


def eta_grid(delta_eta: float) -> np.ndarray:
    """``0, delta, 2*delta, ...`` up to and including 1."""
    n = int(np.floor(1.0 / delta_eta + 1e-9))
    grid = np.arange(n + 1) * delta_eta
    grid = grid[grid < 1.0 - 1e-12]
    return np.append(grid, 1.0)


def _bisect(ch: Channel, sp: SystemParams, splits: SplitPair, etas: np.ndarray, tol: float):
    """Largest feasible ``r`` per ``eta`` (to within ``tol``), or ``None`` if ``r = 0`` fails.

    Also returns, per row, the sum-rate maximizer among all feasible vertices
    met along the way (the ``r = 0`` polygon included), as ``(p1, p2, value)``.
    """
    m = etas.shape[0]
    zeros = np.zeros(1)
    X, Y, feas = vertex_candidates(*constraint_arrays(ch, sp, splits, zeros, zeros), sp.p_max)
    if not feas.any():
        return None
    p1, p2, val = (np.repeat(v, m) for v in select_best(ch, sp, splits, X, Y, feas))

    r_max = zero_rsi_sum_rate(ch, sp, splits)
    lo = np.zeros(m)
    hi = np.full(m, r_max)
    width = r_max
    steps = 0
    while width >= tol:
        mid = 0.5 * (lo + hi)
        b1 = np.exp2(etas * mid) - 1.0
        b2 = np.exp2((1.0 - etas) * mid) - 1.0
        X, Y, feas = vertex_candidates(*constraint_arrays(ch, sp, splits, b1, b2), sp.p_max)
        ok = feas.any(axis=1)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
        q1, q2, qv = select_best(ch, sp, splits, X, Y, feas)
        better = ok & (qv > val)
        p1 = np.where(better, q1, p1)
        p2 = np.where(better, q2, p2)
        val = np.where(better, qv, val)
        width *= 0.5
        steps += 1
    return lo, steps, (p1, p2, val)


def solve_for_eta(ch: Channel, sp: SystemParams, splits: SplitPair, eta: float,
                  settings: PowerSolverSettings = PowerSolverSettings()
                  ) -> Optional[tuple[float, PowerPair]]:
    """Bisection on ``r`` for a single rate split.

    Returns the certified rate ``r`` and the best feasible power pair at it,
    or ``None`` when the harvest constraints cannot be met at all.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    etas = np.array([float(eta)])
    out = _bisect(ch, sp, splits, etas, settings.bisect_tol)
    if out is None:
        return None
    r_low, _, (p1, p2, _) = out
    return float(r_low[0]), PowerPair(float(p1[0]), float(p2[0]))


def _harvest_ok(ch, sp, pw, splits) -> bool:
    return (harvested_2to1(ch, sp, pw, splits.rho1) - sp.q_bar_21 >= -SLACK_TOL
            and harvested_1to2(ch, sp, pw, splits.rho2) - sp.q_bar_12 >= -SLACK_TOL)


def _rate_split(ch, sp, pw, splits) -> float:
    c21 = capacity_2to1(ch, sp, pw, splits.rho1)
    c12 = capacity_1to2(ch, sp, pw, splits.rho2)
    return c21 / (c21 + c12) if c21 + c12 > 0 else 0.0


def optimize_powers(ch: Channel, sp: SystemParams, splits: SplitPair,
                    settings: PowerSolverSettings = PowerSolverSettings(),
                    incumbent: Optional[PowerPair] = None) -> Optional[PowerResult]:
    """Best transmit powers over the ``eta`` grid for fixed ``splits``.

    The returned pair is the sum-rate maximizer among all feasible vertices
    visited by the bisections (ties toward smaller ``eta``); ``r_opt`` is the
    largest certified rate and ``eta_opt`` the rate split the returned pair
    actually realizes.  With ``include_incumbent_eta``, an ``incumbent``
    power pair adds its own rate split to the scan and is kept if nothing
    beats it, which makes the alternating outer loop monotone.

    Returns ``None`` when the harvest thresholds are unsatisfiable.
    """
    etas = eta_grid(settings.delta_eta)
    use_inc = (settings.include_incumbent_eta and incumbent is not None
               and _harvest_ok(ch, sp, incumbent, splits))
    if use_inc:
        inc_val = sum_rate(ch, sp, incumbent, splits)
        etas = np.append(etas, _rate_split(ch, sp, incumbent, splits))

    out = _bisect(ch, sp, splits, etas, settings.bisect_tol)
    if out is None:
        return None
    r_low, steps, (p1, p2, vals) = out

    # lexsort: last key is primary -> highest value, then smallest eta
    i = int(np.lexsort((etas, -vals))[0])
    powers = PowerPair(float(p1[i]), float(p2[i]))
    if use_inc and vals[i] < inc_val:
        powers = incumbent
    return PowerResult(float(r_low.max()), _rate_split(ch, sp, powers, splits), powers, steps)
