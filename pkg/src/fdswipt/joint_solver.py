"""Joint power / splitting-ratio optimization by alternating block updates.

Also hosts an exhaustive grid oracle used to validate the alternating scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import (
    Channel,
    PowerPair,
    SplitPair,
    SystemParams,
    capacity_1to2,
    capacity_2to1,
    harvested_1to2,
    harvested_2to1,
    si_gain_lower,
    si_gain_upper,
)
from .power_solver import PowerSolverSettings, optimize_powers
from .split_solver import InfeasibleSplitError, is_clamped, optimal_rho


@dataclass(frozen=True)
class JointSettings:
    init_rho1: float = 0.5
    init_rho2: float = 0.5
    alt_tol: float = 1e-4
    max_outer_iters: int = 50
    power: PowerSolverSettings = field(default_factory=PowerSolverSettings)

    def __post_init__(self):
        if not (0 < self.init_rho1 < 1 and 0 < self.init_rho2 < 1):
            raise ValueError("initial ratios must lie in (0, 1)")
        if self.alt_tol <= 0:
            raise ValueError("alt_tol must be positive")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be at least 1")


@dataclass(frozen=True)
class Solution:
    powers: Optional[PowerPair]
    splits: Optional[SplitPair]
    eta_opt: float
    r_sum: float
    c_21: float
    c_12: float
    q_21: float
    q_12: float
    outer_iters: int
    converged: bool
    infeasible: bool
    rho_clamped: bool = False
    history: tuple[float, ...] = ()

    @classmethod
    def infeasible_solution(cls, outer_iters: int = 0) -> "Solution":
        nan = float("nan")
        return cls(None, None, nan, nan, nan, nan, nan, nan, outer_iters, False, True)

    @classmethod
    def evaluate(cls, ch: Channel, sp: SystemParams, powers: PowerPair, splits: SplitPair,
                 eta_opt: Optional[float] = None, outer_iters: int = 0, converged: bool = True,
                 history: tuple[float, ...] = ()) -> "Solution":
        c21 = capacity_2to1(ch, sp, powers, splits.rho1)
        c12 = capacity_1to2(ch, sp, powers, splits.rho2)
        if eta_opt is None:
            eta_opt = c21 / (c21 + c12) if c21 + c12 > 0 else 0.0
        return cls(powers, splits, eta_opt, c21 + c12, c21, c12,
                   harvested_2to1(ch, sp, powers, splits.rho1),
                   harvested_1to2(ch, sp, powers, splits.rho2),
                   outer_iters, converged, False,
                   is_clamped(splits.rho1) or is_clamped(splits.rho2), history)

    def constraint_slacks(self, sp: SystemParams) -> dict[str, float]:
        """Slack of every constraint of the joint problem (negative = violated)."""
        p, s = self.powers, self.splits
        return {
            "harvest_node1": self.q_21 - sp.q_bar_21,
            "harvest_node2": self.q_12 - sp.q_bar_12,
            "p1_low": p.p1, "p1_high": sp.p_max - p.p1,
            "p2_low": p.p2, "p2_high": sp.p_max - p.p2,
            "rho1_low": s.rho1, "rho1_high": 1.0 - s.rho1,
            "rho2_low": s.rho2, "rho2_high": 1.0 - s.rho2,
        }


def _split_step(ch, sp, powers) -> SplitPair:
    return SplitPair(optimal_rho(ch, sp, powers, 1), optimal_rho(ch, sp, powers, 2))


def solve(ch: Channel, sp: SystemParams, settings: JointSettings = JointSettings()) -> Solution:
    """Alternate power and splitting-ratio updates until the sum-rate settles.

    Returns the best iterate seen.  If the initial ratios cannot meet the
    harvest thresholds, the ratios are first re-derived at full power and
    the power step retried once.
    """
    splits = SplitPair(settings.init_rho1, settings.init_rho2)
    pr = optimize_powers(ch, sp, splits, settings.power)
    if pr is None:
        try:
            splits = _split_step(ch, sp, PowerPair(sp.p_max, sp.p_max))
        except InfeasibleSplitError:
            return Solution.infeasible_solution()
        pr = optimize_powers(ch, sp, splits, settings.power)
        if pr is None:
            return Solution.infeasible_solution()

    history: list[float] = []
    best = None
    converged = False
    prev = None
    it = 0
    while True:
        it += 1
        powers = pr.powers
        # only reachable through a tolerance-edge power pair
        try:
            splits = _split_step(ch, sp, powers)
        except InfeasibleSplitError:
            break
        current = Solution.evaluate(ch, sp, powers, splits, outer_iters=it)
        history.append(current.r_sum)
        if best is None or current.r_sum > best.r_sum:
            best = current
        if prev is not None and abs(current.r_sum - prev) < settings.alt_tol:
            converged = True
            break
        if it >= settings.max_outer_iters:
            break
        prev = current.r_sum
        pr = optimize_powers(ch, sp, splits, settings.power, incumbent=powers)
        if pr is None:
            break

    if best is None:
        return Solution.infeasible_solution(it)
    return Solution(best.powers, best.splits, best.eta_opt, best.r_sum, best.c_21, best.c_12,
                    best.q_21, best.q_12, it, converged, False, best.rho_clamped,
                    tuple(history))


def solve_fixed_splits(ch: Channel, sp: SystemParams, splits: SplitPair,
                       power_settings: PowerSolverSettings = PowerSolverSettings()) -> Solution:
    """Power-only optimization at given ratios (the fixed-ratio baseline)."""
    pr = optimize_powers(ch, sp, splits, power_settings)
    if pr is None:
        return Solution.infeasible_solution()
    return Solution.evaluate(ch, sp, pr.powers, splits, outer_iters=1)


def _link_terms(ch: Channel, sp: SystemParams):
    up1 = si_gain_upper(ch.h_ab_hat, ch.eps1)
    up2 = si_gain_upper(ch.h_cd_hat, ch.eps2)
    lo1 = si_gain_lower(ch.h_ab_hat, ch.eps1)
    lo2 = si_gain_lower(ch.h_cd_hat, ch.eps2)
    return up1, up2, lo1, lo2


def _grid_search(ch, sp, p1s, p2s, r1s, r2s):
    """Exhaustive maximizer of the sum-rate over the product grid.

    For a fixed power pair the objective and the harvest constraints split
    into a node-1 part in ``rho1`` and a node-2 part in ``rho2``, so the
    four-dimensional argmax is the per-node argmax followed by a 2-D argmax.
    Ties resolve to the lexicographically smallest ``(P1, P2, rho1, rho2)``.
    """
    up1, up2, lo1, lo2 = _link_terms(ch, sp)
    P1 = p1s[:, None, None]
    P2 = p2s[None, :, None]
    R1 = r1s[None, None, :]
    R2 = r2s[None, None, :]

    c21 = np.log2(1.0 + R1 * ch.g_cb * P2
                  / (R1 * up1 * P1 + R1 * sp.sigma_a1_sq + sp.sigma_p1_sq))
    q21 = sp.alpha * (1.0 - R1) * (ch.g_cb * P2 + lo1 * P1 + sp.sigma_a1_sq)
    c21 = np.where(q21 >= sp.q_bar_21, c21, -np.inf)
    c12 = np.log2(1.0 + R2 * ch.g_ad * P1
                  / (R2 * up2 * P2 + R2 * sp.sigma_a2_sq + sp.sigma_p2_sq))
    q12 = sp.alpha * (1.0 - R2) * (ch.g_ad * P1 + lo2 * P2 + sp.sigma_a2_sq)
    c12 = np.where(q12 >= sp.q_bar_12, c12, -np.inf)

    k1 = np.argmax(c21, axis=2)  # first occurrence = smallest rho
    k2 = np.argmax(c12, axis=2)
    best1 = np.take_along_axis(c21, k1[..., None], axis=2)[..., 0]
    best2 = np.take_along_axis(c12, k2[..., None], axis=2)[..., 0]
    total = best1 + best2
    flat = int(np.argmax(total))
    if not np.isfinite(total.flat[flat]):
        return None
    i, j = np.unravel_index(flat, total.shape)
    return i, j, int(k1[i, j]), int(k2[i, j])


def _refined_axis(axis: np.ndarray, idx: int, factor: int = 10) -> np.ndarray:
    lo = axis[max(idx - 1, 0)]
    hi = axis[min(idx + 1, axis.shape[0] - 1)]
    n = factor * (min(idx + 1, axis.shape[0] - 1) - max(idx - 1, 0)) + 1
    return np.linspace(lo, hi, n)


def brute_force_oracle(ch: Channel, sp: SystemParams, grid_n: int = 64,
                       rho_margin: float = 1e-3) -> Solution:
    """Grid-search optimum of the joint problem, independent of the solver path.

    Searches ``grid_n`` points per axis over ``[0, P_max]^2 x [d, 1 - d]^2``
    with ``d = rho_margin``, then repeats at ten times the resolution over the
    neighbouring cells of the winner.
    """
    if grid_n < 8:
        raise ValueError("grid_n must be at least 8")
    ps = np.linspace(0.0, sp.p_max, grid_n)
    rs = np.linspace(rho_margin, 1.0 - rho_margin, grid_n)
    hit = _grid_search(ch, sp, ps, ps, rs, rs)
    if hit is None:
        return Solution.infeasible_solution()
    i, j, k, l = hit
    axes = (_refined_axis(ps, i), _refined_axis(ps, j), _refined_axis(rs, k), _refined_axis(rs, l))
    fine = _grid_search(ch, sp, *axes)
    if fine is None:
        axes = (ps, ps, rs, rs)
    else:
        i, j, k, l = fine
    powers = PowerPair(float(axes[0][i]), float(axes[1][j]))
    splits = SplitPair(float(axes[2][k]), float(axes[3][l]))
    return Solution.evaluate(ch, sp, powers, splits)
