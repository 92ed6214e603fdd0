"""Optimal receive power-splitting ratios for fixed transmit powers.

The two ratios decouple.  Each link's rate increases in its own ratio while
the harvest constraint caps it, so the optimum sits on the harvest boundary.
``optimal_rho_via_lambda`` reaches the same point through the multiplier
route (quadratic stationarity root plus a search over the multiplier) and is
kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    Channel,
    PowerPair,
    SystemParams,
    received_power_lower,
    si_gain_upper,
)

RHO_CLAMP = 1e-9


class InfeasibleSplitError(ValueError):
    """No ratio in (0, 1) harvests the required power."""


@dataclass(frozen=True)
class QuadCoeffs:
    a: float
    b: float
    c: float


def _node_terms(ch: Channel, sp: SystemParams, powers: PowerPair, node: int):
    """(desired gain, other power, SI upper gain, own power, sigma_a^2, sigma_p^2, q_bar)."""
    if node == 1:
        return (ch.g_cb, powers.p2, si_gain_upper(ch.h_ab_hat, ch.eps1), powers.p1,
                sp.sigma_a1_sq, sp.sigma_p1_sq, sp.q_bar_21)
    if node == 2:
        return (ch.g_ad, powers.p1, si_gain_upper(ch.h_cd_hat, ch.eps2), powers.p2,
                sp.sigma_a2_sq, sp.sigma_p2_sq, sp.q_bar_12)
    raise ValueError(f"node must be 1 or 2, got {node!r}")


def quad_coeffs(ch: Channel, sp: SystemParams, powers: PowerPair, lam: float,
                node: int) -> QuadCoeffs:
    """Coefficients of the stationarity quadratic ``a*rho^2 + b*rho + c = 0``.

    ``D`` uses the upper SI gain, as does ``a``; ``b = 2*a*sigma_p^2``.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    g, p_other, up, p_own, s_a, s_p, _ = _node_terms(ch, sp, powers, node)
    a = (up * p_own + s_a) ** 2
    d = g * p_other + up * p_own + s_a
    b = 2.0 * a * s_p
    c = s_p ** 2 - p_other * g * s_p / (lam * d)
    return QuadCoeffs(a, b, c)


def rho_from_lambda(coeffs: QuadCoeffs) -> float:
    """The nonnegative-branch root ``(-b + sqrt(b^2 - 4ac)) / 2a``."""
    disc = coeffs.b ** 2 - 4.0 * coeffs.a * coeffs.c
    if disc < 0:
        raise ValueError(f"negative discriminant {disc!r}: lambda outside admissible range")
    return (-coeffs.b + math.sqrt(disc)) / (2.0 * coeffs.a)


def lambda_interval(ch: Channel, sp: SystemParams, powers: PowerPair,
                    node: int) -> tuple[float, float]:
    g, p_other, up, p_own, s_a, s_p, _ = _node_terms(ch, sp, powers, node)
    d = g * p_other + up * p_own + s_a
    return 0.0, p_other * g / (s_p * d)


def _clamp(rho: float) -> float:
    return min(max(rho, RHO_CLAMP), 1.0 - RHO_CLAMP)


def _harvest_budget(ch, sp, powers, node):
    r_lo = received_power_lower(ch, sp, powers, node)
    q_bar = sp.q_bar_21 if node == 1 else sp.q_bar_12
    if q_bar >= sp.alpha * r_lo:
        raise InfeasibleSplitError(
            f"node {node}: threshold {q_bar:g} >= harvestable power {sp.alpha * r_lo:g}")
    return sp.alpha * r_lo, q_bar


def optimal_rho(ch: Channel, sp: SystemParams, powers: PowerPair, node: int) -> float:
    """Largest ratio meeting the harvest threshold: ``1 - q_bar / (alpha * R_lo)``.

    Clamped into ``[1e-9, 1 - 1e-9]``; raises :class:`InfeasibleSplitError`
    when the threshold is out of reach.
    """
    harvestable, q_bar = _harvest_budget(ch, sp, powers, node)
    return _clamp(1.0 - q_bar / harvestable)


def is_clamped(rho: float) -> bool:
    return rho <= RHO_CLAMP or rho >= 1.0 - RHO_CLAMP


def optimal_rho_via_lambda(ch: Channel, sp: SystemParams, powers: PowerPair, node: int,
                           tol: float = 1e-12, max_steps: int = 200) -> float:
    """Same optimum as :func:`optimal_rho`, found by bisection on the multiplier.

    ``rho(lambda)`` from the quadratic is continuous on ``(0, hi]`` with
    ``rho(hi) = 0``; the search drives the harvest residual
    ``(1 - rho) * alpha * R_lo - q_bar`` to zero.  Monotonicity direction is
    read off the endpoints instead of assumed.
    """
    harvestable, q_bar = _harvest_budget(ch, sp, powers, node)
    _, hi = lambda_interval(ch, sp, powers, node)
    if not hi > 0:
        raise ValueError(f"node {node}: degenerate multiplier interval (no desired signal)")

    def residual(lam):
        rho = rho_from_lambda(quad_coeffs(ch, sp, powers, lam, node))
        return (1.0 - rho) * harvestable - q_bar, rho

    # rho -> infinity as lambda -> 0, so shrink the left end until the residual flips sign
    f_hi, rho = residual(hi)
    lo = hi
    for _ in range(max_steps):
        lo *= 0.5
        f_lo, _ = residual(lo)
        if (f_lo > 0) != (f_hi > 0):
            break
    else:
        raise RuntimeError("could not bracket the harvest boundary")

    a, b = lo, hi
    f_a = f_lo
    for _ in range(max_steps):
        mid = 0.5 * (a + b)
        f_mid, rho = residual(mid)
        if abs(f_mid) <= tol * max(1.0, harvestable) or b - a <= 1e-300:
            return _clamp(rho)
        if (f_mid > 0) == (f_a > 0):
            a, f_a = mid, f_mid
        else:
            b = mid
    raise RuntimeError(f"multiplier bisection did not converge in {max_steps} steps")
