"""Domain types and closed-form rate / harvested-power expressions.

All powers are linear with the antenna noise as the 0 dB reference.
Node 1 transmits on antenna ``a`` and receives on ``b``; node 2 transmits on
``c`` and receives on ``d``.  ``h_cb`` is therefore the 2 -> 1 link and
``h_ad`` the 1 -> 2 link, while ``h_ab_hat`` / ``h_cd_hat`` are the estimated
self-interference (SI) channels at node 1 / node 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class Channel:
    h_cb: complex
    h_ad: complex
    h_ab_hat: complex = 0j
    h_cd_hat: complex = 0j
    eps1: float = 0.0
    eps2: float = 0.0

    def __post_init__(self):
        if self.eps1 < 0 or self.eps2 < 0:
            raise ValueError("CSI error radii must be nonnegative")
        for name in ("h_cb", "h_ad", "h_ab_hat", "h_cd_hat", "eps1", "eps2"):
            if not cmath.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")

    @classmethod
    def from_power_gains(cls, g_cb, g_ad, g_ab=0.0, g_cd=0.0, eps1=0.0, eps2=0.0):
        """Build a channel from squared magnitudes (phases are irrelevant)."""
        return cls(complex(math.sqrt(g_cb)), complex(math.sqrt(g_ad)),
                   complex(math.sqrt(g_ab)), complex(math.sqrt(g_cd)), eps1, eps2)

    @property
    def g_cb(self) -> float:
        return abs(self.h_cb) ** 2

    @property
    def g_ad(self) -> float:
        return abs(self.h_ad) ** 2

    def without_si(self) -> "Channel":
        return replace(self, h_ab_hat=0j, h_cd_hat=0j, eps1=0.0, eps2=0.0)


@dataclass(frozen=True)
class SystemParams:
    sigma_a1_sq: float = 1.0
    sigma_a2_sq: float = 1.0
    sigma_p1_sq: float = 0.1
    sigma_p2_sq: float = 0.1
    alpha: float = 1.0
    p_max: float = 10.0
    q_bar_21: float = 0.5
    q_bar_12: float = 0.5

    def __post_init__(self):
        if min(self.sigma_a1_sq, self.sigma_a2_sq, self.sigma_p1_sq, self.sigma_p2_sq) <= 0:
            raise ValueError("noise variances must be positive")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if self.p_max <= 0:
            raise ValueError("p_max must be positive")
        if self.q_bar_21 < 0 or self.q_bar_12 < 0:
            raise ValueError("harvest thresholds must be nonnegative")


@dataclass(frozen=True)
class PowerPair:
    p1: float
    p2: float

    def __post_init__(self):
        if self.p1 < 0 or self.p2 < 0:
            raise ValueError("transmit powers must be nonnegative")

    def within(self, p_max: float, tol: float = 1e-9) -> bool:
        return -tol <= self.p1 <= p_max + tol and -tol <= self.p2 <= p_max + tol


@dataclass(frozen=True)
class SplitPair:
    rho1: float
    rho2: float

    def __post_init__(self):
        if not (0 < self.rho1 < 1 and 0 < self.rho2 < 1):
            raise ValueError("power-splitting ratios must lie in (0, 1)")


def si_gain_upper(h_hat: complex, eps: float) -> float:
    """Worst-case (largest) SI power gain, ``|h_hat|^2 + eps^2``."""
    return abs(h_hat) ** 2 + eps ** 2


def si_gain_lower(h_hat: complex, eps: float) -> float:
    """Smallest SI power gain ``|h_hat|^2 - eps^2``, clamped at zero."""
    return max(abs(h_hat) ** 2 - eps ** 2, 0.0)


def _capacity(g_des, p_other, g_si, p_own, sigma_a_sq, sigma_p_sq, rho):
    sinr = rho * g_des * p_other / (rho * g_si * p_own + rho * sigma_a_sq + sigma_p_sq)
    return np.log2(1.0 + sinr)


def _received_power(g_des, p_other, g_si, p_own, sigma_a_sq):
    return g_des * p_other + g_si * p_own + sigma_a_sq


def capacity_2to1(ch: Channel, sp: SystemParams, pw: PowerPair, rho1: float) -> float:
    """Worst-case rate of the 2 -> 1 link in bits/s/Hz."""
    return float(_capacity(ch.g_cb, pw.p2, si_gain_upper(ch.h_ab_hat, ch.eps1), pw.p1,
                           sp.sigma_a1_sq, sp.sigma_p1_sq, rho1))


def capacity_1to2(ch: Channel, sp: SystemParams, pw: PowerPair, rho2: float) -> float:
    """Worst-case rate of the 1 -> 2 link in bits/s/Hz."""
    return float(_capacity(ch.g_ad, pw.p1, si_gain_upper(ch.h_cd_hat, ch.eps2), pw.p2,
                           sp.sigma_a2_sq, sp.sigma_p2_sq, rho2))


def sum_rate(ch: Channel, sp: SystemParams, pw: PowerPair, splits: SplitPair) -> float:
    return capacity_2to1(ch, sp, pw, splits.rho1) + capacity_1to2(ch, sp, pw, splits.rho2)


def sum_rate_grid(ch: Channel, sp: SystemParams, p1, p2, rho1, rho2):
    """Broadcasting version of :func:`sum_rate` over array-valued inputs."""
    c21 = _capacity(ch.g_cb, p2, si_gain_upper(ch.h_ab_hat, ch.eps1), p1,
                    sp.sigma_a1_sq, sp.sigma_p1_sq, rho1)
    c12 = _capacity(ch.g_ad, p1, si_gain_upper(ch.h_cd_hat, ch.eps2), p2,
                    sp.sigma_a2_sq, sp.sigma_p2_sq, rho2)
    return c21 + c12


def received_power_lower(ch: Channel, sp: SystemParams, pw: PowerPair, node: int) -> float:
    """Worst-case total RF power at the receive antenna of ``node`` (before splitting)."""
    if node == 1:
        return _received_power(ch.g_cb, pw.p2, si_gain_lower(ch.h_ab_hat, ch.eps1), pw.p1,
                               sp.sigma_a1_sq)
    if node == 2:
        return _received_power(ch.g_ad, pw.p1, si_gain_lower(ch.h_cd_hat, ch.eps2), pw.p2,
                               sp.sigma_a2_sq)
    raise ValueError(f"node must be 1 or 2, got {node!r}")


def harvested_2to1(ch: Channel, sp: SystemParams, pw: PowerPair, rho1: float) -> float:
    """Minimum power harvested at node 1 over the SI uncertainty set."""
    return sp.alpha * (1.0 - rho1) * received_power_lower(ch, sp, pw, 1)


def harvested_1to2(ch: Channel, sp: SystemParams, pw: PowerPair, rho2: float) -> float:
    """Minimum power harvested at node 2 over the SI uncertainty set."""
    return sp.alpha * (1.0 - rho2) * received_power_lower(ch, sp, pw, 2)


def zero_rsi_sum_rate(ch: Channel, sp: SystemParams, splits: SplitPair) -> float:
    """Sum-rate with no self-interference and both nodes at full power.

    Upper-bounds the sum-rate of every feasible power pair at these splits.
    """
    full = PowerPair(sp.p_max, sp.p_max)
    return sum_rate(ch.without_si(), sp, full, splits)
