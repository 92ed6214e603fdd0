"""Exact feasibility of the two-variable rate-split problem.

For fixed splitting ratios and a target sum-rate ``r`` every constraint is a
half-plane in ``(P1, P2)``, so the feasible set is a convex polygon inside the
power box.  A nonempty polygon has a vertex, hence feasibility is decided by
enumerating pairwise line intersections and box corners.

The array helpers work on a stack of ``m`` problems at once (shape ``(m, k)``
coefficient arrays); the scalar API wraps them with ``m == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .model import (
    Channel,
    PowerPair,
    SplitPair,
    SystemParams,
    si_gain_lower,
    si_gain_upper,
    sum_rate_grid,
)

SLACK_TOL = 1e-9
_PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class HalfPlane:
    """The set ``a*P1 + b*P2 >= c``.

    ``a == b == 0`` is allowed; it is then either vacuous (``c <= 0``) or empty.
    """

    a: float
    b: float
    c: float

    def slack(self, p1: float, p2: float) -> float:
        """Constraint slack, scaled so coefficient norms above 1 do not inflate it."""
        scale = max(1.0, float(np.hypot(self.a, self.b)))
        return (self.a * p1 + self.b * p2 - self.c) / scale


@dataclass(frozen=True)
class BetaPair:
    beta1: float
    beta2: float


def beta_from(r: float, eta: float) -> BetaPair:
    """SINR targets for a sum-rate ``r`` split as ``eta`` (2->1) and ``1 - eta`` (1->2)."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    return BetaPair(2.0 ** (eta * r) - 1.0, 2.0 ** ((1.0 - eta) * r) - 1.0)


def constraint_arrays(ch: Channel, sp: SystemParams, splits: SplitPair, beta1, beta2):
    """Coefficients of the four half-planes for each entry of ``beta1``/``beta2``.

    Returns ``(A, B, C)`` each of shape ``(m, 4)`` with columns ordered as
    rate 1->2, rate 2->1, harvest at node 1, harvest at node 2.
    """
    beta1 = np.atleast_1d(np.asarray(beta1, dtype=float))
    beta2 = np.atleast_1d(np.asarray(beta2, dtype=float))
    m = beta1.shape[0]
    r1, r2 = splits.rho1, splits.rho2
    up1 = si_gain_upper(ch.h_ab_hat, ch.eps1)
    up2 = si_gain_upper(ch.h_cd_hat, ch.eps2)
    lo1 = si_gain_lower(ch.h_ab_hat, ch.eps1)
    lo2 = si_gain_lower(ch.h_cd_hat, ch.eps2)
    eh1 = sp.alpha * (1.0 - r1)
    eh2 = sp.alpha * (1.0 - r2)

    A = np.empty((m, 4))
    B = np.empty((m, 4))
    C = np.empty((m, 4))
    # 1 -> 2 carries the (1 - eta) share of the rate
    A[:, 0] = r2 * ch.g_ad
    B[:, 0] = -beta2 * r2 * up2
    C[:, 0] = beta2 * (r2 * sp.sigma_a2_sq + sp.sigma_p2_sq)
    # 2 -> 1 carries the eta share
    A[:, 1] = -beta1 * r1 * up1
    B[:, 1] = r1 * ch.g_cb
    C[:, 1] = beta1 * (r1 * sp.sigma_a1_sq + sp.sigma_p1_sq)
    A[:, 2] = eh1 * lo1
    B[:, 2] = eh1 * ch.g_cb
    C[:, 2] = sp.q_bar_21 - eh1 * sp.sigma_a1_sq
    A[:, 3] = eh2 * ch.g_ad
    B[:, 3] = eh2 * lo2
    C[:, 3] = sp.q_bar_12 - eh2 * sp.sigma_a2_sq
    return A, B, C


def build_constraints(ch: Channel, sp: SystemParams, splits: SplitPair,
                      betas: BetaPair) -> list[HalfPlane]:
    A, B, C = constraint_arrays(ch, sp, splits, betas.beta1, betas.beta2)
    return [HalfPlane(float(a), float(b), float(c)) for a, b, c in zip(A[0], B[0], C[0])]


def _box_lines(p_max: float):
    # P1 >= 0, P1 <= p_max, P2 >= 0, P2 <= p_max
    return (np.array([1.0, -1.0, 0.0, 0.0]),
            np.array([0.0, 0.0, 1.0, -1.0]),
            np.array([0.0, -p_max, 0.0, -p_max]))


_PAIR_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _pairs(k: int):
    """Index pairs over ``k`` constraint lines plus 4 box lines, minus box-box pairs."""
    if k not in _PAIR_CACHE:
        pairs = [(i, j) for i, j in combinations(range(k + 4), 2) if i < k]
        idx = np.array(pairs, dtype=int).reshape(-1, 2)
        _PAIR_CACHE[k] = (idx[:, 0], idx[:, 1])
    return _PAIR_CACHE[k]


def vertex_candidates(A, B, C, p_max: float):
    """Candidate vertices for each stacked problem.

    Returns ``(X, Y, feasible)`` of shape ``(m, n_cand)``.  Candidates are
    the pairwise intersections of constraint and box lines (parallel pairs
    dropped) followed by the four box corners, all clipped into the box.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    m, k = A.shape
    ba, bb, bc = _box_lines(p_max)
    LA = np.concatenate([A, np.broadcast_to(ba, (m, 4))], axis=1)
    LB = np.concatenate([B, np.broadcast_to(bb, (m, 4))], axis=1)
    LC = np.concatenate([C, np.broadcast_to(bc, (m, 4))], axis=1)

    norm = np.hypot(LA, LB)
    safe = np.where(norm > 0, norm, 1.0)
    ua, ub, uc = LA / safe, LB / safe, LC / safe

    I, J = _pairs(k)
    det = ua[:, I] * ub[:, J] - ua[:, J] * ub[:, I]
    ok = (np.abs(det) > _PARALLEL_TOL) & (norm[:, I] > 0) & (norm[:, J] > 0)
    det = np.where(ok, det, 1.0)
    x = (uc[:, I] * ub[:, J] - uc[:, J] * ub[:, I]) / det
    y = (ua[:, I] * uc[:, J] - ua[:, J] * uc[:, I]) / det

    corners_x = np.broadcast_to(np.array([0.0, p_max, 0.0, p_max]), (m, 4))
    corners_y = np.broadcast_to(np.array([0.0, 0.0, p_max, p_max]), (m, 4))
    X = np.clip(np.concatenate([x, corners_x], axis=1), 0.0, p_max)
    Y = np.clip(np.concatenate([y, corners_y], axis=1), 0.0, p_max)
    valid = np.concatenate([ok, np.ones((m, 4), dtype=bool)], axis=1)

    scale = np.maximum(1.0, np.hypot(A, B))
    slack = (A[:, :, None] * X[:, None, :] + B[:, :, None] * Y[:, None, :]
             - C[:, :, None]) / scale[:, :, None]
    feasible = valid & np.all(slack >= -SLACK_TOL, axis=1)
    return X, Y, feasible


def find_witness(constraints: Sequence[HalfPlane], p_max: float) -> Optional[PowerPair]:
    """Some point of the box satisfying every half-plane, or ``None``."""
    if p_max <= 0:
        raise ValueError("p_max must be positive")
    k = len(constraints)
    A = np.array([[h.a for h in constraints]], dtype=float).reshape(1, k)
    B = np.array([[h.b for h in constraints]], dtype=float).reshape(1, k)
    C = np.array([[h.c for h in constraints]], dtype=float).reshape(1, k)
    X, Y, feas = vertex_candidates(A, B, C, p_max)
    hits = np.flatnonzero(feas[0])
    if hits.size == 0:
        return None
    i = hits[0]
    return PowerPair(float(X[0, i]), float(Y[0, i]))


def select_best(ch: Channel, sp: SystemParams, splits: SplitPair, X, Y, feasible):
    """Row-wise sum-rate maximizer among feasible candidates.

    Returns ``(p1, p2, value)`` arrays of shape ``(m,)``; rows without a
    feasible candidate get ``nan``.  Exact ties go to the lexicographically
    smaller ``(P1, P2)``.
    """
    vals = sum_rate_grid(ch, sp, X, Y, splits.rho1, splits.rho2)
    vals = np.where(feasible, vals, -np.inf)
    top = vals.max(axis=1, keepdims=True)
    tie = np.isfinite(top) & (vals == top)
    x_min = np.where(tie, X, np.inf).min(axis=1, keepdims=True)
    tie &= X == x_min
    i = np.argmin(np.where(tie, Y, np.inf), axis=1)
    rows = np.arange(X.shape[0])
    found = np.isfinite(top[:, 0])
    p1 = np.where(found, X[rows, i], np.nan)
    p2 = np.where(found, Y[rows, i], np.nan)
    return p1, p2, np.where(found, top[:, 0], np.nan)


def best_feasible_point(ch: Channel, sp: SystemParams, splits: SplitPair, betas: BetaPair,
                        p_max: float) -> Optional[PowerPair]:
    """Feasible vertex with the largest sum-rate at ``splits``, or ``None``."""
    A, B, C = constraint_arrays(ch, sp, splits, betas.beta1, betas.beta2)
    X, Y, feas = vertex_candidates(A, B, C, p_max)
    p1, p2, _ = select_best(ch, sp, splits, X, Y, feas)
    if np.isnan(p1[0]):
        return None
    return PowerPair(float(p1[0]), float(p2[0]))
