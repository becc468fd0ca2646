"""Closed-form parameter arithmetic for the selection pipeline.

Every derived scalar used by the streaming procedure and its orchestrator
(cluster-size threshold, enlarged solution size, per-center quota, truncation
counts, scale schedule, ratio ceilings) is computed here and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ContractError

__all__ = [
    "Profile",
    "PROFILES",
    "AlphaSchedule",
    "TheoremConstants",
    "phi_alpha",
    "k_plus_size",
    "quota_default",
    "psi_truncation_count",
    "selection_threshold",
    "alpha_schedule",
    "theorem_constants",
    "ratio_ceiling",
]


@dataclass(frozen=True)
class Profile:
    """Constant set controlling the derived thresholds.

    The "paper" preset keeps the full-strength theoretical constants. Those
    are so conservative that at desk scale (n up to ~10^5) every truncation
    swallows its whole window and the risk estimate degenerates to zero. The
    "desk" preset shrinks the two leading constants so the same formulas
    produce non-degenerate thresholds on instances that fit in a test run;
    formula unit tests use "paper", approximation experiments use "desk".
    """

    name: str
    c_phi: float
    c_kplus: float
    c_psi_denom: float = 3.0

    def __post_init__(self) -> None:
        if self.c_phi <= 0 or self.c_kplus <= 0 or self.c_psi_denom <= 0:
            raise ContractError("profile constants must be positive")


PROFILES: dict[str, Profile] = {
    "paper": Profile("paper", 150.0, 38.0, 3.0),
    "desk": Profile("desk", 5.0, 2.0, 3.0),
}


def _check_k_delta(k: int, delta: float) -> None:
    if not isinstance(k, (int,)) or isinstance(k, bool) or k < 1:
        raise ContractError(f"k must be a positive integer, got {k!r}")
    if not (0.0 < delta < 1.0):
        raise ContractError(f"delta must lie in (0,1), got {delta!r}")


def phi_alpha(k: int, delta: float, alpha: float, profile: Profile) -> float:
    """Cluster-size threshold c_phi * ln(32k/delta) / alpha.

    alpha up to 1.0 is accepted; values above 1/6 only make sense in unit
    tests of the formula itself.
    """
    _check_k_delta(k, delta)
    if not (0.0 < alpha <= 1.0):
        raise ContractError(f"alpha must lie in (0,1], got {alpha!r}")
    return profile.c_phi * math.log(32.0 * k / delta) / alpha


def k_plus_size(k: int, delta: float, profile: Profile) -> int:
    """Enlarged solution size k + ceil(c_kplus * ln(32k/delta))."""
    _check_k_delta(k, delta)
    return k + math.ceil(profile.c_kplus * math.log(32.0 * k / delta))


def quota_default(k_plus: int, delta: float) -> int:
    """Per-center selection quota ceil(log2(8 * k_plus / delta)); base-2 log."""
    if k_plus < 1:
        raise ContractError("k_plus must be positive")
    if not (0.0 < delta < 1.0):
        raise ContractError("delta must lie in (0,1)")
    return math.ceil(math.log2(8.0 * k_plus / delta))


def psi_truncation_count(k: int, alpha: float, phi: float) -> int:
    """Number of largest phase-2 distances discarded: floor(2*alpha*(k+1)*phi)."""
    if phi < 0 or alpha <= 0 or k < 1:
        raise ContractError("invalid truncation inputs")
    return int(math.floor(2.0 * alpha * (k + 1) * phi))


def selection_threshold(psi: float, k: int, tau: float) -> float:
    """Distance threshold psi / (k * tau) deciding 'far' selections."""
    if psi < 0:
        raise ContractError("psi must be nonnegative")
    if k < 1 or tau <= 0:
        raise ContractError("k and tau must be positive")
    return psi / (k * tau)


@dataclass(frozen=True)
class AlphaSchedule:
    """Doubling scale schedule: alpha_1 = delta/(4k), final scale in (1/12, 1/6]."""

    alpha_1: float
    doublings: int  # number of doublings I; I+1 scales in total
    alphas: tuple[float, ...]
    delta_prime: float


def alpha_schedule(k: int, delta: float) -> AlphaSchedule:
    """Compute the geometric scale sequence and the per-copy confidence split."""
    _check_k_delta(k, delta)
    if k < 2:
        raise ContractError("the multiscale schedule requires k >= 2")
    alpha_1 = delta / (4.0 * k)
    # Largest I with alpha_1 * 2^I <= 1/6; the 1e-9 guard absorbs float noise
    # when 1/(6*alpha_1) is an exact power of two.
    doublings = max(0, math.floor(math.log2(1.0 / (6.0 * alpha_1)) + 1e-9))
    alphas = tuple(alpha_1 * (2.0**i) for i in range(doublings + 1))
    delta_prime = delta / (doublings + 1)
    return AlphaSchedule(alpha_1, doublings, alphas, delta_prime)


@dataclass(frozen=True)
class TheoremConstants:
    """Risk-bound coefficients implied by a beta-approximate black box."""

    small_cluster_coeff: float  # 36*beta + 20
    large_cluster_coeff: float  # 468*beta + 260
    combined_ceiling: float  # 1 + small + large = 504*beta + 281


def theorem_constants(beta: float) -> TheoremConstants:
    if beta < 1.0:
        raise ContractError("beta must be >= 1")
    small = 36.0 * beta + 20.0
    large = 468.0 * beta + 260.0
    return TheoremConstants(small, large, 1.0 + small + large)


def ratio_ceiling(beta: float) -> float:
    """Hard ceiling 504*beta + 281 asserted on every measured risk ratio."""
    return theorem_constants(beta).combined_ceiling
