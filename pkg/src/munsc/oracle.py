"""Ground-truth machinery: exact optima and Monte-Carlo checks of the
risk-estimate bounds."""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, comb, floor

import numpy as np

from .errors import ContractError
from .metric import CenterSet, Dataset, truncated_risk
from .params import PROFILES, Profile, phi_alpha, psi_truncation_count
from .select_proc import SelectProcState, make_config, observe
from .solvers import Solver, local_search_solver, solve_exhaustive
from .stream import InstrumentedStream

__all__ = [
    "OptimalSolution",
    "exact_opt",
    "exact_opt_budget_ok",
    "psi_sandwich_frequency",
    "sandwich_report",
]


@dataclass(frozen=True)
class OptimalSolution:
    """A true k-median optimum with its induced clusters."""

    centers: CenterSet
    risk: float
    assignment: tuple[int, ...]  # nearest optimal center id per point


def exact_opt_budget_ok(n: int, k: int) -> bool:
    return comb(n, min(k, n)) <= 1_000_000


def exact_opt(data: Dataset, k: int) -> OptimalSolution:
    """Exhaustive optimum over centers drawn from the dataset itself.

    Deterministic (lexicographically smallest optimal center set); assignment
    ties resolve to the smallest center id.
    """
    ids = np.arange(data.n, dtype=np.int64)
    centers = solve_exhaustive(ids, k, data)
    d = data.pairwise(ids, centers.to_array())
    labels = np.argmin(d, axis=1)
    carr = centers.to_array()
    assignment = tuple(int(carr[p]) for p in labels)
    return OptimalSolution(centers=centers, risk=float(np.sum(d.min(axis=1))), assignment=assignment)


def sandwich_report(n: int, k: int, delta: float, alpha: float, profile: Profile) -> dict:
    """Describe whether the two risk-estimate bounds are non-vacuous here.

    The upper bound compares against a truncated risk over the full dataset
    discarding floor(k * phi) points; the lower bound discards
    floor(5 * (k+1) * phi) points from everything past phase 1. Either bound
    holds trivially once its truncation swallows the whole set, and the
    estimate itself degenerates to zero when its truncation count reaches the
    phase-2 size.
    """
    phi = phi_alpha(k, delta, alpha, profile)
    p1 = ceil(alpha * n)
    drop_psi = psi_truncation_count(k, alpha, phi)
    r_upper = floor(k * phi)
    r_lower = floor(5 * (k + 1) * phi)
    return {
        "phi_alpha": phi,
        "p1_size": p1,
        "p2_size": p1,
        "psi_truncation": drop_psi,
        "psi_degenerate": drop_psi >= p1,
        "upper_truncation": r_upper,
        "upper_vacuous": r_upper >= n,
        "lower_truncation": r_lower,
        "lower_vacuous": r_lower >= n - p1,
    }


def psi_sandwich_frequency(
    data: Dataset,
    k: int,
    delta: float,
    alpha: float,
    trials: int,
    seed: int,
    profile: Profile = PROFILES["desk"],
    solver: Solver | None = None,
) -> tuple[float, float]:
    """Empirical pass rates of the two-sided risk-estimate bounds.

    Each trial draws a fresh permutation, runs one copy through its two
    calculation phases, and checks
      (1/9) * R_drop5(X \\ P1, T_ref)  <=  psi  <=  R_dropK(X, T_ref)
    against full-dataset truncated risks, with drop counts floor(5(k+1)*phi)
    and floor(k*phi). Returns (upper_ok_rate, lower_ok_rate).
    """
    if trials < 1:
        raise ContractError("trials must be positive")
    solver = solver or local_search_solver()
    cfg = make_config(k, data.n, delta, alpha, profile)
    phi = phi_alpha(k, delta, alpha, profile)
    r_upper = floor(k * phi)
    r_lower = floor(5 * (k + 1) * phi)
    all_ids = np.arange(data.n, dtype=np.int64)

    rng = np.random.default_rng(seed)
    upper_ok = 0
    lower_ok = 0
    for _ in range(trials):
        perm = rng.permutation(data.n)
        stream = InstrumentedStream(perm)
        state = SelectProcState(cfg)
        for t in range(cfg.p2_end):
            x = stream.read()
            stream.log_decision(t, observe(state, x, data, solver))
        psi = state.psi
        t_ref = state.t_alpha
        assert psi is not None and t_ref is not None
        rest = np.setdiff1d(all_ids, perm[: cfg.p1_end], assume_unique=True)
        upper_rhs = truncated_risk(all_ids, t_ref, r_upper, data)
        lower_lhs = truncated_risk(rest, t_ref, r_lower, data) / 9.0
        if psi <= upper_rhs * (1.0 + 1e-9):
            upper_ok += 1
        if lower_lhs <= psi * (1.0 + 1e-9) + 1e-12:
            lower_ok += 1
    return upper_ok / trials, lower_ok / trials
