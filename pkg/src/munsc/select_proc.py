"""Three-phase streaming center selection as an incremental state machine.

One state consumes one stream point per `observe` call and decides about it
before the next point becomes visible. Phase 1 buffers points and hands them
to the offline black box, producing the reference clustering. Phase 2 records
one distance per point and condenses them into the outlier-truncated risk
estimate psi. Phase 3 selects: a point is taken when it is far from its
nearest reference center, when that center is still under its observation
quota, or when nothing close to that center has been selected yet. Selected
points are never revoked.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import ContractError
from .metric import CenterSet, Dataset
from .params import (
    PROFILES,
    Profile,
    k_plus_size,
    phi_alpha,
    psi_truncation_count,
    quota_default,
    selection_threshold,
)
from .solvers import Solver

__all__ = [
    "DerivedParams",
    "SelectProcConfig",
    "SelectProcState",
    "SelectProcReport",
    "Decision",
    "derive_parameters",
    "make_config",
    "observe",
    "finish",
]

_RANGE_TOL = 1e-9


@dataclass(frozen=True)
class DerivedParams:
    """Scalars derived from (k, delta, alpha) under a constants profile."""

    phi_alpha: float
    k_plus: int
    quota_default: int


def derive_parameters(k: int, delta: float, alpha: float, profile: Profile) -> DerivedParams:
    """Compute the size threshold, enlarged solution size, and default quota."""
    phi = phi_alpha(k, delta, alpha, profile)
    kp = k_plus_size(k, delta, profile)
    return DerivedParams(phi_alpha=phi, k_plus=kp, quota_default=quota_default(kp, delta))


@dataclass(frozen=True)
class SelectProcConfig:
    """One copy's full configuration, including integer phase boundaries.

    The first two phases have equal size (p2_end == 2 * p1_end). Selection
    happens on indices [p2_end, p3_end); any stream suffix past p3_end is
    observed but ignored.
    """

    k: int
    n: int
    delta: float
    alpha: float
    gamma: float
    quota: int
    tau: float
    profile: Profile
    p1_end: int
    p2_end: int
    p3_end: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < 1:
            raise ContractError("k and n must be positive")
        if not (0.0 < self.delta < 1.0):
            raise ContractError("delta must lie in (0,1)")
        if not (0.0 < self.alpha <= 1.0 / 6.0 + _RANGE_TOL):
            raise ContractError(f"alpha must lie in (0, 1/6], got {self.alpha}")
        if not (self.alpha < self.gamma <= 1.0 - 2.0 * self.alpha + _RANGE_TOL):
            raise ContractError(f"gamma must lie in (alpha, 1-2*alpha], got {self.gamma}")
        if self.quota < 1:
            raise ContractError("quota must be positive")
        if self.tau <= 0:
            raise ContractError("tau must be positive")
        if not (0 < self.p1_end <= self.p2_end <= self.p3_end <= self.n):
            raise ContractError("phase boundaries must satisfy 0 < p1 <= p2 <= p3 <= n")
        if self.p2_end - self.p1_end != self.p1_end:
            raise ContractError("the first two phases must have equal size")


def make_config(
    k: int,
    n: int,
    delta: float,
    alpha: float,
    profile: Profile = PROFILES["paper"],
    gamma: float | None = None,
    quota: int | None = None,
    tau: float | None = None,
) -> SelectProcConfig:
    """Standalone configuration with the defaults used by a full-stream copy:
    gamma = 1 - 2*alpha (read everything), tau = phi_alpha, quota from the
    enlarged solution size."""
    derived = derive_parameters(k, delta, alpha, profile)
    if gamma is None:
        gamma = 1.0 - 2.0 * alpha
        p3_end = n
    else:
        p3_end = min(n, 2 * ceil(alpha * n) + ceil(gamma * n))
    p1_end = ceil(alpha * n)
    if 2 * p1_end > n:
        raise ContractError("stream too short for two calculation phases at this alpha")
    return SelectProcConfig(
        k=k,
        n=n,
        delta=delta,
        alpha=alpha,
        gamma=gamma,
        quota=quota if quota is not None else derived.quota_default,
        tau=tau if tau is not None else derived.phi_alpha,
        profile=profile,
        p1_end=p1_end,
        p2_end=2 * p1_end,
        p3_end=max(p3_end, 2 * p1_end),
    )


@dataclass(frozen=True, slots=True)
class Decision:
    """Outcome for a single stream index."""

    index: int
    point: int
    kind: str  # "selected" | "not_selected" | "ignored"
    reason: str | None  # "far" | "quota" | "near_flag" when selected
    phase: int  # 1, 2, 3; 0 for the ignored suffix
    dist_to_ref: float | None


@dataclass(frozen=True)
class SelectProcReport:
    """Immutable summary of one finished copy."""

    selected: tuple[int, ...]  # in selection order
    psi: float
    t_alpha: CenterSet
    reason_counts: dict[str, int]
    observed_per_center: tuple[int, ...]
    selected_per_center: tuple[int, ...]
    warnings: tuple[str, ...]
    config: SelectProcConfig


class SelectProcState:
    """Mutable per-copy streaming state; single-owner, mutated sequentially."""

    def __init__(self, config: SelectProcConfig):
        self.config = config
        self.count = 0
        self.buffer_p1: list[int] | None = []
        self.dists_p2: list[float] = []
        self.t_alpha: CenterSet | None = None
        self.psi: float | None = None
        self.threshold: float = 0.0
        self.near: list[bool] = []
        self.observed_counts: list[int] = []
        self.selected_counts: list[int] = []
        self.selected: list[int] = []
        self.reason_counts = {"far": 0, "quota": 0, "near_flag": 0}
        self.warnings: list[str] = []
        self._center_ids: np.ndarray | None = None
        self._center_pts: np.ndarray | None = None

    @property
    def phase(self) -> str:
        c = self.config
        if self.count < c.p1_end:
            return "one"
        if self.count < c.p2_end:
            return "two"
        if self.count < c.p3_end:
            return "three"
        return "done"

    def _finish_phase1(self, data: Dataset, solver: Solver) -> None:
        assert self.buffer_p1 is not None
        kp = k_plus_size(self.config.k, self.config.delta, self.config.profile)
        self.t_alpha = solver.solve(self.buffer_p1, kp, data)
        if len(self.t_alpha) > kp:
            raise ContractError("solver returned more centers than requested")
        self.buffer_p1 = None  # buffered prefix is no longer needed
        self._center_ids = self.t_alpha.to_array()
        if data.mode == "euclidean":
            self._center_pts = data.coords[self._center_ids]
        m = len(self.t_alpha)
        self.near = [False] * m
        self.observed_counts = [0] * m
        self.selected_counts = [0] * m

    def _finish_phase2(self) -> None:
        c = self.config
        phi = phi_alpha(c.k, c.delta, c.alpha, c.profile)
        drop = psi_truncation_count(c.k, c.alpha, phi)
        dists = np.sort(np.asarray(self.dists_p2, dtype=np.float64))
        if drop >= dists.size:
            self.psi = 0.0
            self.warnings.append(
                f"psi=0: truncation count {drop} >= phase-2 size {dists.size}; "
                "every positive-distance point in phase 3 will be selected as far"
            )
        else:
            kept = dists[: dists.size - drop] if drop > 0 else dists
            self.psi = float(np.sum(kept)) / (c.profile.c_psi_denom * c.alpha)
        self.threshold = selection_threshold(self.psi, c.k, c.tau)

    def _nearest_ref(self, x: int, data: Dataset) -> tuple[int, float]:
        """Position (into the sorted center array) and distance of the nearest
        reference center; ties resolve to the smallest id."""
        if data.mode == "matrix":
            d = data.matrix[x, self._center_ids]
        else:
            diff = self._center_pts - data.coords[x]
            d = np.sqrt(np.sum(diff * diff, axis=1))
        pos = int(np.argmin(d))
        return pos, float(d[pos])


def observe(state: SelectProcState, x: int, data: Dataset, solver: Solver) -> Decision:
    """Consume the next stream point and decide about it immediately.

    The solver is invoked exactly once, when the last phase-1 point arrives.
    Raises ContractError when called after the stream is exhausted.
    """
    c = state.config
    idx = state.count
    if idx >= c.n:
        raise ContractError("observe called after the full stream was consumed")
    state.count = idx + 1

    if idx < c.p1_end:
        state.buffer_p1.append(int(x))
        if idx == c.p1_end - 1:
            state._finish_phase1(data, solver)
        return Decision(idx, x, "not_selected", None, 1, None)

    if idx < c.p2_end:
        _, d = state._nearest_ref(x, data)
        state.dists_p2.append(d)
        if idx == c.p2_end - 1:
            state._finish_phase2()
        return Decision(idx, x, "not_selected", None, 2, d)

    if idx < c.p3_end:
        pos, d = state._nearest_ref(x, data)
        prev = state.observed_counts[pos]
        state.observed_counts[pos] = prev + 1
        if d > state.threshold:
            reason = "far"
        elif prev < c.quota:
            reason = "quota"
        elif not state.near[pos]:
            reason = "near_flag"
        else:
            return Decision(idx, x, "not_selected", None, 3, d)
        state.selected.append(int(x))
        state.selected_counts[pos] += 1
        state.reason_counts[reason] += 1
        if d <= state.threshold:
            state.near[pos] = True
        return Decision(idx, x, "selected", reason, 3, d)

    return Decision(idx, x, "ignored", None, 0, None)


def finish(state: SelectProcState) -> SelectProcReport:
    """Freeze the copy's outcome once the whole stream has been observed."""
    if state.count != state.config.n:
        raise ContractError(
            f"finish called after {state.count} of {state.config.n} points"
        )
    assert state.t_alpha is not None and state.psi is not None
    return SelectProcReport(
        selected=tuple(state.selected),
        psi=state.psi,
        t_alpha=state.t_alpha,
        reason_counts=dict(state.reason_counts),
        observed_per_center=tuple(state.observed_counts),
        selected_per_center=tuple(state.selected_counts),
        warnings=tuple(state.warnings),
        config=state.config,
    )
