"""Multiscale orchestration: a doubling ladder of selection copies over one pass.

The stream fraction handled by the calculation phases doubles from copy to
copy, so copy i's whole observation window coincides with copy i+1's two
calculation phases, and every stream index past the first 2*s1 points falls in
exactly one copy's selection phase. The last copy reads to the end of the
stream with an enlarged per-center quota; earlier copies use a quota of one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

from .errors import ContractError
from .metric import CenterSet, Dataset
from .params import PROFILES, Profile, alpha_schedule, k_plus_size, phi_alpha, quota_default
from .select_proc import Decision, SelectProcConfig, SelectProcReport, SelectProcState, finish, observe
from .solvers import Solver
from .stream import InstrumentedStream

__all__ = ["Schedule", "StreamRecord", "MunscResult", "compute_schedule", "run_stream"]


@dataclass(frozen=True)
class Schedule:
    """Copy configurations plus the shared schedule arithmetic."""

    copies: tuple[SelectProcConfig, ...]
    doublings: int  # I; I+1 scales before any copy is dropped for size
    delta_prime: float
    s1: int
    tau: float
    warnings: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.copies[0].n


def compute_schedule(k: int, delta: float, n: int, profile: Profile = PROFILES["paper"]) -> Schedule:
    """Build the copy ladder for a stream of known length.

    Integer boundaries come from s1 = ceil(alpha_1 * n) doubled per copy,
    which preserves the exact window overlap between consecutive copies. On
    streams too short for the nominal boundaries the last copy's calculation
    phases shrink to fit and intermediate copies that cannot fit both
    calculation phases are dropped; both adjustments are recorded as warnings.
    """
    if n < 4:
        raise ContractError("need at least 4 stream points for one copy")
    sched = alpha_schedule(k, delta)
    dprime = sched.delta_prime
    last_alpha = sched.alphas[-1]
    tau = phi_alpha(k, dprime, last_alpha, profile)
    kp = k_plus_size(k, dprime, profile)
    last_quota = quota_default(kp, dprime)
    s1 = ceil(sched.alpha_1 * n)

    warnings: list[str] = []
    copies: list[SelectProcConfig] = []
    for i, a in enumerate(sched.alphas):
        s = s1 * (2**i)
        last = i == sched.doublings
        if last:
            s_eff = min(s, n // 2)
            if s_eff < s:
                warnings.append(
                    f"copy {i + 1}: calculation phases clamped from {s} to {s_eff} points"
                )
            p1, p2, p3 = s_eff, 2 * s_eff, n
            gamma = 1.0 - 2.0 * a
            quota = last_quota
        else:
            if 2 * s > n:
                warnings.append(f"copy {i + 1} dropped: 2*{s} exceeds the stream length {n}")
                continue
            p1, p2 = s, 2 * s
            p3 = min(4 * s, n)
            if p3 < 4 * s:
                warnings.append(f"copy {i + 1}: selection phase clamped to the stream end")
            gamma = 2.0 * a
            quota = 1
        copies.append(
            SelectProcConfig(
                k=k,
                n=n,
                delta=dprime,
                alpha=a,
                gamma=gamma,
                quota=quota,
                tau=tau,
                profile=profile,
                p1_end=p1,
                p2_end=p2,
                p3_end=p3,
            )
        )
    return Schedule(
        copies=tuple(copies),
        doublings=sched.doublings,
        delta_prime=dprime,
        s1=s1,
        tau=tau,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True, slots=True)
class StreamRecord:
    """Per-index aggregate logged to the instrumented stream."""

    index: int
    point: int
    selected: bool
    copy_decisions: tuple[Decision, ...]


@dataclass(frozen=True)
class MunscResult:
    """Union of all copies' selections plus their individual reports."""

    centers: CenterSet
    selection_order: tuple[int, ...]
    copy_reports: tuple[SelectProcReport, ...]
    schedule: Schedule
    warnings: tuple[str, ...]


def run_stream(stream, schedule: Schedule, data: Dataset, solver: Solver) -> MunscResult:
    """Feed every stream point to every copy, in copy order, one point at a time.

    `stream` is either an InstrumentedStream or a plain permutation of
    range(n); plain sequences are wrapped so the one-decision-per-point
    discipline is always enforced.
    """
    st = stream if isinstance(stream, InstrumentedStream) else InstrumentedStream(stream)
    n = schedule.n
    if st.n != n:
        raise ContractError(f"stream length {st.n} does not match schedule length {n}")
    if data.n != n:
        raise ContractError(f"dataset size {data.n} does not match schedule length {n}")

    states = [SelectProcState(cfg) for cfg in schedule.copies]
    seen: set[int] = set()
    selection_order: list[int] = []
    for t in range(n):
        x = st.read()
        decisions = []
        selected = False
        for state in states:
            d = observe(state, x, data, solver)
            decisions.append(d)
            selected = selected or d.kind == "selected"
        if selected and x not in seen:
            seen.add(x)
            selection_order.append(x)
        st.log_decision(t, StreamRecord(t, x, selected, tuple(decisions)))

    reports = tuple(finish(s) for s in states)
    warnings = list(schedule.warnings)
    for i, rep in enumerate(reports):
        warnings.extend(f"copy {i + 1}: {w}" for w in rep.warnings)
    return MunscResult(
        centers=CenterSet.of(selection_order),
        selection_order=tuple(selection_order),
        copy_reports=reports,
        schedule=schedule,
        warnings=tuple(warnings),
    )
