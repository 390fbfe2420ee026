"""Secondary-transmitter molecule budgeting and expected-interference accounting.

The secondary budget for each slot is the largest emission that keeps the
expected co-channel interference at the primary receiver at or below the
threshold, given the budgets already assigned to earlier slots.  Budgets are
deterministic: the recursion uses assigned budgets, not realized transmissions.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .hitting import ChannelTaps

__all__ = [
    "TrafficModel",
    "ControlParams",
    "SlotSchedule",
    "transmit_budget",
    "transmit_budget_no_isi",
    "steady_state_bound",
    "expected_cci",
    "expected_absorbed",
    "detect_plateau",
    "schedule_to_csv",
]


@dataclass(frozen=True)
class TrafficModel:
    """Per-link probability of transmitting bit 1 in a slot."""

    q1P: float
    q1S: float

    def __post_init__(self):
        for name, q in (("q1P", self.q1P), ("q1S", self.q1S)):
            if not 0 < q <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {q}")

    @property
    def q0P(self) -> float:
        return 1.0 - self.q1P

    @property
    def q0S(self) -> float:
        return 1.0 - self.q1S

    def q1(self, link: str) -> float:
        return self.q1P if link == "P" else self.q1S


@dataclass(frozen=True)
class ControlParams:
    """Emission and interference limits.

    N is the fixed primary per-slot emission, uL the secondary emission cap,
    and uM the acceptable expected number of interfering molecules at the
    primary receiver per slot.
    """

    N: int
    uL: int
    uM: float

    def __post_init__(self):
        if self.N < 0 or self.uL < 0 or self.uM < 0:
            raise ValueError("N, uL and uM must be nonnegative")


@dataclass(frozen=True)
class SlotSchedule:
    """Per-slot emission budgets: u_S[k] for slots k = 1..horizon, constant u_P."""

    u_S: tuple
    u_P: int
    horizon: int

    def __post_init__(self):
        u_S = tuple(int(u) for u in self.u_S)
        object.__setattr__(self, "u_S", u_S)
        if len(u_S) != self.horizon:
            raise ValueError("u_S must have one entry per slot")
        if any(u < 0 for u in u_S):
            raise ValueError("budgets must be nonnegative")

    def u_at(self, slot: int) -> int:
        """Secondary budget for 1-indexed ``slot``."""
        return self.u_S[slot - 1]


def _budget_for_slot(h0: float, isi: float, traffic: TrafficModel, params: ControlParams) -> int:
    headroom = max(params.uM / traffic.q1S - isi, 0.0)
    if h0 == 0.0:
        # an unreachable primary receiver: emission causes no interference,
        # so the cap is the only binding constraint
        return params.uL
    return int(math.floor(min(params.uL, headroom / h0)))


def transmit_budget(
    taps_SP: ChannelTaps,
    traffic: TrafficModel,
    params: ControlParams,
    horizon: int,
) -> SlotSchedule:
    """Slot-by-slot secondary budgets keeping expected CCI at the primary
    receiver within ``params.uM``."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if len(taps_SP) < horizon:
        raise ValueError(
            f"taps cover {len(taps_SP)} lags but the horizon is {horizon}"
        )
    h = taps_SP.taps
    u_S = []
    for l in range(1, horizon + 1):
        isi = sum(u_S[k - 1] * h[l - k] for k in range(1, l))
        u_S.append(_budget_for_slot(h[0], isi, traffic, params))
    return SlotSchedule(u_S=tuple(u_S), u_P=params.N, horizon=horizon)


def transmit_budget_no_isi(
    taps_SP: ChannelTaps, traffic: TrafficModel, params: ControlParams
) -> int:
    """Per-slot budget when inter-slot taps are negligible; equals the
    recursion's first slot."""
    return _budget_for_slot(taps_SP.taps[0], 0.0, traffic, params)


def steady_state_bound(
    p_inf_SP: float, traffic: TrafficModel, params: ControlParams
) -> int:
    """Upper bound on the steady-state per-slot budget, from the eventual
    hitting probability of the secondary-to-primary channel."""
    if p_inf_SP < 0 or p_inf_SP > 1:
        raise ValueError("p_inf_SP must be a probability")
    if p_inf_SP == 0.0:
        return params.uL
    return int(math.floor(min(params.uL, params.uM / (traffic.q1S * p_inf_SP))))


def expected_cci(
    schedule: SlotSchedule, taps_SP: ChannelTaps, traffic: TrafficModel, l: int
) -> float:
    """Expected co-channel interference at the primary receiver in slot l."""
    if not 1 <= l <= schedule.horizon:
        raise ValueError(f"slot {l} outside schedule horizon {schedule.horizon}")
    h = taps_SP.taps
    return traffic.q1S * sum(
        schedule.u_at(k) * h[l - k] for k in range(1, l + 1)
    )


def expected_absorbed(
    rx: str,
    schedule: SlotSchedule,
    taps_from_P: ChannelTaps,
    taps_from_S: ChannelTaps,
    traffic: TrafficModel,
    l: int,
) -> float:
    """Expected total number of molecules absorbed at receiver ``rx`` in slot l.

    The primary link emits a constant count per active slot, so its own and
    cross contributions collapse to the cumulative hitting probability; the
    secondary contribution keeps the per-slot budget sum.
    """
    if not 1 <= l <= schedule.horizon:
        raise ValueError(f"slot {l} outside schedule horizon {schedule.horizon}")
    if len(taps_from_P) < l or len(taps_from_S) < l:
        raise ValueError("taps must cover at least l lags")
    h_s = taps_from_S.taps
    from_primary = traffic.q1P * schedule.u_P * taps_from_P.p_cum[l]
    from_secondary = traffic.q1S * sum(
        schedule.u_at(k) * h_s[l - k] for k in range(1, l + 1)
    )
    return from_primary + from_secondary


def detect_plateau(schedule: SlotSchedule, window: int = 10) -> int | None:
    """Value of the trailing constant stretch of the schedule, if any.

    Purely diagnostic: schedules may oscillate indefinitely for short slot
    durations, so callers must not assume convergence.
    """
    if schedule.horizon < window:
        return None
    tail = schedule.u_S[-window:]
    if all(u == tail[0] for u in tail):
        return tail[0]
    return None


def schedule_to_csv(
    schedule: SlotSchedule,
    taps_SP: ChannelTaps,
    traffic: TrafficModel,
    path,
) -> None:
    """Write the schedule with its per-slot expected interference."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["slot", "u_S", "expected_cci"])
        for l in range(1, schedule.horizon + 1):
            cci = expected_cci(schedule, taps_SP, traffic, l)
            writer.writerow([l, schedule.u_at(l), format(cci, ".17g")])
