"""Closed-form Erlang B/C evaluation for paging-channel queues.

A paging scheme is modeled as an M/M/c queue: ``channels`` parallel servers
(paging channels) with exponential service of mean ``mean_service_time``.
The quantity this module calls "wait probability" is the Erlang C delay
probability, i.e. the chance an arriving paging request finds every channel
busy.  Teletraffic practice often labels it "blocking probability" even
though nothing is lost in a pure delay system; we keep both readings in mind
and name the field ``wait_probability``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from ._io import fmt_float

__all__ = [
    "PagingSchemeConfig",
    "OfferedLoad",
    "QueueMetrics",
    "SweepTable",
    "SEQUENTIAL_SCHEME",
    "CONCURRENT_SCHEME",
    "NoSignChangeError",
    "InstabilityError",
    "erlang_b",
    "erlang_c",
    "mean_system_time",
    "find_crossover",
    "sweep_curves",
]

DIVERGENT = math.inf
"""Marker carried through sweeps when offered traffic saturates the servers."""


class NoSignChangeError(ValueError):
    """The crossover bracket does not straddle a sign change."""


class InstabilityError(ValueError):
    """A scheme saturates inside the bracket before the curves cross."""


@dataclass(frozen=True)
class PagingSchemeConfig:
    """A named paging scheme: server count and mean per-page service time.

    The two schemes of interest: sequential search behaves like 7 parallel
    channels with unit service time, concurrent search like 14 parallel
    channels with 1.5-unit service time.
    """

    name: str
    channels: int
    mean_service_time: float

    def __post_init__(self) -> None:
        if self.channels < 1:
            raise ValueError(f"channels must be >= 1, got {self.channels}")
        if not self.mean_service_time > 0:
            raise ValueError(
                f"mean_service_time must be > 0, got {self.mean_service_time}"
            )

    @property
    def service_rate(self) -> float:
        """mu, pages completed per channel per time unit."""
        return 1.0 / self.mean_service_time

    @property
    def saturation_rate(self) -> float:
        """Largest arrival rate the scheme can absorb (channels * mu)."""
        return self.channels / self.mean_service_time

    def offered_traffic(self, arrival_rate: float) -> float:
        """A = lambda / mu in Erlang for this scheme."""
        return arrival_rate * self.mean_service_time


SEQUENTIAL_SCHEME = PagingSchemeConfig("sequential", channels=7, mean_service_time=1.0)
CONCURRENT_SCHEME = PagingSchemeConfig("concurrent", channels=14, mean_service_time=1.5)


@dataclass(frozen=True)
class OfferedLoad:
    """Arrival rate paired with the Erlang traffic it offers to a scheme."""

    arrival_rate: float
    offered_traffic: float

    @classmethod
    def for_scheme(cls, arrival_rate: float, scheme: PagingSchemeConfig) -> "OfferedLoad":
        if arrival_rate < 0:
            raise ValueError(f"arrival_rate must be >= 0, got {arrival_rate}")
        return cls(arrival_rate, scheme.offered_traffic(arrival_rate))


@dataclass(frozen=True)
class QueueMetrics:
    """Steady-state delay metrics of one scheme at one load.

    ``mean_system_time`` is ``math.inf`` when the queue is unstable
    (offered traffic >= channels); callers must expect the marker.
    """

    wait_probability: float
    mean_system_time: float

    @property
    def divergent(self) -> bool:
        return math.isinf(self.mean_system_time)


def erlang_b(channels: int, traffic: float) -> float:
    """Erlang-B loss probability via the standard recurrence.

    B(0) = 1, B(k) = A*B(k-1) / (k + A*B(k-1)).  The recurrence avoids the
    factorials of the textbook form, so it is overflow-safe for any channel
    count.
    """
    if channels < 1:
        raise ValueError(f"channels must be >= 1, got {channels}")
    if traffic < 0:
        raise ValueError(f"traffic must be >= 0, got {traffic}")
    b = 1.0
    for k in range(1, channels + 1):
        ab = traffic * b
        b = ab / (k + ab)
    return b


def erlang_c(channels: int, traffic: float) -> float:
    """Probability an arrival must wait in an M/M/c queue (delay probability).

    Computed from Erlang B as C*B / (C - A*(1 - B)).  Returns exactly 1.0
    when the offered traffic saturates the servers (A >= C): every arrival
    in an unstable queue eventually waits.
    """
    if channels < 1:
        raise ValueError(f"channels must be >= 1, got {channels}")
    if traffic < 0:
        raise ValueError(f"traffic must be >= 0, got {traffic}")
    if traffic >= channels:
        return 1.0
    b = erlang_b(channels, traffic)
    return channels * b / (channels - traffic * (1.0 - b))


def mean_system_time(scheme: PagingSchemeConfig, arrival_rate: float) -> QueueMetrics:
    """Mean time a paging request spends in the system (wait + service).

    T = P_wait / (mu * (C - A)) + 1/mu.  For A >= C the queue grows without
    bound, so the wait probability is pinned to 1 and the time to the
    divergent marker instead of raising.
    """
    if arrival_rate < 0:
        raise ValueError(f"arrival_rate must be >= 0, got {arrival_rate}")
    a = scheme.offered_traffic(arrival_rate)
    c = scheme.channels
    if a >= c:
        return QueueMetrics(wait_probability=1.0, mean_system_time=DIVERGENT)
    pw = erlang_c(c, a)
    t = pw * scheme.mean_service_time / (c - a) + scheme.mean_service_time
    return QueueMetrics(wait_probability=pw, mean_system_time=t)


def find_crossover(
    scheme_a: PagingSchemeConfig,
    scheme_b: PagingSchemeConfig,
    bracket: tuple[float, float],
    tol: float = 1e-6,
) -> float:
    """Arrival rate at which the two schemes' mean system times cross.

    Bisects T_a(lambda) - T_b(lambda) on the bracket until the two times
    agree within ``tol`` time units.  The bracket must straddle exactly one
    sign change and both schemes must stay stable across it.

    Raises:
        InstabilityError: either scheme saturates inside the bracket.
        NoSignChangeError: the time difference has the same sign at both
            ends (includes identical schemes, where it is identically 0).
    """
    lo, hi = bracket
    if not lo < hi:
        raise ValueError(f"bracket must satisfy lo < hi, got {bracket}")

    for scheme in (scheme_a, scheme_b):
        if hi >= scheme.saturation_rate:
            raise InstabilityError(
                f"scheme {scheme.name!r} saturates at arrival rate "
                f"{scheme.saturation_rate:g}, inside bracket {bracket}"
            )

    def diff(lam: float) -> float:
        return (
            mean_system_time(scheme_a, lam).mean_system_time
            - mean_system_time(scheme_b, lam).mean_system_time
        )

    f_lo, f_hi = diff(lo), diff(hi)
    if not f_lo * f_hi < 0:
        raise NoSignChangeError(
            f"no crossover bracketed on {bracket}: "
            f"diff({lo:g})={f_lo:g}, diff({hi:g})={f_hi:g}"
        )

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = diff(mid)
        if abs(f_mid) < tol:
            return mid
        if (f_lo < 0) == (f_mid < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SweepTable:
    """Per-scheme queue metrics tabulated over a shared arrival-rate grid."""

    arrival_rates: tuple[float, ...]
    schemes: tuple[PagingSchemeConfig, ...]
    metrics: tuple[tuple[QueueMetrics, ...], ...]  # [grid index][scheme index]

    def column(self, scheme_name: str) -> list[QueueMetrics]:
        names = [s.name for s in self.schemes]
        idx = names.index(scheme_name)
        return [row[idx] for row in self.metrics]

    def write_csv(self, stream: TextIO) -> None:
        header = ["lambda"]
        for scheme in self.schemes:
            header += [f"{scheme.name}_pwait", f"{scheme.name}_T"]
        stream.write(",".join(header) + "\n")
        for lam, row in zip(self.arrival_rates, self.metrics):
            cells = [fmt_float(lam)]
            for m in row:
                cells += [fmt_float(m.wait_probability), fmt_float(m.mean_system_time)]
            stream.write(",".join(cells) + "\n")


def sweep_curves(
    schemes: Sequence[PagingSchemeConfig], arrival_rates: Iterable[float]
) -> SweepTable:
    """Evaluate every scheme on a strictly increasing arrival-rate grid.

    Saturated grid points carry the divergent marker through rather than
    aborting the sweep, so wide grids are safe.
    """
    grid = tuple(float(lam) for lam in arrival_rates)
    if any(lam < 0 for lam in grid):
        raise ValueError("arrival rates must be >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("arrival-rate grid must be strictly increasing")
    rows = tuple(
        tuple(mean_system_time(scheme, lam) for scheme in schemes) for lam in grid
    )
    return SweepTable(arrival_rates=grid, schemes=tuple(schemes), metrics=rows)
