"""Paging-scheme constants derived from first principles.

Two small models live here:

* absorbing Markov chains whose expected absorption time gives a scheme's
  mean service time (one paging slot per transition), and
* expected paging-message counts for locating users spread across carriers.

Message-counting convention (two-carrier scenario):

* The legacy *sequential* system duplicates every page on every carrier's
  paging channel, because a mobile listens to only one carrier and the
  network does not know which.  Locating k users on m carriers therefore
  always costs k*m messages (4 for two users on two carriers), but each
  user is found within a single slot, so the per-page service time is one
  unit.
* *Concurrent* search pages one carrier per slot per user and repages a
  miss on the other carrier.  With a 50/50 location split that costs
  1 + 0.5 expected messages per user (3 total for two users) and the same
  1.5 expected slots of service time, which is exactly the absorption time
  of :func:`two_carrier_concurrent_chain`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import lu_factor, lu_solve

__all__ = [
    "AbsorbingChain",
    "CarrierScenario",
    "SingularChainError",
    "UnsupportedScenarioError",
    "expected_absorption_time",
    "two_carrier_concurrent_chain",
    "sequential_page_messages",
    "concurrent_page_messages",
    "load_chain",
]

_ROW_SUM_TOL = 1e-12
_PIVOT_TOL = 1e-12


class SingularChainError(ValueError):
    """Absorption is numerically unreachable (I - Q is singular)."""


class UnsupportedScenarioError(ValueError):
    """The scenario falls outside what the concurrent scheme specifies."""


@dataclass(frozen=True)
class AbsorbingChain:
    """Transition structure over states ordered transient-first.

    ``step_time`` converts transition counts into time units (one paging
    slot per transition).  The start state is the first transient state.
    """

    transient_count: int
    transition_matrix: np.ndarray
    step_time: float

    def __post_init__(self) -> None:
        p = np.asarray(self.transition_matrix, dtype=float)
        object.__setattr__(self, "transition_matrix", p)
        n = p.shape[0]
        if p.ndim != 2 or p.shape[1] != n:
            raise ValueError(f"transition matrix must be square, got shape {p.shape}")
        if not 0 <= self.transient_count <= n:
            raise ValueError(
                f"transient_count must be in [0, {n}], got {self.transient_count}"
            )
        if not self.step_time > 0:
            raise ValueError(f"step_time must be > 0, got {self.step_time}")
        if np.any(p < 0):
            raise ValueError("transition probabilities must be >= 0")
        rowsum_err = np.abs(p.sum(axis=1) - 1.0)
        if np.any(rowsum_err > _ROW_SUM_TOL):
            bad = int(np.argmax(rowsum_err))
            raise ValueError(f"row {bad} sums to {p[bad].sum()!r}, expected 1")
        for i in range(self.transient_count, n):
            if p[i, i] != 1.0:
                raise ValueError(f"absorbing state {i} must have a 1 on the diagonal")
        self._check_absorbing_reachable(p)

    def _check_absorbing_reachable(self, p: np.ndarray) -> None:
        # BFS over nonzero transitions from each transient state
        n = p.shape[0]
        adjacency = p > 0
        for start in range(self.transient_count):
            seen = {start}
            frontier = [start]
            reached = False
            while frontier and not reached:
                state = frontier.pop()
                for nxt in np.flatnonzero(adjacency[state]):
                    if nxt >= self.transient_count:
                        reached = True
                        break
                    if nxt not in seen:
                        seen.add(int(nxt))
                        frontier.append(int(nxt))
            if not reached:
                raise ValueError(f"no absorbing state reachable from state {start}")

    @property
    def transient_block(self) -> np.ndarray:
        """Q, the transient-to-transient transition block."""
        t = self.transient_count
        return self.transition_matrix[:t, :t]


@dataclass(frozen=True)
class CarrierScenario:
    """Users to locate across carriers with a known location distribution."""

    carriers: int
    users: int
    location_prob: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.carriers < 1:
            raise ValueError(f"carriers must be >= 1, got {self.carriers}")
        if self.users < 1:
            raise ValueError(f"users must be >= 1, got {self.users}")
        if self.location_prob is None:
            probs = np.full(self.carriers, 1.0 / self.carriers)
        else:
            probs = np.asarray(self.location_prob, dtype=float)
        object.__setattr__(self, "location_prob", probs)
        if probs.shape != (self.carriers,):
            raise ValueError(
                f"location_prob must have one entry per carrier, got {probs.shape}"
            )
        if np.any(probs < 0):
            raise ValueError("location probabilities must be >= 0")
        if abs(probs.sum() - 1.0) > _ROW_SUM_TOL:
            raise ValueError(f"location probabilities sum to {probs.sum()!r}, expected 1")

    @property
    def uniform(self) -> bool:
        return bool(np.all(np.abs(self.location_prob - 1.0 / self.carriers) <= _ROW_SUM_TOL))


def expected_absorption_time(chain: AbsorbingChain) -> float:
    """Expected time to absorption from the first transient state.

    Solves (I - Q) t = 1 for the expected transition counts (the
    fundamental-matrix row sums), then scales by the slot length.  An LU
    factorization with partial pivoting is used rather than an explicit
    inverse; a pivot below 1e-12 signals unreachable absorption.
    """
    t = chain.transient_count
    if t == 0:
        return 0.0
    system = np.eye(t) - chain.transient_block
    lu, piv = lu_factor(system)
    if np.min(np.abs(np.diag(lu))) < _PIVOT_TOL:
        raise SingularChainError("I - Q is numerically singular")
    steps = lu_solve((lu, piv), np.ones(t))
    return chain.step_time * float(steps[0])


def two_carrier_concurrent_chain(
    step_time: float = 1.0, first_carrier_prob: float = 0.5
) -> AbsorbingChain:
    """Per-user paging chain for concurrent search on two carriers.

    States: 0 = paging the first carrier, 1 = repaging on the other
    carrier, 2 = located (absorbing).  One slot per transition::

        [[0,   1-p, p],
         [0,   0,   1],
         [0,   0,   1]]

    A user sits on the first-paged carrier with probability ``p``; a miss
    is certain to be found on the second carrier.  Expected absorption time
    is ``step_time * (2 - p)``: 1.5 slots for the 50/50 split, against 1.0
    for the duplicate-everywhere sequential page.
    """
    if not 0.0 <= first_carrier_prob <= 1.0:
        raise ValueError(f"first_carrier_prob must be in [0, 1], got {first_carrier_prob}")
    p = first_carrier_prob
    matrix = np.array(
        [
            [0.0, 1.0 - p, p],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0],
        ]
    )
    return AbsorbingChain(transient_count=2, transition_matrix=matrix, step_time=step_time)


def sequential_page_messages(scenario: CarrierScenario) -> float:
    """Expected messages to locate every user with sequential paging.

    The page for each user is duplicated on every carrier (the legacy
    broadcast behaviour), so the count is deterministic: users * carriers.
    Early-stop paging would send fewer messages but is not what the
    modeled system does.
    """
    return float(scenario.users * scenario.carriers)


def concurrent_page_messages(scenario: CarrierScenario) -> float:
    """Expected messages for concurrent search, two-carrier two-user case.

    Each user is first paged on a distinct carrier (one message each);
    a miss costs one repage on the other carrier, so the expectation is
    users + sum of miss probabilities.  Only the 50/50 two-carrier,
    two-user scenario is defined; anything else is rejected.
    """
    if scenario.carriers != 2 or scenario.users != 2 or not scenario.uniform:
        raise UnsupportedScenarioError(
            "concurrent message counts are defined only for 2 carriers, "
            f"2 users, uniform location split; got {scenario.carriers} carriers, "
            f"{scenario.users} users, probs {scenario.location_prob.tolist()}"
        )
    miss_prob = 1.0 - scenario.location_prob[0]
    return float(scenario.users * (1.0 + miss_prob))


def load_chain(path: str | Path) -> AbsorbingChain:
    """Read a chain from a whitespace-separated text file.

    First line: ``transient_count step_time``.  Each following line is one
    row of the transition matrix.
    """
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty chain file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"{path}: first line must be 'transient_count step_time'")
    transient_count = int(head[0])
    step_time = float(head[1])
    matrix = np.array([[float(tok) for tok in ln.split()] for ln in lines[1:]])
    return AbsorbingChain(
        transient_count=transient_count, transition_matrix=matrix, step_time=step_time
    )
