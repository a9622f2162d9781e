"""Synthetic offered-load generators for the three studied traffic shapes.

The shapes are reconstructions of typical busy-hour patterns, scaled so
every default series swings across the sequential/concurrent swap threshold:

* ``T1`` - single diurnal peak: flat baseline half the cycle, half-sine bump
  the other half.
* ``T2`` - morning/evening double peak: two half-sine bumps per cycle, the
  evening one at 75% of the morning amplitude.
* ``T3`` - ramp-and-plateau: low plateau, linear ramp, peak plateau, then a
  stepped descent.  Plateaus at the top are kept shorter than the default
  predictor window so the step edges stay predictable from recent history.

Samples are arrival rates (requests per time unit).  With the sequential
scheme's unit service time this equals its offered traffic in Erlang, which
is why thresholds around "six Erlang" are quoted in the same units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

__all__ = [
    "TrafficSeries",
    "TrafficSpec",
    "InvalidSpecError",
    "TooShortError",
    "generate",
    "noiseless",
    "split",
    "default_spec",
    "DEFAULT_SATURATION_LOAD",
]

# larger of the two default schemes' saturation rates (14 channels / 1.5)
DEFAULT_SATURATION_LOAD = 14.0 / 1.5

TrafficKind = Literal["T1", "T2", "T3"]


class InvalidSpecError(ValueError):
    """Traffic spec violates its bounds."""


class TooShortError(ValueError):
    """A split part is too short to host a prediction window."""


@dataclass(frozen=True)
class TrafficSeries:
    """Time-indexed offered-load samples with a fixed sampling period."""

    samples: np.ndarray
    period: float
    label: str = "custom"

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError(f"need at least 2 samples, got shape {samples.shape}")
        if np.any(samples < 0):
            raise ValueError("load samples must be >= 0")
        if not self.period > 0:
            raise ValueError(f"period must be > 0, got {self.period}")

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) * self.period

    def write_csv(self, path: str | Path) -> None:
        from ._io import fmt_float

        with open(path, "w", newline="") as fh:
            fh.write("t,load\n")
            for t, load in zip(self.times, self.samples):
                fh.write(f"{fmt_float(t)},{fmt_float(load)}\n")

    @classmethod
    def read_csv(cls, path: str | Path, label: str = "custom") -> "TrafficSeries":
        rows = Path(path).read_text().splitlines()
        if not rows or rows[0].strip() != "t,load":
            raise ValueError(f"{path}: expected 't,load' header")
        t: list[float] = []
        load: list[float] = []
        for row in rows[1:]:
            if not row.strip():
                continue
            t_tok, load_tok = row.split(",")
            t.append(float(t_tok))
            load.append(float(load_tok))
        if len(load) < 2:
            raise ValueError(f"{path}: need at least 2 samples")
        return cls(samples=np.array(load), period=t[1] - t[0], label=label)


@dataclass(frozen=True)
class TrafficSpec:
    """Parameters for one synthetic series.

    ``baseline + amplitude`` is the peak load and must stay within 5% of
    the saturation rate of the scheme pair under study, so generated
    traffic can brush against but not bury the unstable region.
    """

    kind: TrafficKind
    amplitude: float = 5.0
    baseline: float = 4.0
    period_samples: int = 48
    noise_std: float = 0.2
    seed: int = 42
    length: int = 480
    saturation_load: float = DEFAULT_SATURATION_LOAD

    def __post_init__(self) -> None:
        if self.kind not in ("T1", "T2", "T3"):
            raise InvalidSpecError(f"unknown traffic kind {self.kind!r}")
        if self.baseline < 0 or self.amplitude < 0:
            raise InvalidSpecError("baseline and amplitude must be >= 0")
        if self.noise_std < 0:
            raise InvalidSpecError("noise_std must be >= 0")
        if self.period_samples < 1:
            raise InvalidSpecError("period_samples must be >= 1")
        if self.length < 2:
            raise InvalidSpecError("length must be >= 2")
        peak = self.baseline + self.amplitude
        if peak > 1.05 * self.saturation_load:
            raise InvalidSpecError(
                f"peak load {peak:g} exceeds 1.05 * saturation load "
                f"({1.05 * self.saturation_load:g})"
            )


def _profile(kind: TrafficKind, phase: np.ndarray) -> np.ndarray:
    """Normalized load profile in [0, 1] as a function of cycle phase."""
    theta = 2.0 * math.pi * phase
    if kind == "T1":
        return np.maximum(0.0, np.sin(theta))
    if kind == "T2":
        morning = np.maximum(0.0, np.sin(theta))
        evening = np.maximum(0.0, -np.sin(theta))
        return morning + 0.75 * evening
    # T3: piecewise low plateau / ramp / peak plateau / mid step / low
    out = np.empty_like(phase)
    low, ramp_end, peak_end, mid_end = 1.0 / 3.0, 7.0 / 12.0, 17.0 / 24.0, 5.0 / 6.0
    for i, p in enumerate(phase):
        if p < low:
            out[i] = 0.1
        elif p < ramp_end:
            out[i] = 0.1 + 0.9 * (p - low) / (ramp_end - low)
        elif p < peak_end:
            out[i] = 1.0
        elif p < mid_end:
            out[i] = 0.55
        else:
            out[i] = 0.1
    return out


def generate(spec: TrafficSpec) -> TrafficSeries:
    """Render a spec into a series: profile, additive noise, clamp at zero.

    Deterministic for a fixed seed (PCG64 stream).  The noiseless profile
    is exactly periodic in ``period_samples``.
    """
    k = np.arange(spec.length)
    phase = (k % spec.period_samples) / spec.period_samples
    clean = spec.baseline + spec.amplitude * _profile(spec.kind, phase)
    rng = np.random.default_rng(spec.seed)
    noisy = clean + rng.normal(0.0, spec.noise_std, size=spec.length)
    return TrafficSeries(samples=np.maximum(noisy, 0.0), period=1.0, label=spec.kind)


def noiseless(spec: TrafficSpec) -> TrafficSeries:
    """The closed-form profile of a spec with the noise turned off."""
    k = np.arange(spec.length)
    phase = (k % spec.period_samples) / spec.period_samples
    clean = spec.baseline + spec.amplitude * _profile(spec.kind, phase)
    return TrafficSeries(samples=clean, period=1.0, label=spec.kind)


def split(
    series: TrafficSeries, train_fraction: float, window: int | None = None
) -> tuple[TrafficSeries, TrafficSeries]:
    """Chronological train/test split (no shuffling: this is a time series).

    When ``window`` is given, each part must hold at least ``window + 1``
    samples so it can host one prediction pair.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(series)
    n_train = int(train_fraction * n)
    min_len = max(2, (window + 1) if window is not None else 2)
    if n_train < min_len or n - n_train < min_len:
        raise TooShortError(
            f"split {n_train}/{n - n_train} of {n} samples cannot host "
            f"{min_len} samples per part"
        )
    train = TrafficSeries(series.samples[:n_train], series.period, series.label)
    test = TrafficSeries(series.samples[n_train:], series.period, series.label)
    return train, test


_DEFAULT_SEEDS = {"T1": 42, "T2": 43, "T3": 44}


def default_spec(kind: TrafficKind, seed: int | None = None) -> TrafficSpec:
    """The study defaults for one traffic type (distinct seed per type)."""
    return TrafficSpec(kind=kind, seed=_DEFAULT_SEEDS[kind] if seed is None else seed)
