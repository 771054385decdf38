"""Uniform time series, one-sided DFT magnitude spectra and bandwidth estimation.

The canonical time unit is the sampling *interval* in seconds; the rate in
Hz is always derived as ``1 / interval``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntervalNotPositive, NonFiniteValue, TooShort

__all__ = [
    "Signal",
    "Spectrum",
    "make_signal",
    "mean",
    "dft_magnitude",
    "estimate_f_max",
]


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled series: ``values[i]`` was taken at ``start_time + i * interval``."""

    start_time: float
    interval: float
    values: np.ndarray

    def __post_init__(self):
        interval = float(self.interval)
        if not np.isfinite(interval) or interval <= 0:
            raise IntervalNotPositive(f"interval must be finite and > 0, got {self.interval!r}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise TooShort("values must be one-dimensional")
        if values.size < 2:
            raise TooShort(f"need at least 2 samples, got {values.size}")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise NonFiniteValue(f"non-finite value at index {bad}")
        object.__setattr__(self, "start_time", float(self.start_time))
        object.__setattr__(self, "interval", interval)
        object.__setattr__(self, "values", _frozen(values))

    __hash__ = None

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return self.same_grid(other) and np.array_equal(self.values, other.values)

    @property
    def rate(self) -> float:
        return 1.0 / self.interval

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(len(self)) * self.interval

    def same_grid(self, other: "Signal") -> bool:
        return (
            len(self) == len(other)
            and self.start_time == other.start_time
            and self.interval == other.interval
        )

    def with_values(self, values) -> "Signal":
        """Same grid, new values."""
        return Signal(self.start_time, self.interval, values)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided magnitude spectrum, bins ``0 .. n_samples // 2``."""

    bin_width: float
    magnitudes: np.ndarray
    source_rate: float
    n_samples: int

    def __post_init__(self):
        object.__setattr__(self, "magnitudes", _frozen(self.magnitudes))

    __hash__ = None

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.magnitudes.size) * self.bin_width

    @property
    def nyquist(self) -> float:
        return self.source_rate / 2.0

    def two_sided_energy(self) -> float:
        """Sum of ``|X_k|**2`` over the full two-sided spectrum."""
        power = self.magnitudes ** 2
        # every bin except DC (and Nyquist, for even N) has a mirror image
        mirrored = power[1:-1].sum() if self.n_samples % 2 == 0 else power[1:].sum()
        return float(power.sum() + mirrored)


def make_signal(start_time: float, interval: float, values) -> Signal:
    return Signal(start_time, interval, values)


def mean(signal: Signal) -> float:
    return float(np.mean(signal.values))


def dft_magnitude(signal: Signal) -> Spectrum:
    """Unwindowed, unnormalized DFT magnitudes ``|X_k|`` for ``k = 0 .. N//2``.

    No scaling is applied, so ``sum(x**2) == spectrum.two_sided_energy() / N``.
    """
    n = len(signal)
    if n < 2:
        raise TooShort(f"need at least 2 samples, got {n}")
    mags = np.abs(np.fft.rfft(signal.values))
    return Spectrum(
        bin_width=signal.rate / n,
        magnitudes=mags,
        source_rate=signal.rate,
        n_samples=n,
    )


def estimate_f_max(spectrum: Spectrum, power_fraction: float = 0.99) -> float:
    """Lowest bin frequency holding ``power_fraction`` of the non-DC power.

    Returns 0.0 for a spectrum with no power outside bin 0.
    """
    if not 0 < power_fraction <= 1:
        raise ValueError(f"power_fraction must be in (0, 1], got {power_fraction}")
    power = spectrum.magnitudes[1:] ** 2
    if power.size == 0:
        return 0.0
    cumulative = np.cumsum(power)
    total = cumulative[-1]
    if total <= 0:
        return 0.0
    k = int(np.searchsorted(cumulative, power_fraction * total, side="left"))
    k = min(k, power.size - 1)
    return float((k + 1) * spectrum.bin_width)
