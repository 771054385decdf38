"""Decimation and the two ways back onto the original grid.

Uncompensated: zero-order hold, i.e. what a historian shows between
transmissions. Compensated: Hampel outlier filtering of the decimated
stream followed by a natural cubic spline evaluated on the original grid.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.linalg import solve_banded

from .errors import GridMismatch, ResultTooShort, TooFewKnots, TooShortForWindow
from .signal_core import Signal

__all__ = [
    "CompensationConfig",
    "DecimationPlan",
    "LinearFallbackWarning",
    "decimate",
    "reconstruct_hold",
    "hampel_filter",
    "natural_spline_second_derivatives",
    "reconstruct_cubic",
    "compensate",
]

MAD_SCALE = 1.4826
# slack when mapping original-grid timestamps onto decimated sample indices
_INDEX_TOL = 1e-9


class LinearFallbackWarning(UserWarning):
    """Only two knots were available, so the reconstruction is linear."""


@dataclass(frozen=True)
class CompensationConfig:
    hampel_window: int = 7
    hampel_k: float = 3.0
    boundary: str = "natural"

    def __post_init__(self):
        if int(self.hampel_window) != self.hampel_window or self.hampel_window < 3 \
                or self.hampel_window % 2 == 0:
            raise ValueError(f"hampel_window must be an odd integer >= 3, got {self.hampel_window}")
        if not self.hampel_k > 0:
            raise ValueError(f"hampel_k must be > 0, got {self.hampel_k}")
        if self.boundary != "natural":
            raise ValueError(f"only the 'natural' spline boundary is supported, got {self.boundary!r}")
        object.__setattr__(self, "hampel_window", int(self.hampel_window))
        object.__setattr__(self, "hampel_k", float(self.hampel_k))


@dataclass(frozen=True)
class DecimationPlan:
    factor: int
    phase: int = 0

    def __post_init__(self):
        if int(self.factor) != self.factor or self.factor < 1:
            raise ValueError(f"factor must be an integer >= 1, got {self.factor}")
        if int(self.phase) != self.phase or not 0 <= self.phase < self.factor:
            raise ValueError(f"phase must be in [0, {self.factor}), got {self.phase}")

    def kept_indices(self, n: int) -> np.ndarray:
        return np.arange(self.phase, n, self.factor)


def decimate(signal: Signal, plan: DecimationPlan) -> Signal:
    if plan.factor == 1:
        return signal
    kept = plan.kept_indices(len(signal))
    if kept.size < 2:
        raise ResultTooShort(
            f"factor {plan.factor} leaves {kept.size} of {len(signal)} samples"
        )
    return Signal(
        signal.start_time + plan.phase * signal.interval,
        signal.interval * plan.factor,
        signal.values[kept],
    )


def _knot_positions(decimated: Signal, target: Signal) -> np.ndarray:
    """Target timestamps expressed in decimated-sample index units."""
    offset = target.start_time - decimated.start_time
    return (offset + np.arange(len(target)) * target.interval) / decimated.interval


def reconstruct_hold(decimated: Signal, target: Signal) -> Signal:
    """Zero-order hold of ``decimated`` onto the grid of ``target``."""
    if target.start_time < decimated.start_time - _INDEX_TOL * decimated.interval:
        raise GridMismatch(
            f"target grid starts at {target.start_time}, before the first "
            f"decimated sample at {decimated.start_time}"
        )
    if decimated.same_grid(target):
        return decimated
    pos = _knot_positions(decimated, target)
    idx = np.clip(np.floor(pos + _INDEX_TOL).astype(np.int64), 0, len(decimated) - 1)
    return target.with_values(decimated.values[idx])


def _hampel_window_stats(x: np.ndarray, window: int):
    """Median and MAD over centered windows truncated at the edges."""
    n = x.size
    half = window // 2
    med = np.empty(n)
    mad = np.empty(n)
    if n >= window:
        views = sliding_window_view(x, window)
        m = np.median(views, axis=1)
        med[half:n - half] = m
        mad[half:n - half] = np.median(np.abs(views - m[:, None]), axis=1)
    edges = list(range(min(half, n))) + list(range(max(n - half, half), n))
    for i in edges:
        w = x[max(0, i - half):i + half + 1]
        med[i] = np.median(w)
        mad[i] = np.median(np.abs(w - med[i]))
    return med, mad


def hampel_filter(signal: Signal, config: CompensationConfig) -> Signal:
    """Replace samples further than ``k * 1.4826 * MAD`` from their window median.

    Windows are centered and truncated at the ends of the series. The
    comparison is strict, so a window with zero MAD replaces any sample that
    differs from its median (an isolated spike on a flat plateau).
    """
    if len(signal) < config.hampel_window:
        raise TooShortForWindow(
            f"{len(signal)} samples is shorter than the Hampel window {config.hampel_window}"
        )
    x = signal.values
    med, mad = _hampel_window_stats(x, config.hampel_window)
    outliers = np.abs(x - med) > config.hampel_k * MAD_SCALE * mad
    if not outliers.any():
        return signal
    return signal.with_values(np.where(outliers, med, x))


def natural_spline_second_derivatives(y: np.ndarray) -> np.ndarray:
    """Second derivatives at unit-spaced knots of the natural cubic spline through ``y``.

    Solves ``M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1])`` with
    ``M[0] = M[-1] = 0``.
    """
    n = y.size
    m = np.zeros(n)
    if n < 3:
        return m
    rhs = 6.0 * (y[2:] - 2.0 * y[1:-1] + y[:-2])
    k = n - 2
    ab = np.empty((3, k))
    ab[0, :] = 1.0
    ab[1, :] = 4.0
    ab[2, :] = 1.0
    m[1:-1] = solve_banded((1, 1), ab, rhs)
    return m


def _eval_unit_spline(y: np.ndarray, m: np.ndarray, u: np.ndarray) -> np.ndarray:
    n = y.size
    j = np.clip(np.floor(u).astype(np.int64), 0, n - 2)
    s = u - j
    r = 1.0 - s
    out = r * y[j] + s * y[j + 1] + ((r ** 3 - r) * m[j] + (s ** 3 - s) * m[j + 1]) / 6.0
    out[u <= 0] = y[0]
    out[u >= n - 1] = y[-1]
    return out


def reconstruct_cubic(decimated: Signal, target: Signal) -> Signal:
    """Natural cubic spline through ``decimated``, sampled on the grid of ``target``.

    Outside the knot span the nearest endpoint value is held. With exactly
    two knots the result is the straight line between them and a
    :class:`LinearFallbackWarning` is issued.
    """
    n = len(decimated)
    if n < 2:
        raise TooFewKnots(f"need at least 2 knots, got {n}")
    if decimated.same_grid(target):
        return decimated
    if n == 2:
        warnings.warn("2 knots: cubic reconstruction falls back to linear",
                      LinearFallbackWarning, stacklevel=2)
    y = decimated.values
    m = natural_spline_second_derivatives(y)
    u = _knot_positions(decimated, target)
    # snap positions that sit on a knot up to rounding, so knots come back exactly
    nearest = np.rint(u)
    u = np.where(np.abs(u - nearest) < _INDEX_TOL, nearest, u)
    return target.with_values(_eval_unit_spline(y, m, u))


def compensate(signal: Signal, plan: DecimationPlan, config: CompensationConfig) -> Signal:
    """Decimate, Hampel-filter the decimated stream, spline back onto ``signal``'s grid.

    Factor 1 keeps every sample, so there is nothing to reconstruct and the
    original is returned untouched.
    """
    if plan.factor == 1:
        return signal
    kept = decimate(signal, plan)
    if len(kept) >= config.hampel_window:
        kept = hampel_filter(kept, config)
    return reconstruct_cubic(kept, signal)
