"""Reconstruction quality: relative L2 (shape), mean-difference, aliasing.

All metrics compare a reconstruction against the original on the
original's grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GridMismatch, ZeroMeanOriginal, ZeroNormOriginal
from .signal_core import Signal, Spectrum, dft_magnitude

__all__ = [
    "ErrorReport",
    "relative_l2_error",
    "mean_relative_error",
    "aliasing_error",
    "relative_aliasing_error",
    "error_report",
]


@dataclass(frozen=True)
class ErrorReport:
    """The three quality measures; a metric is ``None`` when undefined for the input.

    ``aliasing`` is the band-limited spectral difference normalized by the
    original's integrated spectrum (dimensionless); ``aliasing_raw`` is the
    un-normalized integral in magnitude x Hz.
    """

    l2_relative: Optional[float]
    mean_relative: Optional[float]
    aliasing: Optional[float]
    aliasing_raw: Optional[float] = None

    def __post_init__(self):
        for name in ("l2_relative", "mean_relative", "aliasing", "aliasing_raw"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


def _check_grid(original: Signal, rebuilt: Signal):
    if not original.same_grid(rebuilt):
        raise GridMismatch(
            f"grids differ: original (start {original.start_time}, interval "
            f"{original.interval}, N {len(original)}) vs rebuilt (start "
            f"{rebuilt.start_time}, interval {rebuilt.interval}, N {len(rebuilt)})"
        )


def relative_l2_error(original: Signal, rebuilt: Signal) -> float:
    _check_grid(original, rebuilt)
    norm = np.linalg.norm(original.values)
    if norm == 0:
        raise ZeroNormOriginal("original has zero L2 norm; relative error undefined")
    return float(np.linalg.norm(original.values - rebuilt.values) / norm)


def mean_relative_error(original: Signal, rebuilt: Signal) -> float:
    _check_grid(original, rebuilt)
    m = float(np.mean(original.values))
    if m == 0:
        raise ZeroMeanOriginal("original has zero mean; mean-relative error undefined")
    return abs(m - float(np.mean(rebuilt.values))) / abs(m)


def _band(spectrum: Spectrum, f_low: float, f_max: float) -> np.ndarray:
    upper = min(2.0 * f_max, spectrum.nyquist)
    f = spectrum.frequencies
    return (f >= f_low) & (f <= upper)


def _trapezoid(y: np.ndarray, dx: float) -> float:
    if y.size < 2:
        return 0.0
    return float(dx * (y.sum() - 0.5 * (y[0] + y[-1])))


def _resolved_magnitudes(signal: Signal) -> np.ndarray:
    # bins under the FFT round-off floor carry no resolvable content
    spec = dft_magnitude(signal)
    floor = len(signal) * np.finfo(float).eps * float(np.max(np.abs(signal.values)))
    return np.where(spec.magnitudes > floor, spec.magnitudes, 0.0)


def aliasing_error(original: Signal, rebuilt: Signal, f_s_new: float, f_max: float) -> float:
    """Trapezoid integral of ``| |X_orig(f)| - |X_rebuilt(f)| |`` over ``[f_s_new, 2 f_max]``.

    The upper limit is clamped to the original Nyquist frequency. A band
    holding fewer than two bins integrates to 0. Magnitudes below
    ``N * eps * max|x|`` are FFT round-off and count as zero.
    """
    _check_grid(original, rebuilt)
    if not f_s_new > 0:
        raise ValueError(f"f_s_new must be > 0, got {f_s_new}")
    so = dft_magnitude(original)
    band = _band(so, f_s_new, f_max)
    diff = np.abs(_resolved_magnitudes(original)[band] - _resolved_magnitudes(rebuilt)[band])
    return _trapezoid(diff, so.bin_width)


def relative_aliasing_error(original: Signal, rebuilt: Signal, f_s_new: float,
                            f_max: float) -> float:
    """:func:`aliasing_error` divided by the trapezoid integral of ``|X_orig|`` over all bins."""
    raw = aliasing_error(original, rebuilt, f_s_new, f_max)
    so = dft_magnitude(original)
    total = _trapezoid(so.magnitudes, so.bin_width)
    if total == 0:
        raise ZeroNormOriginal("original has an empty spectrum; relative aliasing undefined")
    return raw / total


def error_report(original: Signal, rebuilt: Signal, f_s_new: float, f_max: float) -> ErrorReport:
    _check_grid(original, rebuilt)
    try:
        l2 = relative_l2_error(original, rebuilt)
    except ZeroNormOriginal:
        l2 = None
    try:
        mean_err = mean_relative_error(original, rebuilt)
    except ZeroMeanOriginal:
        mean_err = None
    raw = aliasing_error(original, rebuilt, f_s_new, f_max)
    so = dft_magnitude(original)
    total = _trapezoid(so.magnitudes, so.bin_width)
    rel = raw / total if total > 0 else None
    return ErrorReport(l2, mean_err, rel, raw)
