"""Field CSV loading, regularization onto a uniform grid, synthetic corpora.

Field data has outages, so :func:`regularize` fills short gaps linearly and
splits the record at long ones, keeping the longest contiguous segment.
The synthetic generator stands in for field recordings in tests and in
acceptance runs.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .errors import (
    ConfigError,
    EmptyInput,
    GapTooSparse,
    MalformedRow,
    NonMonotonicTime,
    SpecInvalid,
)
from .signal_core import Signal

__all__ = [
    "RawSeries",
    "Regularized",
    "SyntheticSpec",
    "parse_csv",
    "write_csv",
    "regularize",
    "generate",
    "load_document",
    "synthetic_spec_from_dict",
    "synthetic_spec_from_document",
]

SYNTHETIC_KINDS = ("sum_of_sines", "step", "spike_train")


@dataclass(frozen=True, eq=False)
class RawSeries:
    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.timestamps, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise EmptyInput("timestamps and values must be 1-D and of equal length")
        if t.size < 2:
            raise EmptyInput(f"need at least 2 rows, got {t.size}")
        if np.any(np.diff(t) <= 0):
            i = int(np.flatnonzero(np.diff(t) <= 0)[0])
            raise NonMonotonicTime(f"timestamp {t[i + 1]!r} at row {i + 1} does not increase")
        object.__setattr__(self, "timestamps", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.timestamps.size

    @classmethod
    def from_signal(cls, signal: Signal) -> "RawSeries":
        return cls(signal.times, signal.values)


def _parse_time(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        pass
    s = text.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def parse_csv(source, time_column: str = "t", value_column: str = "v") -> RawSeries:
    """Parse a headed CSV (bytes, str, path or binary/text stream) into a RawSeries.

    The time column may hold epoch seconds or ISO-8601 stamps; naive ISO
    stamps are taken as UTC. Line numbers in errors are 1-based and count
    the header.
    """
    if isinstance(source, Path):
        source = source.read_bytes()
    elif hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        source = bytes(source).decode("utf-8-sig")
    if not source.strip():
        raise EmptyInput("CSV input is empty")

    reader = csv.reader(io.StringIO(source))
    header = [h.strip() for h in next(reader)]
    for col in (time_column, value_column):
        if col not in header:
            raise MalformedRow(1, f"column {col!r} not in header {header}")
    ti, vi = header.index(time_column), header.index(value_column)

    times, values = [], []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= max(ti, vi):
            raise MalformedRow(line, f"expected at least {max(ti, vi) + 1} fields, got {len(row)}")
        try:
            t = _parse_time(row[ti])
        except ValueError:
            raise MalformedRow(line, f"unparseable time {row[ti]!r}") from None
        try:
            v = float(row[vi])
        except ValueError:
            raise MalformedRow(line, f"unparseable value {row[vi]!r}") from None
        if not (math.isfinite(t) and math.isfinite(v)):
            raise MalformedRow(line, "non-finite time or value")
        if times and t <= times[-1]:
            raise NonMonotonicTime(f"line {line}: time {row[ti]!r} does not increase")
        times.append(t)
        values.append(v)

    if len(times) < 2:
        raise EmptyInput(f"need at least 2 data rows, got {len(times)}")
    return RawSeries(np.array(times), np.array(values))


def write_csv(raw: RawSeries, time_column: str = "t", value_column: str = "v") -> str:
    """Serialize with shortest round-trip float reprs (the inverse of parse_csv)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([time_column, value_column])
    for t, v in zip(raw.timestamps.tolist(), raw.values.tolist()):
        writer.writerow([repr(t), repr(v)])
    return out.getvalue()


@dataclass(frozen=True)
class Regularized:
    signal: Signal
    segments: list  # (start_time, end_time) of every contiguous segment found
    filled: int     # grid points in the kept segment that had no raw sample


def regularize(raw: RawSeries, max_gap_factor: float = 3.0) -> Regularized:
    """Resample ``raw`` onto a uniform grid at its median timestamp spacing.

    Gaps up to ``max_gap_factor`` nominal intervals are bridged by linear
    interpolation; longer gaps split the record. The longest segment is kept
    (the earliest one on ties).
    """
    if max_gap_factor <= 1:
        raise ValueError(f"max_gap_factor must be > 1, got {max_gap_factor}")
    t, v = raw.timestamps, raw.values
    dt = np.diff(t)
    interval = float(np.median(dt))
    breaks = np.flatnonzero(dt > max_gap_factor * interval) + 1
    bounds = np.concatenate(([0], breaks, [t.size]))
    segments = [(float(t[a]), float(t[b - 1])) for a, b in zip(bounds[:-1], bounds[1:])]

    best, best_len = None, 0
    for a, b in zip(bounds[:-1], bounds[1:]):
        n_grid = int(math.floor((t[b - 1] - t[a]) / interval + 1e-9)) + 1
        if n_grid > best_len:
            best, best_len = (a, b), n_grid
    if best_len < 2:
        raise GapTooSparse(
            f"no contiguous segment with >= 2 samples at interval {interval:g} s"
        )

    a, b = best
    seg_t, seg_v = t[a:b], v[a:b]
    grid = seg_t[0] + np.arange(best_len) * interval
    if np.array_equal(grid, seg_t):
        values = seg_v.copy()
    else:
        values = np.interp(grid, seg_t, seg_v)
    filled = int(max(best_len - (b - a), 0))
    return Regularized(Signal(float(seg_t[0]), interval, values), segments, filled)


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a deterministic synthetic signal.

    Every kind starts from ``offset`` plus the sine ``components``
    (``(frequency_hz, amplitude, phase_rad)`` triples). ``step`` adds
    piecewise-constant level changes, ``spike_train`` adds isolated
    one-sample spikes every ``spike_period`` seconds. ``dropouts`` are
    ``(start, end)`` spans forced to zero, like a shut-in well.
    """

    kind: str = "sum_of_sines"
    duration: float = 3600.0
    rate: float = 1.0
    components: tuple = ()
    noise_std: float = 0.0
    seed: int = 0
    offset: float = 0.0
    steps: tuple = ()          # (time_s, new_level) pairs, applied cumulatively in time order
    spike_period: float = 0.0
    spike_amplitude: float = 0.0
    spike_phase: float = 0.0
    dropouts: tuple = ()
    alias_test: bool = False

    def __post_init__(self):
        if self.kind not in SYNTHETIC_KINDS:
            raise SpecInvalid(f"kind must be one of {SYNTHETIC_KINDS}, got {self.kind!r}")
        if not (self.rate > 0 and self.duration > 0):
            raise SpecInvalid("rate and duration must be positive")
        if self.duration * self.rate < 2:
            raise SpecInvalid("duration * rate must give at least 2 samples")
        if self.noise_std < 0:
            raise SpecInvalid("noise_std must be >= 0")
        comps = tuple(tuple(float(x) for x in c) for c in self.components)
        for c in comps:
            if len(c) != 3:
                raise SpecInvalid(f"component must be (frequency, amplitude, phase), got {c}")
            if not self.alias_test and c[0] >= self.rate / 2:
                raise SpecInvalid(
                    f"component at {c[0]} Hz is at/above Nyquist {self.rate / 2} Hz "
                    "(set alias_test to allow it)"
                )
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "steps", tuple(tuple(float(x) for x in s) for s in self.steps))
        object.__setattr__(self, "dropouts", tuple(tuple(float(x) for x in d) for d in self.dropouts))
        if self.kind == "spike_train" and self.spike_period <= 0:
            raise SpecInvalid("spike_train needs spike_period > 0")

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("components", "steps", "dropouts"):
            d[key] = [list(x) for x in d[key]]
        return d


def generate(spec: SyntheticSpec) -> Signal:
    n = int(round(spec.duration * spec.rate))
    interval = 1.0 / spec.rate
    t = np.arange(n) * interval
    x = np.full(n, spec.offset, dtype=float)
    for freq, amp, phase in spec.components:
        x += amp * np.sin(2 * np.pi * freq * t + phase)

    if spec.kind == "step":
        level = 0.0
        for when, new_level in sorted(spec.steps):
            x[t >= when] += new_level - level
            level = new_level
    elif spec.kind == "spike_train":
        spike_times = np.arange(spec.spike_phase, spec.duration, spec.spike_period)
        idx = np.unique(np.round(spike_times * spec.rate).astype(int))
        idx = idx[idx < n]
        x[idx] += spec.spike_amplitude

    if spec.noise_std > 0:
        rng = np.random.default_rng(spec.seed)
        x += rng.normal(0.0, spec.noise_std, size=n)
    for start, end in spec.dropouts:
        x[(t >= start) & (t < end)] = 0.0
    return Signal(0.0, interval, x)


def synthetic_spec_from_dict(d: dict) -> SyntheticSpec:
    known = SyntheticSpec.__dataclass_fields__
    unknown = set(d) - set(known)
    if unknown:
        raise SpecInvalid(f"unknown synthetic spec keys: {sorted(unknown)}")
    return SyntheticSpec(**d)


def load_document(path) -> dict:
    """Read a YAML (or JSON) configuration document into a dict."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must be a mapping at top level")
    return doc


def synthetic_spec_from_document(doc: dict, seed: Optional[int] = None) -> SyntheticSpec:
    """Take the ``synthetic`` section if present, otherwise the top level."""
    section = doc.get("synthetic", None)
    if section is None:
        section = {k: v for k, v in doc.items() if k not in ("compensation", "cost")}
    section = dict(section)
    if seed is not None:
        section["seed"] = seed
    return synthetic_spec_from_dict(section)
