"""Cost model, transmission energy, battery life and the rate search.

Intervals are in seconds throughout. ``transmissions_per_hour(5) == 720``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict, fields
from typing import Optional, Sequence

from .errors import ConfigError, IntervalNotPositive, NoFeasibleRate, TooShort
from .metrics import ErrorReport, error_report
from .resampling import (
    CompensationConfig,
    DecimationPlan,
    compensate,
    decimate,
    reconstruct_hold,
)
from .signal_core import Signal, dft_magnitude, estimate_f_max

__all__ = [
    "CostModel",
    "RateReport",
    "DEFAULT_FACTORS",
    "transmissions_per_hour",
    "transmission_ratio",
    "energy_per_hour",
    "battery_life",
    "cost",
    "evaluate_factor",
    "evaluate_table",
    "optimize_rate",
    "select_best",
]

DEFAULT_FACTORS = (1, 5, 10, 15, 20)
SECONDS_PER_HOUR = 3600.0


@dataclass(frozen=True)
class CostModel:
    """Weights and energy constants for the sampling-rate cost.

    ``E_unit`` prices a transmission inside the cost function; ``E_t`` is the
    same quantity as used by the battery model. ``E_b`` is standby energy per
    hour.
    """

    k_a: float = 1.0
    k_t: float = 1.0
    lam: float = 0.0
    E_unit: float = 1.0
    E_b: float = 0.0
    E_t: float = 1.0
    E_target: float = 0.02

    def __post_init__(self):
        for name in ("k_a", "k_t", "lam", "E_unit", "E_b", "E_t"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ConfigError(f"{name} must be finite and >= 0, got {v}")
        if not 0 < self.E_target < 1:
            raise ConfigError(f"E_target must be in (0, 1), got {self.E_target}")

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> "CostModel":
        d = dict(d or {})
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown cost model keys: {sorted(unknown)}")
        try:
            return cls(**{k: float(v) for k, v in d.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad cost model value: {exc}") from None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def _check_interval(interval: float):
    if not interval > 0:
        raise IntervalNotPositive(f"interval must be > 0 s, got {interval}")


def transmissions_per_hour(interval: float) -> float:
    _check_interval(interval)
    return SECONDS_PER_HOUR / interval


def transmission_ratio(interval_a: float, interval_b: float) -> float:
    """How many times more often a sensor transmits at ``interval_a`` than at ``interval_b``."""
    _check_interval(interval_a)
    _check_interval(interval_b)
    return interval_b / interval_a


def energy_per_hour(interval: float, model: CostModel) -> float:
    return model.E_b + transmissions_per_hour(interval) * model.E_t


def battery_life(interval_new: float, interval_ref: float, life_ref: float,
                 model: CostModel) -> float:
    """Project battery life at ``interval_new`` from a known life at ``interval_ref``.

    Life scales inversely with hourly energy draw, so with no standby load
    ``battery_life(5, 1, 1440, model) == 7200``.
    """
    _check_interval(interval_new)
    _check_interval(interval_ref)
    if not life_ref > 0:
        raise IntervalNotPositive(f"reference life must be > 0 h, got {life_ref}")
    if model.E_b == 0:
        # exact form; avoids rounding through 3600/interval
        return life_ref * interval_new / interval_ref
    return life_ref * energy_per_hour(interval_ref, model) / energy_per_hour(interval_new, model)


def cost(rate: float, e_relative: float, model: CostModel) -> float:
    if not rate > 0:
        raise ValueError(f"rate must be > 0 Hz, got {rate}")
    if not e_relative >= 0:
        raise ValueError(f"e_relative must be >= 0, got {e_relative}")
    return model.k_a * rate + model.k_t * rate * model.E_unit + model.lam * e_relative


@dataclass(frozen=True)
class RateReport:
    factor: int
    interval: float
    rate: float
    compensated: ErrorReport
    uncompensated: ErrorReport
    transmissions_per_hour: float
    energy_per_hour: float
    cost: float
    feasible: bool


def evaluate_factor(signal: Signal, factor: int, config: CompensationConfig,
                    model: CostModel, f_max: float,
                    error_source: str = "compensated") -> RateReport:
    """Run both pipelines at one decimation factor and price the result."""
    plan = DecimationPlan(factor)
    kept = decimate(signal, plan)
    if factor > 1 and len(kept) < 3:
        raise TooShort(f"factor {factor} leaves only {len(kept)} samples (need 3)")
    held = reconstruct_hold(kept, signal)
    rebuilt = compensate(signal, plan, config)
    f_new = kept.rate
    comp = error_report(signal, rebuilt, f_new, f_max)
    uncomp = error_report(signal, held, f_new, f_max)
    chosen = comp if error_source == "compensated" else uncomp
    e_rel = chosen.l2_relative
    if e_rel is None:
        # zero-norm original: the only reconstruction we can trust is exact
        e_rel = 0.0 if factor == 1 else math.inf
    interval = kept.interval
    return RateReport(
        factor=factor,
        interval=interval,
        rate=f_new,
        compensated=comp,
        uncompensated=uncomp,
        transmissions_per_hour=transmissions_per_hour(interval),
        energy_per_hour=energy_per_hour(interval, model),
        cost=cost(f_new, e_rel, model) if math.isfinite(e_rel) else math.inf,
        feasible=e_rel <= model.E_target,
    )


def select_best(table: Sequence[RateReport],
                candidates: Optional[Sequence[int]] = None) -> Optional[RateReport]:
    """Cheapest feasible entry among ``candidates`` (default: all); ties go to the larger factor."""
    best = None
    for r in table:
        if not r.feasible or (candidates is not None and r.factor not in candidates):
            continue
        if best is None or r.cost < best.cost or (r.cost == best.cost and r.factor > best.factor):
            best = r
    return best


def _validated_factors(factors) -> list:
    factors = list(factors)
    if not factors:
        raise ValueError("factors must be non-empty")
    for f in factors:
        if int(f) != f or f < 1:
            raise ValueError(f"factors must be integers >= 1, got {f}")
    return sorted(set(int(f) for f in factors))


def evaluate_table(signal: Signal, factors: Sequence[int] = DEFAULT_FACTORS,
                   config: CompensationConfig = CompensationConfig(),
                   model: CostModel = CostModel(),
                   error_source: str = "compensated",
                   max_workers: Optional[int] = None,
                   power_fraction: float = 0.99) -> list:
    """One :class:`RateReport` per factor (factor 1 always included), sorted by factor.

    ``max_workers`` > 1 evaluates factors on a thread pool; the table is the
    same either way.
    """
    if error_source not in ("compensated", "uncompensated"):
        raise ValueError(f"error_source must be 'compensated' or 'uncompensated', got {error_source!r}")
    factors = sorted(set(_validated_factors(factors)) | {1})
    f_max = estimate_f_max(dft_magnitude(signal), power_fraction)

    def run(f):
        return evaluate_factor(signal, f, config, model, f_max, error_source)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(run, factors))
    return [run(f) for f in factors]


def optimize_rate(signal: Signal, factors: Sequence[int] = DEFAULT_FACTORS,
                  config: CompensationConfig = CompensationConfig(),
                  model: CostModel = CostModel(),
                  error_source: str = "compensated",
                  max_workers: Optional[int] = None,
                  power_fraction: float = 0.99):
    """Evaluate every candidate factor and pick the cheapest feasible one.

    Factor 1 is always evaluated and kept in the table as the baseline, but it
    only competes for ``best`` when listed in ``factors``. Returns
    ``(best, table)``. Raises :class:`NoFeasibleRate` (carrying the table)
    when no listed factor meets ``model.E_target``.
    """
    candidates = _validated_factors(factors)
    table = evaluate_table(signal, candidates, config, model, error_source,
                           max_workers, power_fraction)
    best = select_best(table, candidates)
    if best is None:
        raise NoFeasibleRate(table, model.E_target)
    return best, table
