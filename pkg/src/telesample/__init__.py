"""Pick the lowest telemetry sampling rate whose reconstruction stays accurate."""

from .errors import *  # noqa: F401,F403
from .signal_core import Signal, Spectrum, make_signal, mean, dft_magnitude, estimate_f_max
from .ingestion import RawSeries, SyntheticSpec, parse_csv, write_csv, regularize, generate
from .resampling import (
    CompensationConfig,
    DecimationPlan,
    decimate,
    reconstruct_hold,
    hampel_filter,
    reconstruct_cubic,
    compensate,
)
from .metrics import (
    ErrorReport,
    relative_l2_error,
    mean_relative_error,
    aliasing_error,
    relative_aliasing_error,
    error_report,
)
from .optimization import (
    CostModel,
    RateReport,
    transmissions_per_hour,
    transmission_ratio,
    energy_per_hour,
    battery_life,
    cost,
    optimize_rate,
)

__version__ = "0.1.0"
