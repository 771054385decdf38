"""Exception types raised across the package.

Every error derives from :class:`TelesampleError` (itself a ``ValueError``),
so callers can catch the whole family at once. The CLI maps these to exit
code 2, except :class:`NoFeasibleRate` which maps to 3.
"""


class TelesampleError(ValueError):
    pass


# signal construction
class NonFiniteValue(TelesampleError):
    pass


class IntervalNotPositive(TelesampleError):
    pass


class TooShort(TelesampleError):
    pass


# ingestion
class EmptyInput(TelesampleError):
    pass


class MalformedRow(TelesampleError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


class NonMonotonicTime(TelesampleError):
    pass


class GapTooSparse(TelesampleError):
    pass


class SpecInvalid(TelesampleError):
    pass


class ConfigError(TelesampleError):
    pass


# resampling
class ResultTooShort(TelesampleError):
    pass


class GridMismatch(TelesampleError):
    pass


class TooShortForWindow(TelesampleError):
    pass


class TooFewKnots(TelesampleError):
    pass


# metrics
class ZeroNormOriginal(TelesampleError):
    pass


class ZeroMeanOriginal(TelesampleError):
    pass


class NoFeasibleRate(TelesampleError):
    """No candidate factor satisfies the quality constraint.

    The evaluated table is attached so callers can still report it.
    """

    def __init__(self, table, e_target: float):
        super().__init__(
            f"no candidate factor reaches relative error <= {e_target:g}"
        )
        self.table = table
        self.e_target = e_target
