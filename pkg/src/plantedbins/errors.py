"""Exception types raised by the library."""


class PlantedBinsError(Exception):
    """Base class for all library errors."""


class InvalidPlanting(PlantedBinsError):
    """Planting counts are empty, negative, or inconsistent with n."""


class DegeneratePlanting(PlantedBinsError):
    """Operation needs a planting with k > 0 (k = 0 makes both models identical)."""


class NotEnoughBalls(PlantedBinsError):
    """m < k: fewer balls in total than in the planted arrangement."""


class DimensionMismatch(PlantedBinsError):
    """Planting and configuration have different bin counts."""


class UndefinedForEmpty(PlantedBinsError):
    """Statistic undefined for a configuration with zero balls."""


class UnsupportedPower(PlantedBinsError):
    """Power-sum statistic only defined for exponents 1 through 4."""


class NoThresholdDefined(PlantedBinsError):
    """The pair-count statistic has no decision threshold."""


class EnumerationTooLarge(PlantedBinsError):
    """Configuration space exceeds the enumeration cap."""


class ScaleTooLarge(PlantedBinsError):
    """Scaled ball count m exceeds the configured maximum."""


class UndefinedErrorTerm(PlantedBinsError):
    """Exact correction term undefined: an occupied planted bin is empty."""


class DegenerateStandardization(PlantedBinsError):
    """Cannot standardize a statistic whose predicted variance is zero."""


class InvalidScale(PlantedBinsError):
    """Regime scale constant c is missing or non-positive."""
