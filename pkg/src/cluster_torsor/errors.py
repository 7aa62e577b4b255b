"""Exception types shared across the package."""


class ClusterTorsorError(Exception):
    """Base class for all package errors."""


class RankMismatchError(ClusterTorsorError):
    pass


class ZeroInputError(ClusterTorsorError):
    pass


class DenominatorVanishesError(ClusterTorsorError):
    pass


class PsiUNotOrthogonalError(ClusterTorsorError):
    pass


class UnsupportedDenominatorError(ClusterTorsorError):
    """A pullback produced a denominator outside the tracked binomial shape."""


class NotSkewError(ClusterTorsorError):
    pass


class FrozenIndexError(ClusterTorsorError):
    pass


class InvalidSeedError(ClusterTorsorError):
    pass


class NotRegularOnU0Error(ClusterTorsorError):
    pass


class InvalidFanError(ClusterTorsorError):
    pass


class InvalidChartError(ClusterTorsorError):
    pass


class UnsupportedRankError(ClusterTorsorError):
    pass


class UnsupportedBracketError(ClusterTorsorError):
    pass


class TruncatedOnlyError(ClusterTorsorError):
    pass


class NonTransverseError(ClusterTorsorError):
    pass


class InputError(ClusterTorsorError):
    """Malformed user input (CLI exit code 2)."""
