"""Exception types shared across the package."""


class QutritLabError(Exception):
    pass


class NonSquare(QutritLabError, ValueError):
    pass


class NotHermitian(QutritLabError, ValueError):
    pass


class InvalidDensityMatrix(QutritLabError, ValueError):
    pass


class BadSubsystem(QutritLabError, ValueError):
    pass


class BadDimension(QutritLabError, ValueError):
    pass


class DomainError(QutritLabError, ValueError):
    """A parameter lies outside the range where a formula or filter is defined."""


class ZeroSuccessProbability(QutritLabError, ArithmeticError):
    pass


class NotDistillable(QutritLabError):
    """The state satisfies the reduction criterion, so no filter is available."""


class ConvergenceWarning(UserWarning):
    pass


class RankDeficientWarning(UserWarning):
    pass
