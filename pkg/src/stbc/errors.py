"""Exception types shared across the package."""


class StbcError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(StbcError):
    pass


class RankDeficient(StbcError):
    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column} is numerically rank deficient")


class NormalizationViolated(StbcError):
    pass


class UnitarityViolated(StbcError):
    pass


class OutOfRange(StbcError):
    pass


class BudgetExceeded(StbcError):
    pass


class NotFastDecodable(StbcError):
    pass


class WrongStructure(StbcError):
    pass


class ZeroDifference(StbcError):
    pass


class ConfigInvalid(StbcError):
    pass


class MissingResults(StbcError):
    pass
