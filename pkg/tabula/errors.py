"""Exception hierarchy.

Every error belongs to one of three families, and the command line front end maps the family to its exit code:

- :class:`UsageError` (exit 2): the caller asked for something impossible, e.g. an out-of-range argument.
- :class:`DataError` (exit 3): the data itself is unusable for the requested operation.
- :class:`NumericError` (exit 4): a numerical procedure failed, e.g. a solver did not converge.
"""


class TabulaError(Exception):
    exit_code = 1


class UsageError(TabulaError, ValueError):
    exit_code = 2


class DataError(TabulaError, ValueError):
    exit_code = 3


class NumericError(TabulaError, ArithmeticError):
    exit_code = 4


# usage errors


class FractionOutOfRange(UsageError):
    pass


class OrderOutOfRange(UsageError):
    pass


class KTooLarge(UsageError):
    pass


class KExceedsData(UsageError):
    pass


class KRangeInvalid(UsageError):
    pass


class EmptySpace(UsageError):
    pass


class InvalidEps(UsageError):
    pass


class PTooLarge(UsageError):
    pass


# data errors


class MissingValue(DataError):
    def __init__(self, row: int, column: str) -> None:
        super().__init__(f"missing value in row {row} of column '{column}'")
        self.row = row
        self.column = column


class DuplicateHeader(DataError):
    pass


class EmptyFile(DataError):
    pass


class RaggedRow(DataError):
    pass


class UnknownColumn(DataError):
    pass


class LengthMismatch(DataError):
    pass


class ShapeMismatch(DataError):
    pass


class Empty(DataError):
    pass


class ConstantColumn(DataError):
    def __init__(self, column: str) -> None:
        super().__init__(f"column '{column}' is constant and cannot be scaled")
        self.column = column


class NonNumericFeature(DataError):
    pass


class NonBinaryEntry(DataError):
    pass


class NegativeWeight(DataError):
    pass


class StratifyWithoutLabels(DataError):
    pass


class ClassTooSmall(DataError):
    pass


class NotBinary(DataError):
    pass


class UnknownCategoryAtPredict(DataError):
    pass


class ValidationRequiredForPostPrune(DataError):
    pass


class AsymmetricMatrix(DataError):
    pass


class NegativeDistance(DataError):
    pass


class SingleCluster(DataError):
    pass


class AllRowsInAllBags(DataError):
    pass


class TooFewRows(DataError):
    pass


# numeric errors


class NoConvergence(NumericError):
    def __init__(self, procedure: str, max_iter: int) -> None:
        super().__init__(f"{procedure} did not converge within {max_iter} iterations")
        self.procedure = procedure
        self.max_iter = max_iter


class RankDeficient(NumericError):
    pass


class SingularCovariance(NumericError):
    pass


class NoUsefulWeakLearner(NumericError):
    pass
