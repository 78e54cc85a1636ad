"""Exceptions raised by trlearn.

Every class derives from the builtin that plain numpy/scipy code would
raise in the same situation, so ``except ValueError`` keeps working.
"""
from typing import Optional, Union
from pathlib import Path


class TRLearnError(Exception):
    """Base class of all trlearn errors."""

    exit_code = 1


class DimensionError(TRLearnError, ValueError):
    """Shapes do not agree, inputs are empty or segments are malformed."""

    exit_code = 2


class InputError(DimensionError):
    """A data file could not be parsed."""

    def __init__(
        self,
        msg: str,
        path: Union[str, Path, None] = None,
        row: Optional[int] = None,
        col: Optional[int] = None,
    ):
        self.path = path
        self.row = row
        self.col = col
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"line {row}")
        if col is not None:
            where.append(f"column {col}")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)


class ConfigError(TRLearnError, ValueError):
    exit_code = 4


class ContractError(TRLearnError, ValueError):
    exit_code = 4


class NumericError(TRLearnError, ArithmeticError):
    exit_code = 3


class RankError(NumericError):
    pass


class ConditioningError(NumericError):
    pass


class DegenerateError(NumericError):
    pass


class SingularSystemError(NumericError):
    """A segment correction block `I - H_kk - 1/n` is (nearly) singular."""

    def __init__(
        self,
        msg: str,
        segment: Optional[int] = None,
        lambda_index: Optional[int] = None,
    ):
        self.segment = segment
        self.lambda_index = lambda_index
        super().__init__(msg)


class LeverageOverflowError(NumericError):
    """A leverage denominator `1 - h_i - correction_i` is not positive."""

    def __init__(self, msg: str, sample: int, lambda_index: int):
        self.sample = sample
        self.lambda_index = lambda_index
        super().__init__(msg)
