from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple, Union

import numpy as np

from .dataset import Column, Dataset
from .errors import ConstantColumn, UnknownColumn, UsageError
from .serialization import register_model


class ScalerKind(Enum):
    STANDARDIZE = "standardize"
    MIN_MAX = "min-max"

    @classmethod
    def parse(cls, value: Union[str, "ScalerKind"]) -> "ScalerKind":
        if isinstance(value, ScalerKind):
            return value
        for kind in cls:
            if kind.value == value or kind.name.lower() == value.lower().replace("-", "_"):
                return kind
        raise UsageError(f"unknown scaler kind '{value}', expected one of {[kind.value for kind in cls]}")


@dataclass(frozen=True)
class ColumnScale:
    """Statistics of one column: ``(mean, sd)`` for standardization, ``(min, max)`` for min-max scaling."""

    name: str
    kind: ScalerKind
    first: float
    second: float

    def apply(self, values: np.ndarray) -> np.ndarray:
        if self.kind is ScalerKind.STANDARDIZE:
            return (values - self.first) / self.second
        return (values - self.first) / (self.second - self.first)


@register_model("scaler")
@dataclass(frozen=True)
class ScalerParams:
    scales: Tuple[ColumnScale, ...]

    def as_dict(self) -> Dict[str, ColumnScale]:
        return {scale.name: scale for scale in self.scales}


def fit_scaler(dataset: Dataset, kind: Union[str, ScalerKind] = ScalerKind.STANDARDIZE) -> ScalerParams:
    """Per-column statistics of every numeric column.

    Standardization uses the population standard deviation (divides by n), so refitting on scaled data
    gives exactly mean 0 and deviation 1.
    """
    kind = ScalerKind.parse(kind)
    scales = []
    for column in dataset.columns:
        if not column.is_numeric:
            continue
        values = column.array()
        if values.size == 0:
            raise ConstantColumn(column.name)
        if kind is ScalerKind.STANDARDIZE:
            mean = float(values.mean())
            sd = float(np.sqrt(np.mean((values - mean) ** 2)))
            if not sd > 0.0:
                raise ConstantColumn(column.name)
            scales.append(ColumnScale(column.name, kind, mean, sd))
        else:
            low, high = float(values.min()), float(values.max())
            if not high > low:
                raise ConstantColumn(column.name)
            scales.append(ColumnScale(column.name, kind, low, high))
    return ScalerParams(scales=tuple(scales))


def apply_scaler(dataset: Dataset, params: ScalerParams) -> Dataset:
    """Transforms the scaled columns, every other column (and the labels) is passed through."""
    scales = params.as_dict()
    missing = set(scales) - set(dataset.names)
    if missing:
        raise UnknownColumn(f"scaled columns {sorted(missing)} are not in the dataset")
    columns = []
    for column in dataset.columns:
        if column.name in scales:
            columns.append(Column.numeric(column.name, scales[column.name].apply(column.array())))
        else:
            columns.append(column)
    return dataset.with_columns(columns)
