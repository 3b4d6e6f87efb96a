import csv
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import make_rng
from .errors import (
    DataError,
    DuplicateHeader,
    EmptyFile,
    FractionOutOfRange,
    LengthMismatch,
    MissingValue,
    NonNumericFeature,
    RaggedRow,
    StratifyWithoutLabels,
    TooFewRows,
    UnknownColumn,
)

logger = logging.getLogger(__name__)

Label = Union[str, float]

# cells that count as "no value", ingestion refuses them
MISSING_TOKENS = frozenset({"", "?"})
# no value only in a column whose other cells are all numbers, elsewhere they are ordinary categories
NUMERIC_MISSING_TOKENS = frozenset({"na", "n/a", "nan", "null", "none"})


class ColumnKind(Enum):
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class Column:
    """A named, homogeneous column: reals for numeric columns, strings for categorical ones."""

    name: str
    kind: ColumnKind
    values: Tuple[Any, ...]

    def __post_init__(self) -> None:
        expected = float if self.kind is ColumnKind.NUMERIC else str
        for row, value in enumerate(self.values):
            if type(value) is not expected:
                raise DataError(
                    f"value {value!r} in row {row} of column '{self.name}' is not {self.kind.value}"
                )

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_numeric(self) -> bool:
        return self.kind is ColumnKind.NUMERIC

    def array(self) -> np.ndarray:
        if not self.is_numeric:
            raise NonNumericFeature(f"column '{self.name}' is categorical")
        return np.asarray(self.values, dtype=float)

    def take(self, indices: Sequence[int]) -> "Column":
        return Column(self.name, self.kind, tuple(self.values[i] for i in indices))

    @classmethod
    def numeric(cls, name: str, values: Iterable[float]) -> "Column":
        return cls(name, ColumnKind.NUMERIC, tuple(float(v) for v in values))

    @classmethod
    def categorical(cls, name: str, values: Iterable[Any]) -> "Column":
        return cls(name, ColumnKind.CATEGORICAL, tuple(str(v) for v in values))

    @classmethod
    def infer(cls, name: str, values: Sequence[Any]) -> "Column":
        """Numeric if every value is a finite real (or parses as one), categorical otherwise."""
        parsed = [_parse_real(v) for v in values]
        if all(p is not None for p in parsed):
            return cls(name, ColumnKind.NUMERIC, tuple(parsed))  # type: ignore[arg-type]
        return cls.categorical(name, values)


def _parse_real(value: Any) -> Optional[float]:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float, np.integer, np.floating)):
        number = float(value)
    else:
        try:
            number = float(str(value).strip())
        except ValueError:
            return None
    return number if math.isfinite(number) else None


@dataclass(frozen=True)
class Dataset:
    """Immutable table of feature columns with an optional label column."""

    columns: Tuple[Column, ...]
    labels: Optional[Column] = None

    def __post_init__(self) -> None:
        names = [column.name for column in self.columns]
        if len(set(names)) != len(names):
            duplicates = sorted({name for name in names if names.count(name) > 1})
            raise DuplicateHeader(f"column names must be unique, duplicated: {duplicates}")
        lengths = {len(column) for column in self.columns}
        if self.labels is not None:
            lengths.add(len(self.labels))
        if len(lengths) > 1:
            raise LengthMismatch(f"all columns must have the same number of rows, got lengths {sorted(lengths)}")

    @property
    def n_rows(self) -> int:
        if self.columns:
            return len(self.columns[0])
        if self.labels is not None:
            return len(self.labels)
        return 0

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(column.name for column in self.columns)

    @property
    def numeric_names(self) -> Tuple[str, ...]:
        return tuple(column.name for column in self.columns if column.is_numeric)

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    def column(self, name: str) -> Column:
        for column in self.columns:
            if column.name == name:
                return column
        raise UnknownColumn(f"'{name}' is not a feature column, available: {list(self.names)}")

    def matrix(self, names: Optional[Sequence[str]] = None) -> np.ndarray:
        """Numeric feature matrix (rows x columns) for the given columns (default: all)."""
        selected = [self.column(name) for name in names] if names is not None else list(self.columns)
        categorical = [column.name for column in selected if not column.is_numeric]
        if categorical:
            raise NonNumericFeature(f"columns {categorical} are categorical, only numeric features are supported")
        if not selected:
            return np.zeros((self.n_rows, 0))
        return np.column_stack([column.array() for column in selected])

    def rows(self, names: Optional[Sequence[str]] = None) -> List[Tuple[Any, ...]]:
        selected = [self.column(name) for name in names] if names is not None else list(self.columns)
        return list(zip(*(column.values for column in selected))) if selected else [()] * self.n_rows

    def label_values(self) -> List[Label]:
        if self.labels is None:
            raise DataError("the dataset has no label column")
        return list(self.labels.values)

    def classes(self) -> List[Label]:
        """The distinct labels in label order."""
        return sorted(set(self.label_values()))

    def take(self, indices: Sequence[int]) -> "Dataset":
        """Rows at the given positions, repeated positions produce repeated rows."""
        indices = [int(i) for i in indices]
        return Dataset(
            columns=tuple(column.take(indices) for column in self.columns),
            labels=self.labels.take(indices) if self.labels is not None else None,
        )

    def select(self, names: Sequence[str]) -> "Dataset":
        return replace(self, columns=tuple(self.column(name) for name in names))

    def with_labels(self, labels: Optional[Column]) -> "Dataset":
        return replace(self, labels=labels)

    def with_columns(self, columns: Sequence[Column]) -> "Dataset":
        return replace(self, columns=tuple(columns))

    @classmethod
    def from_matrix(
        cls,
        matrix: Any,
        names: Optional[Sequence[str]] = None,
        labels: Optional[Sequence[Any]] = None,
        label_name: str = "label",
    ) -> "Dataset":
        array = np.asarray(matrix, dtype=float)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        names = list(names) if names is not None else [f"x{i + 1}" for i in range(array.shape[1])]
        if len(names) != array.shape[1]:
            raise LengthMismatch(f"{len(names)} names given for {array.shape[1]} columns")
        columns = tuple(Column.numeric(name, array[:, i]) for i, name in enumerate(names))
        label_column = Column.infer(label_name, list(labels)) if labels is not None else None
        return cls(columns=columns, labels=label_column)

    @classmethod
    def from_records(
        cls, header: Sequence[str], records: Sequence[Sequence[Any]], label_column: Optional[str] = None
    ) -> "Dataset":
        """Builds a dataset from row records, inferring every column's kind."""
        if len(set(header)) != len(header):
            raise DuplicateHeader(f"header contains duplicated names: {list(header)}")
        for row, record in enumerate(records, start=1):
            if len(record) != len(header):
                raise RaggedRow(f"row {row} has {len(record)} cells, the header has {len(header)}")
        cells = list(zip(*records)) if records else [()] * len(header)
        columns = [Column.infer(name, list(values)) for name, values in zip(header, cells)]
        labels = None
        if label_column is not None:
            if label_column not in header:
                raise UnknownColumn(f"label column '{label_column}' is not in the header {list(header)}")
            labels = columns.pop(list(header).index(label_column))
        return cls(columns=tuple(columns), labels=labels)


def _reject_numeric_gaps(header: Sequence[str], body: Sequence[Sequence[str]]) -> None:
    for i, name in enumerate(header):
        gaps = [row for row, cells in enumerate(body, start=1) if cells[i].lower() in NUMERIC_MISSING_TOKENS]
        if gaps and len(gaps) < len(body) and all(
            _parse_real(cells[i]) is not None for cells in body if cells[i].lower() not in NUMERIC_MISSING_TOKENS
        ):
            raise MissingValue(row=gaps[0], column=name)


def load_csv(path: Union[str, Path], label_column: Optional[str] = None) -> Dataset:
    """Reads a UTF-8 CSV file with a header row.

    Columns where every cell parses as a real number become numeric, all others categorical.
    Missing cells are rejected, there is no imputation: empty and ``?`` cells anywhere, ``NA``, ``N/A``, ``nan``,
    ``null`` and ``None`` (any case) in a column whose other cells are numbers. Elsewhere those are categories.
    """
    with open(path, encoding="utf-8-sig", newline="") as f:
        records = [record for record in csv.reader(f) if record]
    if not records:
        raise EmptyFile(f"'{path}' is empty, a header row is required")
    header = [name.strip() for name in records[0]]
    body = []
    for row, record in enumerate(records[1:], start=1):
        if len(record) != len(header):
            raise RaggedRow(f"row {row} of '{path}' has {len(record)} cells, the header has {len(header)}")
        cells = [cell.strip() for cell in record]
        for name, cell in zip(header, cells):
            if cell in MISSING_TOKENS:
                raise MissingValue(row=row, column=name)
        body.append(cells)
    _reject_numeric_gaps(header, body)
    dataset = Dataset.from_records(header, body, label_column=label_column)
    logger.info("loaded '%s': %d rows, %d feature columns", path, dataset.n_rows, len(dataset.columns))
    return dataset


def _format_cell(value: Any) -> Any:
    return format(value, ".17g") if isinstance(value, float) else value


def write_table(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Plain UTF-8 CSV with ``\\n`` line ends, reals with 17 significant digits so reading them back is exact."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_format_cell(value) for value in row])


def save_csv(dataset: Dataset, path: Union[str, Path]) -> None:
    """Writes the dataset with the label column last."""
    columns = list(dataset.columns) + ([dataset.labels] if dataset.labels is not None else [])
    write_table(
        path,
        [column.name for column in columns],
        ([column.values[row] for column in columns] for row in range(dataset.n_rows)),
    )


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def _allocate(total: int, sizes: Sequence[int], fraction: float) -> List[int]:
    """Splits ``total`` across groups proportionally to ``sizes`` (largest remainder, ties by group order)."""
    exact = [fraction * size for size in sizes]
    counts = [min(size, int(math.floor(e))) for size, e in zip(sizes, exact)]
    remainders = sorted(range(len(sizes)), key=lambda g: (-(exact[g] - counts[g]), g))
    missing = total - sum(counts)
    for group in remainders:
        if missing <= 0:
            break
        if counts[group] < sizes[group]:
            counts[group] += 1
            missing -= 1
    return counts


def train_test_indices(
    dataset: Dataset, test_fraction: float, seed: int, stratified: bool = False
) -> Tuple[np.ndarray, np.ndarray]:
    """Row positions of a hold-out split, each partition in ascending order."""
    if not 0.0 < test_fraction < 1.0:
        raise FractionOutOfRange(f"'test_fraction' must lie strictly between 0 and 1, got {test_fraction}")
    n = dataset.n_rows
    if n < 2:
        raise TooFewRows(f"a hold-out split needs at least 2 rows, got {n}")
    rng = make_rng(seed)
    n_test = _round_half_up(test_fraction * n)

    if not stratified:
        test = rng.permutation(n)[:n_test]
    else:
        if dataset.labels is None:
            raise StratifyWithoutLabels("stratified splitting requires a label column")
        groups = class_groups(dataset)
        counts = _allocate(n_test, [len(group) for group in groups], test_fraction)
        test = np.concatenate([rng.permutation(group)[:count] for group, count in zip(groups, counts)])

    mask = np.zeros(n, dtype=bool)
    mask[test] = True
    return np.flatnonzero(~mask), np.flatnonzero(mask)


def class_groups(dataset: Dataset) -> List[np.ndarray]:
    labels = dataset.label_values()
    positions: Dict[Label, List[int]] = {}
    for i, label in enumerate(labels):
        positions.setdefault(label, []).append(i)
    return [np.asarray(positions[label], dtype=int) for label in sorted(positions)]


def train_test_split(
    dataset: Dataset, test_fraction: float, seed: int, stratified: bool = False
) -> Tuple[Dataset, Dataset]:
    """Row-disjoint hold-out partition with ``round(test_fraction * n_rows)`` test rows.

    With ``stratified`` every class contributes its proportional share (within one row) to the test part.
    """
    train, test = train_test_indices(dataset, test_fraction, seed, stratified)
    return dataset.take(train), dataset.take(test)


def shuffle_rows(dataset: Dataset, seed: int) -> Dataset:
    return dataset.take(make_rng(seed).permutation(dataset.n_rows))
