from pathlib import Path

import pytest

from tabula.dataset import Dataset, load_csv

DATA = Path(__file__).parent / "tests" / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def iris() -> Dataset:
    return load_csv(DATA / "iris.csv", label_column="Class")


@pytest.fixture
def watermelon() -> Dataset:
    return load_csv(DATA / "watermelon.csv", label_column="ripe")


@pytest.fixture
def melons() -> Dataset:
    """Density and sugar content of 30 melons, unlabeled."""
    return load_csv(DATA / "melons.csv")


@pytest.fixture
def six_points() -> Dataset:
    return load_csv(DATA / "six_points.csv")
