import os

import pytest

from tabula.config import fresh_seed, make_rng, ordered_map, spawn_rngs, worker_count
from tabula.errors import UsageError


def test_worker_count_from_the_environment(monkeypatch):
    monkeypatch.setenv("TABULA_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("TABULA_THREADS", " ")
    assert worker_count() == min(4, os.cpu_count() or 1)
    monkeypatch.delenv("TABULA_THREADS")
    assert worker_count() >= 1


@pytest.mark.parametrize("raw", ["0", "-2", "many"])
def test_bad_worker_counts(monkeypatch, raw):
    monkeypatch.setenv("TABULA_THREADS", raw)
    with pytest.raises(UsageError):
        worker_count()


@pytest.mark.parametrize("threads", ["1", "4"])
def test_ordered_map_keeps_item_order(monkeypatch, threads):
    monkeypatch.setenv("TABULA_THREADS", threads)
    assert ordered_map(lambda x: x * x, range(10)) == [x * x for x in range(10)]
    assert ordered_map(str, []) == []


def test_seeded_generators():
    assert make_rng(7).integers(1000, size=5).tolist() == make_rng(7).integers(1000, size=5).tolist()
    children = [rng.random() for rng in spawn_rngs(7, 3)]
    assert children == [rng.random() for rng in spawn_rngs(7, 3)]
    assert len(set(children)) == 3


def test_fresh_seed():
    seed = fresh_seed()
    assert isinstance(seed, int)
    assert seed >= 0
