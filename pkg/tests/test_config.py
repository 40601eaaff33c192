import argparse
import os
from pathlib import Path
from unittest.mock import patch

import pytest

from spectravoid.config import (
    DEFAULT_GRID,
    THREADS_ENV,
    RunConfig,
    parallel_map,
    structure_from_args,
    worker_count,
)
from spectravoid.exceptions import InvalidInput
from spectravoid.structures import CollisionClass, StructureClass, StructureKind


def namespace(**kwargs):
    values = {"structure": None, "n": None, "m": None, "bandwidth": None, "det": None}
    values.update(kwargs)
    return argparse.Namespace(**values)


def test_worker_count_uses_default_when_unset():
    with patch.dict(os.environ, {}, clear=True):
        assert worker_count(default=3) == 3
        assert worker_count() >= 1


@patch.dict(os.environ, {THREADS_ENV: "5"})
def test_worker_count_reads_environment():
    assert worker_count(default=1) == 5


@pytest.mark.parametrize("raw", ["0", "-2", "many"])
def test_worker_count_rejects_bad_values(raw):
    with patch.dict(os.environ, {THREADS_ENV: raw}):
        with pytest.raises(InvalidInput):
            worker_count()


@pytest.mark.parametrize("workers", [1, 2, 8])
def test_parallel_map_keeps_order(workers):
    assert parallel_map(lambda x: x * x, range(20), workers) == [x * x for x in range(20)]


def test_parallel_map_of_nothing():
    assert parallel_map(str, [], 4) == []


def test_run_config_defaults():
    config = RunConfig(command="table")
    assert config.grid == DEFAULT_GRID
    assert config.structure is None
    assert config.collision is CollisionClass.PAIR_GENERIC


@pytest.mark.parametrize("command", ["gaps", "codim", "track", "sweep"])
def test_run_config_requires_seed(command):
    with pytest.raises(InvalidInput):
        RunConfig(command=command)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"seed": -1},
        {"grid": 7},
        {"samples": 0},
        {"tail_fraction": 0.6},
        {"tail_fraction": 0.0},
        {"output_format": "xml"},
        {"bins": 0},
        {"t_range": (1.0, 1.0)},
    ],
)
def test_run_config_rejects(kwargs):
    with pytest.raises(InvalidInput):
        RunConfig(command="gaps", **{"seed": 1, **kwargs})


def test_run_config_from_namespace():
    args = namespace(
        command="codim",
        structure="skew-symmetric",
        n=6,
        samples=500,
        seed=4,
        tail_fraction=0.05,
        collision="zero",
        out="report.json",
        format="json",
    )
    config = RunConfig.from_namespace(args)
    assert config.structure == StructureClass(StructureKind.SKEW_SYMMETRIC, 6)
    assert config.collision is CollisionClass.AT_ZERO
    assert config.out == Path("report.json")
    assert config.samples == 500 and config.tail_fraction == 0.05


def test_structure_from_args_defaults():
    assert structure_from_args(namespace()) is None
    assert structure_from_args(namespace(structure="orthogonal", n=4)).det_sign == 1
    rect = structure_from_args(namespace(structure="rect-real", n=3))
    assert rect.shape == (3, 3)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"structure": "symmetric", "n": 4, "det": -1},
        {"structure": "symmetric"},
        {"structure": "hermitian", "n": 4, "bandwidth": 9},
        {"structure": "rect-complex", "n": 4, "m": 2},
    ],
)
def test_structure_from_args_rejects(kwargs):
    with pytest.raises(InvalidInput):
        structure_from_args(namespace(**kwargs))


if __name__ == "__main__":
    pytest.main()
