"""Test configuration and fixtures for pytest."""

import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from lca_pego.groups import FiniteProduct, RealGrid, ZWindow, make_group  # noqa: E402


@pytest.fixture
def rng():
    """Seeded generator so every suite sees the same random inputs."""
    return np.random.default_rng(42)


@pytest.fixture
def z4():
    return make_group(FiniteProduct(moduli=(4,)))


@pytest.fixture
def z8():
    return make_group(FiniteProduct(moduli=(8,)))


@pytest.fixture
def window8():
    """Truncated integers [-8, 8]."""
    return make_group(ZWindow(half_width=8))


@pytest.fixture
def line_grid():
    """RealGrid d=1, L=8, 257 points (the gaussian_bumps carrier)."""
    return make_group(RealGrid(dims=1, half_extent=8.0, points_per_axis=257))


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document into tmp_path and return its path."""

    def _write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return path

    return _write
