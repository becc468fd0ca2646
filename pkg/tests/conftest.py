from __future__ import annotations

import numpy as np
import pytest

from munsc import Dataset


@pytest.fixture
def line_dataset():
    """Points on a line at coordinates 0, 1, 5, 9 (ids 0..3)."""
    return Dataset.from_coords([[0.0], [1.0], [5.0], [9.0]])


@pytest.fixture
def pool_dataset():
    rng = np.random.default_rng(99)
    return Dataset.from_coords(rng.normal(0.0, 30.0, size=(300, 2)))
