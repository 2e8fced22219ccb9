from __future__ import annotations

import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20090923)


@pytest.fixture
def write_prices(tmp_path):
    """Write one bare price per line, return the path."""

    def _write(prices, name="prices.csv"):
        path = tmp_path / name
        path.write_text("".join(f"{p}\n" for p in prices), encoding="utf-8")
        return path

    return _write
