from pathlib import Path

import numpy as np
import pytest

from stable_image.catalog import get_map, get_spec

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture(scope="session")
def example6():
    return get_map("example6")


@pytest.fixture(scope="session")
def automorphism():
    return get_map("automorphism")


@pytest.fixture(scope="session")
def merge_spec():
    return get_spec("merge")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def samples():
    return SAMPLES
