import copy

import pytest

from levylt.core.resources import load_config
from levylt.core.schemas import WalkModel


@pytest.fixture(scope="session")
def settings():
    return load_config()


@pytest.fixture
def mc_settings(settings):
    """The shipped configuration with small batches, so tests exercise several worker tasks."""
    tuned = copy.deepcopy(settings)
    tuned["montecarlo"]["batch_size"] = 500
    tuned["montecarlo"]["max_workers"] = 2
    return tuned


@pytest.fixture
def gaussian():
    return WalkModel(lam=2.0, diffusion=1.0)


@pytest.fixture
def cauchy():
    return WalkModel(lam=1.0, diffusion=1.0)


@pytest.fixture
def levy15():
    return WalkModel(lam=1.5, diffusion=1.0)
