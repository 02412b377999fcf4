"""Shared fixtures.  Set NAHM_SEED to reproduce a randomized run."""
import os

import numpy as np
import pytest

DEFAULT_SEED = 20260825


def suite_seed():
    return int(os.environ.get("NAHM_SEED", DEFAULT_SEED))


@pytest.fixture
def rng():
    return np.random.default_rng(suite_seed())
