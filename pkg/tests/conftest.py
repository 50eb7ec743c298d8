import numpy as np
import pytest

from causalloops.simplex import TestFunctionTag


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def bump_tag():
    return TestFunctionTag("bump", 0.25)


@pytest.fixture
def gaussian_tag():
    return TestFunctionTag("gaussian", 0.15)
