import numpy as np
import pytest

from biwhitham.continuation import BranchConfig, refine_branch_end, run_branch
from biwhitham.spectral import build_grid


@pytest.fixture(scope="session")
def grid512():
    return build_grid(512)


@pytest.fixture(scope="session")
def branch512(grid512):
    """The k = 1 branch at the default resolution, run once per session."""
    return run_branch(BranchConfig(n_modes=512), grid512)


@pytest.fixture(scope="session")
def refined_end(branch512, grid512):
    fine_branch, fine = refine_branch_end(branch512, grid512, BranchConfig(n_modes=512))
    return fine_branch, fine


@pytest.fixture(scope="session")
def branch64():
    grid = build_grid(64)
    return run_branch(BranchConfig(n_modes=64), grid), grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
