import numpy as np
import pytest

from hexbench.mesh import build_cube_mesh, perturb_mesh


@pytest.fixture(scope="session")
def perturbed_mesh2():
    """2x2x2 mesh with generically perturbed element geometry."""
    return perturb_mesh(build_cube_mesh(2, 2.0), amplitude=0.15, seed=7)


@pytest.fixture(scope="session")
def perturbed_single():
    """One generically perturbed element."""
    return perturb_mesh(build_cube_mesh(1, 2.0), amplitude=0.2, seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
