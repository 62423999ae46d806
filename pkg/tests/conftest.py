import numpy as np
import pytest

from laglab.ambient import AlmostCYModel
from laglab.lagrangian import build
from laglab.torus import PeriodicGrid, constant_field, field_from_function


@pytest.fixture(scope="session")
def grid64():
    return PeriodicGrid(2, 64)


@pytest.fixture(scope="session")
def flat_model():
    return AlmostCYModel(2)


@pytest.fixture(scope="session")
def twisted_model():
    return AlmostCYModel(2, twist_amplitude=0.1, twist_mode=1)


@pytest.fixture(scope="session")
def flat_zero(flat_model, grid64):
    return build(flat_model, constant_field(grid64))


@pytest.fixture(scope="session")
def twisted_zero(twisted_model, grid64):
    return build(twisted_model, constant_field(grid64))


@pytest.fixture(scope="session")
def generic_potential(grid64):
    return field_from_function(grid64, lambda c: 0.2 * np.cos(c[..., 0] + c[..., 1]))


@pytest.fixture(scope="session")
def flat_generic(flat_model, generic_potential):
    return build(flat_model, generic_potential)


@pytest.fixture(scope="session")
def twisted_generic(twisted_model, generic_potential):
    return build(twisted_model, generic_potential)
