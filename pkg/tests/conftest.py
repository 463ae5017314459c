import pytest

from tstruct_lab.core.modules import FinModule
from tstruct_lab.core.ring import make_ring
from tstruct_lab.core.tstructures import ThomasonFiltration


@pytest.fixture
def z4():
    return make_ring(4)


@pytest.fixture
def z12():
    return make_ring(12)


@pytest.fixture
def z30():
    return make_ring(30)


@pytest.fixture
def z36():
    return make_ring(36)


@pytest.fixture
def r12(z12):
    return FinModule.free(z12)


@pytest.fixture
def phi(z12):
    """Phi(n) = Spec for n <= 0, {2} at n = 1, empty above."""
    return ThomasonFiltration(z12, ((2, 1), (3, 0)))
