import pytest

from kzcheck.lfunctions import NewformData
from kzcheck.qseries import EtaQuotientSpec, delta_series, eta_quotient, kohnen_plus_basis


@pytest.fixture(scope="session")
def delta_q():
    return delta_series(400)


@pytest.fixture(scope="session")
def delta(delta_q):
    return NewformData.from_qexpansion(delta_q)


@pytest.fixture(scope="session")
def level11_q():
    return eta_quotient(EtaQuotientSpec.parse("1^2,11^2"), 4000)


@pytest.fixture(scope="session")
def level11(level11_q):
    return NewformData.from_qexpansion(level11_q)


@pytest.fixture(scope="session")
def g6():
    (g,) = kohnen_plus_basis(6, 200)
    return g
