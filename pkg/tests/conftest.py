import pytest

from f4workbench.liealg import build_f4_model
from f4workbench.uea import model_engine, omega_normalized


@pytest.fixture(scope="session")
def model():
    return build_f4_model()


@pytest.fixture(scope="session")
def me():
    return model_engine()


@pytest.fixture(scope="session")
def omega_report(me):
    return omega_normalized(me)
