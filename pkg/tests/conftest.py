import pytest

from ringcav.params import nominal_params


@pytest.fixture(scope="session")
def nominal():
    return nominal_params()


@pytest.fixture(scope="session")
def cavity(nominal):
    return nominal[0]


@pytest.fixture(scope="session")
def ensemble(nominal):
    return nominal[1]


@pytest.fixture(scope="session")
def drive(nominal):
    return nominal[2]
