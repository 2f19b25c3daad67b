import pytest

from cimpoly.enumeration import enumerate_dags, enumerate_mecs
from cimpoly.geometry import EdgeOracle


@pytest.fixture(scope="session")
def dags4():
    return list(enumerate_dags(4))


@pytest.fixture(scope="session")
def vs3():
    return enumerate_mecs(3)


@pytest.fixture(scope="session")
def vs4():
    return enumerate_mecs(4)


@pytest.fixture(scope="session")
def oracle4(vs4):
    return EdgeOracle(vs4)
