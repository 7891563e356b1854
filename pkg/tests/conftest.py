import pytest

from margalg.complexes import parse_facets
from margalg.tables import Shape


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: multi-minute exact computations")


@pytest.fixture
def cube():
    return Shape((2, 2, 2))


@pytest.fixture
def triangle():
    """The running example: facets {1,2}, {1,3}, {2,3}."""
    return parse_facets("1,2;1,3;2,3", 3)


@pytest.fixture
def four_cycle():
    return parse_facets("1,2;1,3;2,4;3,4", 4)


@pytest.fixture
def two_facets():
    return parse_facets("1,2;2,3", 3)
