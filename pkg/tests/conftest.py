import pytest

from dgtrace.catalog import catalog, catalog_entry


@pytest.fixture(scope="session")
def cat():
    return catalog()


@pytest.fixture(scope="session")
def a2():
    return catalog_entry("A2").algebra


@pytest.fixture(scope="session")
def a3():
    return catalog_entry("A3").algebra


@pytest.fixture(scope="session")
def m2():
    return catalog_entry("M2").algebra


@pytest.fixture(scope="session")
def kfield():
    return catalog_entry("k").algebra


@pytest.fixture(scope="session")
def kronecker():
    return catalog_entry("Kronecker").algebra
