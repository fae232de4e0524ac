import pytest

from cmloops.constructions import build, fixture_non_moufang


@pytest.fixture(scope="session")
def cml81():
    return build("cml81")


@pytest.fixture(scope="session")
def z9():
    return build("cyclic:9")


@pytest.fixture(scope="session")
def z3xz3():
    return build("elem3:2")


@pytest.fixture(scope="session")
def z5xcml81():
    return build("product:cyclic:5,cml81")


@pytest.fixture(scope="session")
def z3xcml81():
    return build("product:cyclic:3,cml81")


@pytest.fixture(scope="session")
def z9xcml81():
    return build("product:cyclic:9,cml81")


@pytest.fixture(scope="session")
def non_moufang():
    return fixture_non_moufang()
