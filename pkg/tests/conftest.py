import pytest

from nrc.config import FieldSpec, RingSpec, build_ring, class_group_for
from nrc.picard import picard_group


@pytest.fixture(scope="session")
def ex1():
    return build_ring(RingSpec.load("rings/example1.toml"))


@pytest.fixture(scope="session")
def ex2():
    return build_ring(RingSpec.load("rings/example2.toml"))


@pytest.fixture(scope="session")
def pic1(ex1):
    return picard_group(ex1.ring, ex1.cl)


@pytest.fixture(scope="session")
def pic2(ex2):
    return picard_group(ex2.ring, ex2.cl)


@pytest.fixture(scope="session")
def gauss():
    K = FieldSpec.load("fields/gauss.toml").build()
    return K, class_group_for(K, None, [])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
