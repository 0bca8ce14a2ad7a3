import pytest
from hypothesis import settings

from netstab.fixtures import load_cand6, load_fig4, load_p11

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def p11():
    return load_p11()


@pytest.fixture(scope="session")
def cand6():
    return load_cand6()


@pytest.fixture(scope="session")
def fig4():
    return load_fig4()
