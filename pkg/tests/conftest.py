import pytest

from tests.helpers import family_graph
from topodiag.settings import get_settings


@pytest.fixture(scope="session")
def hypercube3():
    return family_graph("hypercube", 3)


@pytest.fixture(scope="session")
def hypercube4():
    return family_graph("hypercube", 4)


@pytest.fixture(scope="session")
def ag4():
    return family_graph("ag", 4)


@pytest.fixture(scope="session")
def ag5():
    return family_graph("ag", 5)


@pytest.fixture(scope="session")
def an5():
    return family_graph("an", 5)


@pytest.fixture(scope="session")
def splitstar4():
    return family_graph("splitstar", 4)


@pytest.fixture(scope="session")
def twotree4():
    return family_graph("twotree", 4)


@pytest.fixture(scope="session")
def bp3():
    return family_graph("bp", 3)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("TOPODIAG_BUDGET", "TOPODIAG_THREADS", "TOPODIAG_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
