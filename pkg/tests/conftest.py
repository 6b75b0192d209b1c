import numpy as np
import pytest

from coopeq.core import generators
from coopeq.core.models import Game


@pytest.fixture(autouse=True)
def coopeq_home(tmp_path, monkeypatch):
    """Keep config and logs out of the real user data dir."""
    home = tmp_path / "coopeq-home"
    monkeypatch.setenv("COOPEQ_HOME", str(home))
    return home


@pytest.fixture(scope="session")
def pd():
    return generators.prisoners()


@pytest.fixture(scope="session")
def xam1():
    return generators.xam1()


@pytest.fixture(scope="session")
def travelers():
    return generators.travelers()


@pytest.fixture(scope="session")
def travelers_small():
    return generators.travelers(lo=2, hi=30)


@pytest.fixture(scope="session")
def bargaining_coarse():
    return generators.bargaining(total=100, step=25)


@pytest.fixture(scope="session")
def centipede():
    return generators.centipede(20)


@pytest.fixture
def random_games():
    """Factory for seeded random games with entries uniform in [-10, 10]."""

    def make(seed: int, count: int, max_size: int = 6, min_size: int = 1, square: bool = False):
        rng = np.random.default_rng(seed)
        for _ in range(count):
            n = int(rng.integers(min_size, max_size + 1))
            m = n if square else int(rng.integers(min_size, max_size + 1))
            yield Game(rng.uniform(-10, 10, (n, m)), rng.uniform(-10, 10, (n, m)))

    return make
