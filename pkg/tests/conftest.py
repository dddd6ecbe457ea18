"""
Pytest configuration and shared fixtures for the settop test suite.
"""
import random

import pytest
from dotenv import load_dotenv

from settop.finite_topology import PointSet, PointTopology, enumerate_topologies
from settop.hf_universe.objects import EMPTY, HFSet, hf_set
from settop.hf_universe.ordinals import EMPTY_ZERO, atoms_zero
from settop.utils.config import load_config

load_dotenv()


@pytest.fixture(scope="session")
def settings():
    """Active settings (defaults layered with .settop/config.toml)."""
    return load_config()


@pytest.fixture(scope="session")
def u3() -> HFSet:
    """The rank-3 cumulative hierarchy {∅, {∅}, {{∅}}, {∅, {∅}}}."""
    one = hf_set(EMPTY)
    return hf_set(EMPTY, one, hf_set(one), hf_set(EMPTY, one))


@pytest.fixture(scope="session")
def zeros():
    """The empty zero and the two-atom zero {{#x}, {#y}}."""
    return {"empty": EMPTY_ZERO, "pair": atoms_zero()}


@pytest.fixture(scope="session")
def small_topologies():
    """Every topology on 1..3 points."""
    return [T for n in range(1, 4) for T in enumerate_topologies(n)]


@pytest.fixture(scope="session")
def four_point_topologies():
    return list(enumerate_topologies(4))


@pytest.fixture(scope="session")
def chain3() -> PointTopology:
    """T = {{0}, {0,1}, {0,1,2}} on three points."""
    return PointTopology.from_family(3, [PointSet.of(3, s) for s in ([0], [0, 1], [0, 1, 2])])


@pytest.fixture
def rng():
    """Seeded generator, fresh per test."""
    return random.Random(0)
