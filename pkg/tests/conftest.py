import os
import sys

import pytest
from dotenv import load_dotenv

# Load environment variables from .env.example
load_dotenv(os.path.join(os.path.dirname(__file__), '..', '.env.example'))

# Add repository root to path for `src` imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.config import Bounds  # noqa: E402
from src.digraph import Digraph  # noqa: E402
from src.generators import CyclePattern, demo_factors, gen_cycle  # noqa: E402


@pytest.fixture(scope="session")
def demo_pair():
    """Digraphs D and E used to illustrate the four products"""
    return demo_factors()


@pytest.fixture
def demo_d(demo_pair):
    return demo_pair["D"]


@pytest.fixture
def demo_e(demo_pair):
    return demo_pair["E"]


@pytest.fixture
def directed_cycle():
    """Factory for C_k^0"""
    def make(k: int) -> Digraph:
        return gen_cycle(CyclePattern.directed(k))
    return make


@pytest.fixture
def c4(directed_cycle):
    return directed_cycle(4)


@pytest.fixture
def c3(directed_cycle):
    return directed_cycle(3)


@pytest.fixture
def small_bounds():
    return Bounds(enum=10, search=12, family=6)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Every test starts from default settings"""
    for name in ("ECDLAB_BOUNDS", "ECDLAB_WORKERS", "LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    yield


def pytest_configure(config):
    """Configure pytest with custom markers"""
    config.addinivalue_line(
        "markers", "unit: Unit tests for individual modules"
    )
    config.addinivalue_line(
        "markers", "integration: Integration tests across modules and the CLI"
    )
    config.addinivalue_line(
        "markers", "slow: Full acceptance sweeps"
    )


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers automatically"""
    for item in items:
        # Auto-mark based on file path
        if "unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)
        elif "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)
