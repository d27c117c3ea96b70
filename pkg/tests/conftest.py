import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gamma0plus.curvedata import LevelRegistry


@pytest.fixture(scope="session")
def registry():
    """Shared registry backed by the vendored records."""
    return LevelRegistry()


@pytest.fixture(scope="session")
def curve37(registry):
    return registry.get(37)


@pytest.fixture(scope="session")
def curve141(registry):
    return registry.get(141)
