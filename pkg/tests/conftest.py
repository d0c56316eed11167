import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from btarski.library import default_registry


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def lt(registry):
    return registry.predicates["lt"]


@pytest.fixture(scope="session")
def leq(registry):
    return registry.predicates["leq"]


@pytest.fixture(scope="session")
def geq(registry):
    return registry.predicates["geq"]
