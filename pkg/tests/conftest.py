import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

# tests import the small helper modules that live next to them
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)
