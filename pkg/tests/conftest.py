import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # straightline oracle helpers

from inru.quasigroup import Quasigroup

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture(scope="session")
def xor_quasigroup():
    return Quasigroup([[a ^ b for b in range(16)] for a in range(16)])


@pytest.fixture(scope="session")
def z16_quasigroup():
    return Quasigroup([[(a + b) % 16 for b in range(16)] for a in range(16)])
