import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import strands_fixture


@pytest.fixture
def strands():
    return strands_fixture()
