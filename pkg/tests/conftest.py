import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_error():
    def load(name):
        return json.loads((FIXTURES / name).read_text())

    return load
