import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from jacchain import ElementalFunction, JacobianChain


@pytest.fixture
def small_chain() -> JacobianChain:
    """The q=2 worked example used across the solver tests."""
    return JacobianChain(
        [ElementalFunction(1, 3, 4, 10), ElementalFunction(2, 4, 2, 20)]
    )
