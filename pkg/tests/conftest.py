import random

import pytest
from hypothesis import settings

from plabic_workbench.scalar import Mat

settings.register_profile("workbench", max_examples=40, deadline=None)
settings.load_profile("workbench")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0)


@pytest.fixture
def point4x8(rng) -> Mat:
    return Mat.random(rng, 4, 8, 100)
