import random

import pytest
from hypothesis import settings

settings.register_profile('ci', max_examples=60, derandomize=True, deadline=None)
settings.load_profile('ci')


@pytest.fixture
def rng():
    return random.Random(0xA5)
