import random

import pytest
from hypothesis import settings

from suq2.scalar import Context, using

settings.register_profile("suq2", deadline=None, max_examples=60)
settings.load_profile("suq2")

Q0 = 0.3 + 0.4j


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def exact():
    with using(Context()) as ctx:
        yield ctx


@pytest.fixture
def numeric():
    with using(Context.numeric(Q0)) as ctx:
        yield ctx
