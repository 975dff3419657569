import functools

import pytest

from qduality import catalog
from qduality.algebra import HopfAlgebra
from qduality.scalars import TruncationParams


@functools.lru_cache(maxsize=None)
def hopf(name, N, D=4):
    return HopfAlgebra(catalog.builtin(name).presentation, TruncationParams(N, D))


@pytest.fixture
def sl2():
    return lambda N, D=4: hopf("sl2_standard", N, D)
