import numpy as np
import pytest

from depmeter.model import DiscreteSupport, JointTable


def sup(k: int) -> DiscreteSupport:
    return DiscreteSupport(tuple(str(i) for i in range(k)))


def table(p) -> JointTable:
    p = np.asarray(p, dtype=float)
    return JointTable(p, sup(p.shape[0]), sup(p.shape[1]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240824)
