import numpy as np
import pytest

from ringdist import Dim, RegionPair, Scenario

ALL_COMBOS = [
    (Dim.TWO_D, Scenario.S1),
    (Dim.TWO_D, Scenario.S2),
    (Dim.THREE_D, Scenario.S1),
    (Dim.THREE_D, Scenario.S2),
]

COMBO_IDS = ["2d-s1", "2d-s2", "3d-s1", "3d-s2"]


def pair_of(dim, r1, ratio) -> RegionPair:
    return RegionPair(dim=dim, r1=r1, r2=r1 * ratio)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
