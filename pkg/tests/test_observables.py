import numpy as np
import pytest
from hypothesis import given, strategies as st

from drivencoin.observables import moment, moments, parity_leak, symmetry_defect, tv_distance, variance
from drivencoin.state import PositionDistribution


def delta():
    return PositionDistribution(-3, np.array([0, 0, 0, 1.0, 0, 0, 0]))


def test_moment_examples():
    assert moment(delta(), 1) == 0
    assert moment(PositionDistribution(-1, np.array([0.5, 0, 0.5])), 2) == 1
    assert moment(PositionDistribution(-2, np.array([0.25, 0, 0.5, 0, 0.25])), 2) == 2


def test_variance_and_spread():
    m = moments(PositionDistribution(0, np.array([0.5, 0.5])))
    assert m.variance == pytest.approx(0.25)
    assert m.spread == pytest.approx(0.5)
    assert variance(delta()) == 0


def test_symmetry_defect():
    assert symmetry_defect(PositionDistribution(-1, np.array([0.5, 0, 0.5]))) == 0
    assert symmetry_defect(PositionDistribution(1, np.array([1.0]))) == 1


def test_parity_leak():
    p = PositionDistribution(-1, np.array([0.5, 0.1, 0.4]))
    assert parity_leak(p, 1) == pytest.approx(0.1)
    assert parity_leak(p, 0) == pytest.approx(0.5)


def test_tv_distance_over_union_of_supports():
    p = PositionDistribution(0, np.array([1.0]))
    q = PositionDistribution(5, np.array([1.0]))
    assert tv_distance(p, q) == 1.0
    assert tv_distance(p, p) == 0.0


def test_variance_monotone_for_fixed_strengths(run):
    for text in ("const:1", "const:0"):
        assert np.all(np.diff(run(text).variance) > 0)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=12), st.integers(-10, 10))
def test_variance_identity(weights, x_min):
    w = np.array(weights)
    if w.sum() <= 0:
        return
    p = PositionDistribution(x_min, w / w.sum())
    m = moments(p)
    assert m.variance == pytest.approx(m.m2 - m.m1**2, abs=1e-12)
    assert m.variance >= -1e-12
