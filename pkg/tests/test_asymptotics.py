import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from drivencoin.asymptotics import (
    ANALYTIC_C,
    asymptotic_quantum_distribution,
    asymptotic_quantum_variance,
    ballistic_constants,
    binomial_distribution,
    mixture_distribution,
    mixture_variance,
    mixture_weight,
    velocity_moments,
)
from drivencoin.errors import AsymptoticRegimeWarning, ContractViolation
from drivencoin.observables import parity_leak, symmetry_defect, tv_distance, variance
from drivencoin.schedule import Cosine
from drivencoin.state import DEFAULT_COIN, MINUS_COIN, PLUS_COIN


def quiet(t, coin=DEFAULT_COIN):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AsymptoticRegimeWarning)
        return asymptotic_quantum_distribution(t, coin)


def test_ballistic_constants():
    k = ballistic_constants(4096)
    assert k.c1 == pytest.approx(0.2928932, abs=1e-7)
    assert abs(k.c1 - ANALYTIC_C) <= 1e-9
    assert abs(k.c2 - k.c1) <= 1e-12
    assert k.variance_coefficient == pytest.approx(0.2071068, abs=1e-7)
    assert abs(k.variance_coefficient - (1 / math.sqrt(2) - 0.5)) <= 1e-9
    with pytest.raises(ContractViolation):
        ballistic_constants(128)


def test_velocity_moments_depend_on_coin():
    c1, c2 = velocity_moments(DEFAULT_COIN)
    assert abs(c1) <= 1e-12 and c2 == pytest.approx(ANALYTIC_C, abs=1e-12)
    assert velocity_moments(PLUS_COIN)[0] == pytest.approx(ANALYTIC_C, abs=1e-12)
    assert velocity_moments(MINUS_COIN)[0] == pytest.approx(-ANALYTIC_C, abs=1e-12)


def test_velocity_moments_match_simulation(run):
    # unitary V/t^2 approaches C2 - C1^2 for the coin actually used
    for coin in (DEFAULT_COIN, PLUS_COIN):
        c1, c2 = velocity_moments(coin)
        traj = run("const:1", 100, coin)
        assert traj.variance[100] / 100**2 == pytest.approx(c2 - c1 * c1, rel=0.02)


def test_quantum_variance():
    assert asymptotic_quantum_variance(10) == pytest.approx(20.71068, abs=1e-5)
    assert asymptotic_quantum_variance(0) == 0
    assert asymptotic_quantum_variance(100) == pytest.approx(2071.068, abs=1e-3)


def test_simulated_unitary_variance_vs_reference(run):
    # the symmetric start spreads with C2 = 1 - 1/sqrt2, not C2 - C1^2; see the notes
    ratio = run("const:1").variance[100] / asymptotic_quantum_variance(100)
    assert ratio == pytest.approx(1.41445, abs=1e-4)


@pytest.mark.parametrize("t", [20, 31, 64, 100])
def test_quantum_distribution_symmetry_and_parity(t):
    p = quiet(t).distribution
    assert symmetry_defect(p) <= 1e-9
    assert parity_leak(p, t) == 0
    assert p.total() == pytest.approx(1.0, abs=1e-12)
    assert np.all(p.probabilities >= 0)


def test_quantum_distribution_support():
    p = quiet(100).distribution
    outside = np.abs(p.positions) >= 100 / math.sqrt(2)
    assert np.all(p.probabilities[outside] == 0)


FROZEN = {
    20: (0.6423, 0.31147),
    30: (0.03126, 0.10737),
    40: (0.28388, 0.20332),
    50: (0.03299, 0.09074),
    60: (0.16732, 0.14633),
    70: (0.03778, 0.0857),
    80: (0.10909, 0.11265),
    90: (0.04276, 0.08491),
    100: (0.07373, 0.09267),
}


def test_quantum_distribution_against_simulation(run):
    # frozen: defect and TV distance to the exact unitary walk
    traj = run("const:1")
    for t, (defect, tv) in FROZEN.items():
        a = quiet(t)
        assert a.defect == pytest.approx(defect, abs=1e-4)
        assert tv_distance(a.distribution, traj.distributions[t]) == pytest.approx(tv, abs=1e-4)


def test_quantum_distribution_interior_accuracy(run):
    # away from the caustic the stationary-phase value is close pointwise
    p = quiet(100).distribution
    sim = run("const:1").distributions[100]
    x = np.arange(-60, 61, 2)
    err = max(abs(p.at(int(xi)) - sim.at(int(xi))) for xi in x)
    assert err <= 2e-3


def test_regime_warning():
    with pytest.warns(AsymptoticRegimeWarning):
        asymptotic_quantum_distribution(20)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        asymptotic_quantum_distribution(30)


def test_binomial_examples():
    p2 = binomial_distribution(2)
    assert [p2.at(x) for x in (-2, -1, 0, 1, 2)] == [0.25, 0, 0.5, 0, 0.25]
    p1 = binomial_distribution(1)
    assert p1.at(-1) == p1.at(1) == 0.5
    assert variance(binomial_distribution(50)) == pytest.approx(50, abs=1e-9)


@given(st.integers(0, 200))
def test_binomial_normalized(t):
    assert abs(binomial_distribution(t).total() - 1) <= 1e-12


def test_binomial_branches_agree():
    from math import comb

    p = binomial_distribution(40)
    for x in (-40, -10, 0, 22):
        assert p.at(x) == pytest.approx(comb(40, (40 + x) // 2) / 2**40, rel=1e-12)


@pytest.mark.filterwarnings("ignore::drivencoin.errors.AsymptoticRegimeWarning")
def test_mixture_endpoints():
    q = quiet(40).distribution
    assert np.array_equal(mixture_distribution(40, 1.0).probabilities, q.probabilities)
    assert np.array_equal(mixture_distribution(40, 0.0).probabilities, binomial_distribution(40).probabilities)
    with pytest.raises(ContractViolation):
        mixture_distribution(40, -0.5)
    signed = mixture_distribution(40, -0.5, signed=True)
    assert signed.total() == pytest.approx(1.0)


def test_mixture_weight_modes():
    assert mixture_weight(Cosine(0.1), 90) == pytest.approx(0.9111, abs=1e-4)
    assert mixture_weight(Cosine(0.1), 90, "signed") == pytest.approx(-0.9111, abs=1e-4)
    with pytest.raises(ValueError):
        mixture_weight(Cosine(0.1), 90, "mean")


def test_mixture_against_driven_simulation(run):
    # frozen: the per-step channel does not produce this mixture at these times
    traj = run("cos:0.1")
    observed = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AsymptoticRegimeWarning)
        for t in (90, 94):
            for mode in ("abs", "signed"):
                w = mixture_weight(Cosine(0.1), t, mode)
                mix = mixture_distribution(t, w, signed=(mode == "signed"))
                observed[t, mode] = tv_distance(traj.distributions[t], mix)
    assert observed[90, "abs"] == pytest.approx(0.64132, abs=1e-4)
    assert observed[94, "abs"] == pytest.approx(0.74451, abs=1e-4)
    assert observed[90, "signed"] == pytest.approx(1.00456, abs=1e-4)
    assert observed[94, "signed"] == pytest.approx(1.09539, abs=1e-4)


def test_mixture_variance_examples():
    assert mixture_variance(100, 1.0) == pytest.approx(2071.068, abs=1e-3)
    assert mixture_variance(100, 0.0) == 100
    assert mixture_variance(100, 0.5) == pytest.approx(1085.534, abs=1e-3)


@given(st.integers(5, 500), st.floats(0, 1), st.floats(0, 1))
def test_mixture_variance_monotone_in_weight(t, a, b):
    lo, hi = sorted((a, b))
    assert mixture_variance(t, lo) <= mixture_variance(t, hi) + 1e-9
