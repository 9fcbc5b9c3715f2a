import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drivencoin.asymptotics import binomial_distribution
from drivencoin.errors import ConfigurationError, ContractViolation, HorizonExceeded
from drivencoin.evolution import (
    PAULI_Z,
    apply_coin_channel_kraus,
    apply_coin_dephasing,
    apply_walk_unitary,
    dephasing_kraus,
    evolve,
    step,
    trajectory_distribution,
)
from drivencoin.observables import tv_distance
from drivencoin.schedule import Constant, Cosine, Table
from drivencoin.state import DEFAULT_COIN, PLUS_COIN, JointState, initial_state, position_distribution, reduced_coin


def purity(s):
    return float(np.trace(s.rho @ s.rho).real)


def test_dephasing_examples():
    s = initial_state(DEFAULT_COIN, 1)
    assert np.array_equal(apply_coin_dephasing(s, 1.0).rho, s.rho)
    np.testing.assert_allclose(reduced_coin(apply_coin_dephasing(s, 0.0)), np.eye(2) / 2, atol=1e-15)
    half = reduced_coin(apply_coin_dephasing(s, 0.5))
    np.testing.assert_allclose(half, 0.5 * np.array([[1, -0.5j], [0.5j, 1]]), atol=1e-15)


def test_dephasing_rejects_non_cp_strength():
    with pytest.raises(ContractViolation):
        apply_coin_dephasing(initial_state(DEFAULT_COIN, 1), 1.01)
    with pytest.raises(ContractViolation):
        dephasing_kraus(-0.2)


@settings(max_examples=20, deadline=None)
@given(kappa=st.floats(0, 1), seed=st.integers(0, 1000))
def test_kraus_path_matches_scaling(kappa, seed):
    traj = evolve(initial_state(DEFAULT_COIN, 6), Cosine(0.37), 5, snapshot_times=[5])
    s = traj.snapshots[5]
    a = apply_coin_dephasing(s, kappa).rho
    b = apply_coin_channel_kraus(s, dephasing_kraus(kappa)).rho
    assert np.max(np.abs(a - b)) <= 1e-14


@settings(max_examples=20, deadline=None)
@given(kappa=st.floats(-1, 1))
def test_phase_flip_kraus_pair(kappa):
    s = apply_walk_unitary(initial_state(DEFAULT_COIN, 2))
    pair = [np.sqrt((1 + kappa) / 2) * np.eye(2), np.sqrt((1 - kappa) / 2) * PAULI_Z]
    assert np.max(np.abs(apply_coin_dephasing(s, kappa).rho - apply_coin_channel_kraus(s, pair).rho)) <= 1e-15


def test_negative_one_is_unitary():
    traj = evolve(initial_state(DEFAULT_COIN, 30), Constant(-1.0), 30)
    s = traj.final
    assert abs(purity(s) - 1) <= 1e-10


def test_walk_unitary_examples():
    s = apply_walk_unitary(initial_state(PLUS_COIN, 2))
    r = s.tensor()
    # |1,+>/sqrt2 + |-1,->/sqrt2
    psi = np.zeros((5, 2), dtype=complex)
    psi[3, 0] = psi[1, 1] = 1 / np.sqrt(2)
    np.testing.assert_allclose(r, np.einsum("ab,cd->abcd", psi, psi.conj()), atol=1e-15)
    assert abs(purity(s) - 1) < 1e-14


def test_window_overflow():
    s = initial_state(DEFAULT_COIN, 1)
    s = apply_walk_unitary(s)
    with pytest.raises(HorizonExceeded):
        apply_walk_unitary(s)
    with pytest.raises(ConfigurationError):
        evolve(initial_state(DEFAULT_COIN, 5), Constant(1), 6)


def test_step_uses_next_index():
    s = apply_walk_unitary(initial_state(DEFAULT_COIN, 4))
    # table value at t=2 is applied on the second step
    got = step(s, Table((0.3, 0.9, 0.0)))
    want = apply_walk_unitary(apply_coin_dephasing(s, 0.0))
    assert np.array_equal(got.rho, want.rho)
    assert got.t == 2


def test_step_const_one_is_unitary_step():
    s = initial_state(DEFAULT_COIN, 3)
    assert np.array_equal(step(s, Constant(1)).rho, apply_walk_unitary(s).rho)


def test_horizon_zero():
    traj = evolve(initial_state(DEFAULT_COIN, 1), Constant(1), 0)
    assert len(traj) == 1
    assert traj.variance == [0.0] and traj.entropy == [0.0]
    assert traj.kappa == [1.0]


def test_unitary_variance_sequence(run):
    traj = run("const:1", 2)
    assert traj.variance == pytest.approx([0, 1, 2], abs=1e-14)


def test_classical_walk_is_binomial(run):
    traj = run("const:0", 50)
    for t in traj.t:
        assert abs(traj.variance[t] - t) <= 1e-10
        assert tv_distance(traj.distributions[t], binomial_distribution(t)) <= 1e-12


def test_kappa_column_and_records(run):
    traj = run("cos:0.1")
    assert len(traj) == 101
    assert traj.kappa[0] == 1.0
    assert traj.kappa[10] == pytest.approx(np.cos(1.0))


def test_schedule_not_covering_zero_reports_one():
    from drivencoin.schedule import Piecewise

    traj = evolve(initial_state(DEFAULT_COIN, 3), Piecewise(((1, float("inf"), 0.0),)), 3)
    assert traj.kappa == [1.0, 0.0, 0.0, 0.0]


@pytest.mark.parametrize("text", ["const:1", "const:0", "cos:0.1", "cos:0.5", "saw:", "piecewise:0-20=1,20-40=0,40-inf=1"])
def test_cptp_every_step(run, text):
    traj = run(text)
    assert max(traj.trace_error) <= 1e-12
    assert max(traj.hermiticity_defect) <= 1e-12
    eig = [e for e in traj.min_eigenvalue if not np.isnan(e)]
    assert len(eig) == 11 and min(eig) >= -1e-10


@pytest.mark.parametrize("text", ["const:1", "cos:0.1", "cos:0.3", "saw:", "const:-0.4"])
def test_light_cone_parity_symmetry(run, text):
    from drivencoin.observables import parity_leak, symmetry_defect

    traj = run(text)
    for t, p in traj.distributions.items():
        outside = np.abs(p.positions) > t
        assert np.all(p.probabilities[outside] == 0)
        assert parity_leak(p, t) <= 1e-14
        assert symmetry_defect(p) <= 1e-10


def test_unitary_purity(run):
    traj = run("const:1")
    for t in range(0, 101, 10):
        assert abs(purity(traj.snapshots[t]) - 1) <= 1e-10


@settings(max_examples=10, deadline=None)
@given(values=st.lists(st.floats(-1, 1), min_size=21, max_size=21))
def test_cptp_for_arbitrary_tables(values):
    traj = evolve(initial_state(DEFAULT_COIN, 20), Table(tuple(values)), 20, spectrum_stride=1)
    assert max(traj.trace_error) <= 1e-12
    assert min(traj.min_eigenvalue) >= -1e-10


def test_variance_bounds_for_slow_drive(run):
    v = np.array(run("cos:0.1").variance)
    vu = np.array(run("const:1").variance)
    t = np.arange(101)
    assert np.all(v >= t - 1e-6)
    assert np.all(v <= vu + 1e-6)


def test_trajectory_distribution_lookup():
    traj = evolve(initial_state(DEFAULT_COIN, 4), Constant(1), 4, snapshot_times=[3])
    p = trajectory_distribution(traj, 3)
    assert p.total() == pytest.approx(1.0)
    with pytest.raises(KeyError):
        trajectory_distribution(traj, 2)


def test_deterministic():
    a = evolve(initial_state(DEFAULT_COIN, 30), Cosine(0.1), 30)
    b = evolve(initial_state(DEFAULT_COIN, 30), Cosine(0.1), 30)
    assert np.array_equal(a.final.rho, b.final.rho)
    assert a.variance == b.variance
