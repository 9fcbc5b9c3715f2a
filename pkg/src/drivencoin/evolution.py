"""One walk step = coin dephasing with strength ``kappa(t)``, then ``F (1 x H)``.

States evolve forward, ``rho -> U rho U^dagger``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import ConfigurationError, ContractViolation, HorizonExceeded
from .numerics import shannon_entropy
from .observables import variance
from .schedule import DrivingSchedule, kappa_at
from .state import JointState, PositionDistribution, position_distribution

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)
PROJ_PLUS = np.diag([1.0, 0.0]).astype(complex)
PROJ_MINUS = np.diag([0.0, 1.0]).astype(complex)


def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not abs(kappa) <= 1.0:
        raise ContractViolation(f"|kappa| = {abs(kappa)} > 1; the map would not be CP")
    return kappa


def _replace(s: JointState, rho4: np.ndarray, t: int) -> JointState:
    return JointState(window=s.window, t=t, rho=rho4.reshape(s.dim, s.dim))


def apply_coin_dephasing(s: JointState, kappa: float) -> JointState:
    """Scale every coin off-diagonal element (any pair of positions) by ``kappa``.

    Equivalent to the Kraus pair ``sqrt((1+kappa)/2) 1``, ``sqrt((1-kappa)/2) Z``,
    so it is CPTP for all ``kappa`` in [-1, 1].
    """
    kappa = _check_kappa(kappa)
    r = s.tensor().copy()
    r[:, 0, :, 1] *= kappa
    r[:, 1, :, 0] *= kappa
    return _replace(s, r, s.t)


def dephasing_kraus(kappa: float) -> list:
    """Kraus triple ``sqrt(kappa) 1, sqrt(1-kappa) P+, sqrt(1-kappa) P-`` (needs kappa >= 0)."""
    kappa = _check_kappa(kappa)
    if kappa < 0:
        raise ContractViolation("the projector Kraus form needs kappa >= 0")
    a = np.sqrt(1.0 - kappa)
    return [np.sqrt(kappa) * np.eye(2, dtype=complex), a * PROJ_PLUS, a * PROJ_MINUS]


def apply_coin_channel_kraus(s: JointState, kraus) -> JointState:
    """Apply ``sum_n (1 x A_n) rho (1 x A_n)^dagger`` for 2x2 Kraus operators."""
    r = s.tensor()
    out = np.zeros_like(r)
    for a in kraus:
        out += np.einsum("ac,xcyd,bd->xayb", a, r, a.conj(), optimize=True)
    return _replace(s, out, s.t)


def apply_walk_unitary(s: JointState) -> JointState:
    """Hadamard coin flip followed by the conditional shift (+ right, - left).

    Raises
    ------
    HorizonExceeded
        If the state is already at the edge of its window (``t >= window``).
    """
    if s.t >= s.window:
        raise HorizonExceeded(f"step {s.t + 1} needs window > {s.window}")
    r = np.einsum("ac,xcyd,bd->xayb", HADAMARD, s.tensor(), HADAMARD.conj(), optimize=True)
    out = np.zeros_like(r)
    out[1:, 0, 1:, 0] = r[:-1, 0, :-1, 0]
    out[1:, 0, :-1, 1] = r[:-1, 0, 1:, 1]
    out[:-1, 1, 1:, 0] = r[1:, 1, :-1, 0]
    out[:-1, 1, :-1, 1] = r[1:, 1, 1:, 1]
    return _replace(s, out, s.t + 1)


def step(s: JointState, schedule: DrivingSchedule) -> JointState:
    """Advance one step using ``kappa(t + 1)``."""
    return apply_walk_unitary(apply_coin_dephasing(s, kappa_at(schedule, s.t + 1)))


@dataclass
class Trajectory:
    """Per-step records of an evolution, ``t = t0 .. t0 + horizon``.

    ``min_eigenvalue`` is NaN at steps where the spectrum was not checked.
    """

    schedule_label: str
    t: list = field(default_factory=list)
    kappa: list = field(default_factory=list)
    variance: list = field(default_factory=list)
    entropy: list = field(default_factory=list)
    trace_error: list = field(default_factory=list)
    hermiticity_defect: list = field(default_factory=list)
    min_eigenvalue: list = field(default_factory=list)
    distributions: dict = field(default_factory=dict)
    snapshots: dict = field(default_factory=dict)
    final: Optional[JointState] = None

    def __len__(self):
        return len(self.t)

    def as_array(self, name: str) -> np.ndarray:
        return np.asarray(getattr(self, name), dtype=float)


def _diagnostics(s: JointState, check_spectrum: bool):
    r = s.rho
    tr_err = abs(np.trace(r) - 1.0)
    herm = float(np.max(np.abs(r - r.conj().T)))
    min_eig = float("nan")
    if check_spectrum:
        c = s.compressed()
        n = c.shape[0]
        min_eig = float(np.linalg.eigvalsh(c.reshape(2 * n, 2 * n))[0])
    return tr_err, herm, min_eig


def evolve(
    initial: JointState,
    schedule: DrivingSchedule,
    horizon: int,
    snapshot_times: Iterable[int] = (),
    keep_distributions: bool = False,
    spectrum_stride: int = 10,
    label: str = "",
) -> Trajectory:
    """Run ``horizon`` steps, recording variance and Shannon entropy each step.

    Parameters
    ----------
    snapshot_times:
        Steps at which the full :class:`JointState` is kept.
    keep_distributions:
        Keep every :class:`PositionDistribution` (memory grows with horizon).
    spectrum_stride:
        Check the minimum eigenvalue every this many steps; ``0`` disables it.
    """
    if horizon < 0:
        raise ConfigurationError("horizon must be non-negative")
    if initial.t + horizon > initial.window:
        raise ConfigurationError(
            f"horizon {horizon} from t={initial.t} exceeds window {initial.window}"
        )
    snaps = set(snapshot_times)
    traj = Trajectory(schedule_label=label)
    s = initial
    while True:
        p = position_distribution(s)
        traj.t.append(s.t)
        traj.kappa.append(_recorded_kappa(schedule, s.t))
        traj.variance.append(variance(p))
        traj.entropy.append(shannon_entropy(p.probabilities))
        check = spectrum_stride > 0 and (s.t - initial.t) % spectrum_stride == 0
        tr, herm, me = _diagnostics(s, check)
        traj.trace_error.append(tr)
        traj.hermiticity_defect.append(herm)
        traj.min_eigenvalue.append(me)
        if keep_distributions:
            traj.distributions[s.t] = p
        if s.t in snaps:
            traj.snapshots[s.t] = s
        if s.t - initial.t >= horizon:
            break
        s = step(s, schedule)
    traj.final = s
    return traj


def _recorded_kappa(schedule, t: int) -> float:
    # t = 0 is never used by a channel; schedules that do not cover it report 1
    if t == 0:
        try:
            return kappa_at(schedule, 0)
        except IndexError:
            return 1.0
    return kappa_at(schedule, t)


def trajectory_distribution(traj: Trajectory, t: int) -> PositionDistribution:
    if t in traj.distributions:
        return traj.distributions[t]
    if t in traj.snapshots:
        return position_distribution(traj.snapshots[t])
    raise KeyError(f"no distribution kept for t = {t}")
