"""Walker-coin correlations: mutual information, discord, and MID (in bits).

Measurements act on the coin only.  A von Neumann measurement is a pair of
orthogonal rank-1 projectors given by a Bloch axis ``(theta, phi)``; axes
``n`` and ``-n`` describe the same measurement, so the upper hemisphere
``theta in [0, pi/2]`` covers every case.

All quantities are computed on the occupied sites only (see
:meth:`JointState.compressed`), which is exact and keeps the walker blocks at
``t + 1`` sites for a localized start.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.optimize import minimize

from .errors import OptimizerWarning
from .evolution import apply_coin_dephasing, evolve
from .numerics import EIG_CLAMP, entropy_from_eigenvalues
from .schedule import DrivingSchedule, kappa_at
from .state import DEFAULT_COIN, CoinSpec, JointState, initial_state

DEGENERACY_GAP = 1e-10
MIN_PROBABILITY = 1e-12


@dataclass(frozen=True)
class CoinMeasurement:
    theta: float = 0.0
    phi: float = 0.0

    def basis(self):
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        b0 = np.array([c, e * s], dtype=complex)
        b1 = np.array([-e.conjugate() * s, c], dtype=complex)
        return b0, b1

    def projectors(self):
        return tuple(np.outer(b, b.conj()) for b in self.basis())

    @classmethod
    def from_vector(cls, v) -> "CoinMeasurement":
        """Measurement whose first outcome projects onto ``v``, folded to the upper hemisphere."""
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        theta = 2 * math.acos(min(1.0, abs(v[0])))
        phi = float(np.angle(v[1]) - np.angle(v[0])) if abs(v[1]) > 1e-15 else 0.0
        if theta > math.pi / 2:
            theta, phi = math.pi - theta, phi + math.pi
        return cls(theta, phi % (2 * math.pi))


STANDARD_BASIS = CoinMeasurement(0.0, 0.0)


@dataclass(frozen=True)
class OptimizerConfig:
    grid_theta: int = 24
    grid_phi: int = 24
    max_iter: int = 400
    tol: float = 1e-6


@dataclass(frozen=True)
class CorrelationRecord:
    t: int
    mutual_info: float
    classical_corr: float
    discord: float
    mid: float
    theta_opt: float
    phi_opt: float
    warn: bool = False
    mid_fallback: bool = False


class _Prepared:
    """Occupied-site blocks and the reduced entropies of one state."""

    def __init__(self, s: JointState):
        self.r = s.compressed()
        n = self.r.shape[0]
        self.n = n
        self.rho_w = np.einsum("xcyc->xy", self.r)
        self.rho_c = np.einsum("xcxd->cd", self.r)
        self.s_w = entropy_from_eigenvalues(np.linalg.eigvalsh(self.rho_w))
        self.s_c = entropy_from_eigenvalues(np.linalg.eigvalsh(self.rho_c))
        self._s_wc = None

    @property
    def s_wc(self) -> float:
        if self._s_wc is None:
            m = self.r.reshape(2 * self.n, 2 * self.n)
            self._s_wc = entropy_from_eigenvalues(np.linalg.eigvalsh(m))
        return self._s_wc

    def conditional_entropy(self, m: CoinMeasurement) -> float:
        b0, _ = m.basis()
        blk0 = np.einsum("c,xcyd,d->xy", b0.conj(), self.r, b0)
        blk1 = self.rho_w - blk0
        total = 0.0
        for blk in (blk0, blk1):
            p = float(np.trace(blk).real)
            if p > MIN_PROBABILITY:
                total += p * entropy_from_eigenvalues(np.linalg.eigvalsh(blk / p))
        return total

    def measured_mi(self, m: CoinMeasurement) -> float:
        return self.s_w - self.conditional_entropy(m)

    def measured_mi_batch(self, thetas: np.ndarray, phis: np.ndarray, chunk: int = 64) -> np.ndarray:
        """Vectorized :meth:`measured_mi` over many axes."""
        b0 = np.stack([np.cos(thetas / 2), np.exp(1j * phis) * np.sin(thetas / 2)], axis=1)
        out = np.empty(len(thetas))
        for lo in range(0, len(thetas), chunk):
            b = b0[lo : lo + chunk]
            blk0 = np.einsum("mc,xcyd,md->mxy", b.conj(), self.r, b, optimize=True)
            blocks = np.stack([blk0, self.rho_w[None] - blk0], axis=1)
            p = np.einsum("mjxx->mj", blocks).real
            safe = np.where(p > MIN_PROBABILITY, p, 1.0)
            w = np.linalg.eigvalsh(blocks / safe[..., None, None])
            inside = (w > EIG_CLAMP) & (w < 1.0 - EIG_CLAMP)
            w = np.where(inside, w, 1.0)
            h = -np.sum(w * np.log2(w), axis=-1)
            out[lo : lo + chunk] = self.s_w - np.sum(np.where(p > MIN_PROBABILITY, p * h, 0.0), axis=1)
        return out

    def mutual_information(self) -> float:
        return self.s_w + self.s_c - self.s_wc


def conditional_entropy(s: JointState, m: CoinMeasurement) -> float:
    """``sum_j p_j S(rho_j)`` with ``rho_j`` the normalized post-measurement walker state."""
    return _Prepared(s).conditional_entropy(m)


def measured_mutual_information(s: JointState, m: CoinMeasurement) -> float:
    return _Prepared(s).measured_mi(m)


def mutual_information(s: JointState) -> float:
    """``S(rho_w) + S(rho_c) - S(rho_wc)``."""
    return _Prepared(s).mutual_information()


def _marginal_basis(prep: _Prepared):
    w, v = np.linalg.eigh(prep.rho_c)
    if abs(w[1] - w[0]) < DEGENERACY_GAP:
        return STANDARD_BASIS, True
    return CoinMeasurement.from_vector(v[:, 1]), False


def _maximize(prep: _Prepared, config: OptimizerConfig):
    thetas = np.linspace(0.0, math.pi / 2, config.grid_theta)
    phis = 2 * math.pi * np.arange(config.grid_phi) / config.grid_phi
    # theta = 0 is a single measurement whatever phi is
    th, ph = np.meshgrid(thetas[1:], phis, indexing="ij")
    marginal = _marginal_basis(prep)[0]
    th = np.concatenate([[0.0], th.ravel(), [marginal.theta]])
    ph = np.concatenate([[0.0], ph.ravel(), [marginal.phi]])
    values = prep.measured_mi_batch(th, ph)
    i = int(np.argmax(values))
    best_val, best = float(values[i]), CoinMeasurement(float(th[i]), float(ph[i]))
    res = minimize(
        lambda p: -prep.measured_mi(CoinMeasurement(p[0], p[1])),
        x0=[best.theta, best.phi],
        method="Nelder-Mead",
        options={"xatol": config.tol, "fatol": config.tol, "maxiter": config.max_iter},
    )
    converged = bool(res.success)
    if -res.fun > best_val:
        best_val = float(-res.fun)
        best = CoinMeasurement.from_vector(CoinMeasurement(*res.x).basis()[0])
    return best_val, best, converged


def classical_correlation(s: JointState, config: OptimizerConfig = OptimizerConfig()):
    """Maximum of the measured mutual information over coin measurements.

    Coarse grid over the hemisphere, then a Nelder-Mead refinement from the best
    grid point.  The marginal eigenbasis is always among the candidates, so the
    result is never below the MID measurement's value.

    Returns ``(value, argmax, converged)``; a non-converged refinement also
    raises an :class:`OptimizerWarning` and still returns the best point found.
    """
    prep = _Prepared(s)
    val, arg, ok = _maximize(prep, config)
    if not ok:
        warnings.warn(f"measurement optimizer did not converge at t={s.t}", OptimizerWarning, stacklevel=2)
    return val, arg, ok


def _clamp(d: float) -> float:
    return 0.0 if -1e-6 <= d < 0 else float(d)


def quantum_discord(s: JointState, config: OptimizerConfig = OptimizerConfig()) -> float:
    prep = _Prepared(s)
    c, _, _ = _maximize(prep, config)
    return _clamp(prep.mutual_information() - c)


def mid_measurement(s: JointState):
    """Eigenbasis of the reduced coin state, or (+, -) when it is degenerate.

    Returns ``(measurement, used_fallback)``.
    """
    return _marginal_basis(_Prepared(s))


def measurement_induced_disturbance(s: JointState) -> float:
    prep = _Prepared(s)
    m, _ = _marginal_basis(prep)
    return prep.mutual_information() - prep.measured_mi(m)


def correlation_record(s: JointState, config: OptimizerConfig = OptimizerConfig()) -> CorrelationRecord:
    prep = _Prepared(s)
    i = prep.mutual_information()
    c, arg, ok = _maximize(prep, config)
    m, fallback = _marginal_basis(prep)
    q = i - prep.measured_mi(m)
    return CorrelationRecord(
        t=s.t,
        mutual_info=i,
        classical_corr=c,
        discord=_clamp(i - c),
        mid=q,
        theta_opt=arg.theta,
        phi_opt=arg.phi,
        warn=not ok,
        mid_fallback=fallback,
    )


def correlation_trajectory(
    schedule: DrivingSchedule,
    horizon: int,
    stride: int = 2,
    coin: CoinSpec = DEFAULT_COIN,
    config: OptimizerConfig = OptimizerConfig(),
    observe: str = "post-step",
    window: Optional[int] = None,
) -> list:
    """Correlation records at ``t = 0, stride, 2 stride, ... <= horizon``.

    ``observe="post-step"`` measures the state right after the shift (the state
    every other module calls the time-``t`` state).  ``observe="pre-flip"``
    first applies the next channel, ``kappa(t + 1)``, i.e. it looks at the state
    the following coin flip acts on.
    """
    if stride < 1:
        raise ValueError("stride must be at least 1")
    if observe not in ("post-step", "pre-flip"):
        raise ValueError(f"unknown observation point {observe!r}")
    times = list(range(0, horizon + 1, stride))
    window = max(window or horizon, 1)
    traj = evolve(initial_state(coin, window), schedule, horizon, snapshot_times=times, spectrum_stride=0)
    records = []
    for t in times:
        s = traj.snapshots[t]
        if observe == "pre-flip":
            s = apply_coin_dephasing(s, kappa_at(schedule, t + 1))
        records.append(correlation_record(s, config))
    return records


def records_as_arrays(records: Iterable[CorrelationRecord]) -> dict:
    records = list(records)
    keys = ("t", "mutual_info", "classical_corr", "discord", "mid")
    return {k: np.array([getattr(r, k) for r in records], dtype=float) for k in keys}
