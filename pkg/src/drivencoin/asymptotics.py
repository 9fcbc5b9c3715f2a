"""Long-time closed forms for the Hadamard walk and its fully dephased limit.

The quantum distribution is evaluated by stationary phase.  The amplitude at
``x`` after ``t`` steps is

    psi(x) = sum_l int dk/2pi  Pi_l(k) Phi  exp(i t [theta_l(k) + (x/t) k])

with ``Pi_l`` the spectral projectors of ``U(k)``.  For ``|x| < t/sqrt2`` each
branch has two stationary points ``cos k = +-alpha/sqrt(1-alpha^2)``
(``alpha = x/t``), and each contributes
``Pi_l Phi exp(i t phase + i sgn pi/4) / sqrt(2 pi t |theta_l''|)`` with
``|theta''| = |sin k| / (1 + cos^2 k)^{3/2}``.  Outside ``|x| < t/sqrt2`` the
distribution is exponentially small and is set to zero.  The approximation
breaks down within a few sites of the caustic ``|x| = t/sqrt2``, which is
where almost all of its error sits.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import AsymptoticRegimeWarning, ContractViolation
from .momentum import eigenphases, k_grid
from .schedule import DrivingSchedule, kappa_at
from .state import DEFAULT_COIN, CoinSpec, PositionDistribution

ANALYTIC_C = 1.0 - 1.0 / math.sqrt(2.0)
SIN_CLAMP = 1e-6


@dataclass(frozen=True)
class BallisticConstants:
    c1: float
    c2: float
    analytic: float = ANALYTIC_C

    @property
    def variance_coefficient(self) -> float:
        return self.c2 - self.c1**2


def ballistic_constants(n_k: int = 4096) -> BallisticConstants:
    """``C1 = C2 = 1 - int dk/2pi 1/(1 + cos^2 k)`` by the periodic trapezoidal rule."""
    if n_k < 256:
        raise ContractViolation("n_k must be at least 256")
    ks = k_grid(n_k)
    integral = float(np.mean(1.0 / (1.0 + np.cos(ks) ** 2)))
    # both constants reduce to the same integral
    return BallisticConstants(c1=1.0 - integral, c2=1.0 - integral)


def velocity_moments(coin: CoinSpec = DEFAULT_COIN, n_k: int = 4096):
    """``(lim <x>/t, lim <x^2>/t^2)`` for the unitary walk started from ``coin``.

    The branch velocities are ``-theta_l'(k) = +-cos k / sqrt(1 + cos^2 k)``,
    weighted by the branch populations ``<Phi|Pi_l(k)|Phi>``.
    """
    ks = k_grid(n_k)
    v = np.cos(ks) / np.sqrt(1.0 + np.cos(ks) ** 2)
    weight0 = _branch_population(0, ks, coin.vector)
    c1 = float(np.mean(weight0 * v - (1.0 - weight0) * v))
    c2 = float(np.mean(v**2))
    return c1, c2


def _coin_step(ks):
    em, ep = np.exp(-1j * ks), np.exp(1j * ks)
    u = np.empty(np.shape(ks) + (2, 2), dtype=complex)
    u[..., 0, 0] = em
    u[..., 0, 1] = em
    u[..., 1, 0] = ep
    u[..., 1, 1] = -ep
    return u / np.sqrt(2)


def _projector(branch, ks):
    th = eigenphases(ks)
    lam = np.exp(1j * th[branch])[..., None, None]
    other = np.exp(1j * th[1 - branch])[..., None, None]
    return (_coin_step(ks) - other * np.eye(2)) / (lam - other)


def _branch_population(branch, ks, phi):
    proj = _projector(branch, ks)
    return np.einsum("i,...ij,j->...", phi.conj(), proj, phi).real


def asymptotic_quantum_variance(t: int, coefficient: float | None = None) -> float:
    """``t^2 (C2 - C1^2)``; the default coefficient is ``1/sqrt2 - 1/2``."""
    if coefficient is None:
        coefficient = ANALYTIC_C - ANALYTIC_C**2
    return float(t) ** 2 * coefficient


def _stationary_phase(t: int, phi: np.ndarray) -> np.ndarray:
    xs = np.arange(-t, t + 1)
    alpha = xs / t
    inside = np.abs(alpha) < 1 / math.sqrt(2)
    amp = np.zeros((len(xs), 2), dtype=complex)
    a = alpha[inside]
    c = a / np.sqrt(1 - a * a)
    x_in = xs[inside].astype(float)
    for branch, cos_k in ((0, c), (1, -c)):
        k0 = np.arccos(np.clip(cos_k, -1.0, 1.0))
        for k in (k0, -k0):
            sin_k = np.sin(k)
            curv = (1 if branch == 0 else -1) * sin_k / (1 + np.cos(k) ** 2) ** 1.5
            keep = np.abs(sin_k) >= SIN_CLAMP
            curv_safe = np.where(keep, curv, 1.0)
            phase = t * eigenphases(k)[branch] + x_in * k + np.sign(curv_safe) * math.pi / 4
            vec = np.einsum("nij,j->ni", _projector(branch, k), phi)
            contrib = vec * (np.exp(1j * phase) / np.sqrt(2 * math.pi * t * np.abs(curv_safe)))[:, None]
            amp[inside] += np.where(keep[:, None], contrib, 0.0)
    p = np.sum(np.abs(amp) ** 2, axis=1)
    p[(xs + t) % 2 == 1] = 0.0
    return p


@dataclass(frozen=True)
class AsymptoticDistribution:
    distribution: PositionDistribution
    defect: float  # |sum P - 1| before renormalization


def asymptotic_quantum_distribution(t: int, coin: CoinSpec = DEFAULT_COIN) -> AsymptoticDistribution:
    """Stationary-phase position distribution of the unitary walk at step ``t``.

    The raw values are renormalized; the raw normalization defect is reported
    and an :class:`AsymptoticRegimeWarning` is issued when it exceeds 0.05.
    """
    if t < 1:
        raise ContractViolation("t must be positive")
    raw = _stationary_phase(int(t), coin.vector)
    total = float(raw.sum())
    defect = abs(total - 1.0)
    if defect > 0.05:
        warnings.warn(
            f"stationary-phase normalization defect {defect:.3g} at t={t}",
            AsymptoticRegimeWarning,
            stacklevel=2,
        )
    return AsymptoticDistribution(PositionDistribution(-int(t), raw / total), defect)


def binomial_distribution(t: int) -> PositionDistribution:
    """Unbiased random-walk distribution on ``x = -t .. t``."""
    if t < 0:
        raise ContractViolation("t must be non-negative")
    xs = np.arange(-t, t + 1)
    p = np.zeros(len(xs))
    even = (xs + t) % 2 == 0
    r = (t + xs[even]) // 2
    if t <= 30:
        p[even] = [math.comb(t, int(ri)) / 2.0**t for ri in r]
    else:
        p[even] = np.exp(gammaln(t + 1) - gammaln(r + 1) - gammaln(t - r + 1) - t * math.log(2))
    return PositionDistribution(-t, p)


def mixture_weight(schedule: DrivingSchedule, t: int, mode: str = "abs") -> float:
    """Weight of the quantum part: ``|kappa(t)|`` (default) or the signed ``kappa(t)``."""
    k = kappa_at(schedule, t)
    if mode == "abs":
        return abs(k)
    if mode == "signed":
        return k
    raise ValueError(f"unknown mixture mode {mode!r}")


def mixture_distribution(
    t: int, weight: float, coin: CoinSpec = DEFAULT_COIN, signed: bool = False
) -> PositionDistribution:
    """``w P^Q + (1 - w) P^R``.

    ``weight`` must lie in [0, 1] unless ``signed`` is set, in which case the
    result may have negative entries.
    """
    lo = -1.0 if signed else 0.0
    if not lo <= weight <= 1.0:
        raise ContractViolation(f"mixture weight {weight} outside [{lo}, 1]")
    if weight == 1.0:
        return asymptotic_quantum_distribution(t, coin).distribution
    if weight == 0.0:
        return binomial_distribution(t)
    pq = asymptotic_quantum_distribution(t, coin).distribution.probabilities
    pr = binomial_distribution(t).probabilities
    return PositionDistribution(-t, weight * pq + (1.0 - weight) * pr)


def mixture_variance(t: int, weight: float, coefficient: float | None = None) -> float:
    """``w t^2 (C2 - C1^2) + (1 - w) t``."""
    return weight * asymptotic_quantum_variance(t, coefficient) + (1.0 - weight) * t
