"""Momentum-space moments of the walker position.

A localized start makes every momentum slice evolve independently:
``rho(k, k') -> U(k) E[rho(k, k')] U(k')^dagger`` with
``U(k) = diag(e^{-ik}, e^{ik}) H``.  Differentiating the slices with respect to
``k`` and ``k'`` gives exact moments,

    <x>   = int dk/2pi  sum_j Tr[Z X_j]
    <x^2> = int dk/2pi  sum_j ( sum_{j'<=j} Tr[Z L_{j<-j'+1}(Z X_j')]
                                 + sum_{j'<j} Tr[Z L_{j<-j'+1}(X_j' Z)] )

where ``X_j = L_j ... L_1 rho_c`` and ``L_{j<-j'+1}`` composes the channels of
steps ``j'+1 .. j`` in time order.  The k-integral uses the periodic trapezoidal
rule on a uniform grid; for a horizon of ``T`` steps the integrand is a
trigonometric polynomial of degree ``2T``, so any grid with more than ``2T``
points integrates it exactly.

This module shares no code with the position-space engine in
:mod:`drivencoin.evolution`; it is the independent check on it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, QuadratureWarning
from .schedule import DrivingSchedule, kappa_at
from .state import DEFAULT_COIN, CoinSpec

_Z = np.diag([1.0, -1.0]).astype(complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
# third Pauli basis element is sigma_y transposed; with it the printed random-walk
# transfer matrix and the Z_L / Z_R multiplication matrices are mutually consistent
_YT = np.array([[0, 1j], [-1j, 0]], dtype=complex)
PAULI_BASIS = (np.eye(2, dtype=complex), _X, _YT, _Z)


def coin_step_matrix(k: float) -> np.ndarray:
    """``U(k) = (1/sqrt2) [[e^{-ik}, e^{-ik}], [e^{ik}, -e^{ik}]]``."""
    em, ep = np.exp(-1j * k), np.exp(1j * k)
    return np.array([[em, em], [ep, -ep]]) / np.sqrt(2)


def _coin_step_grid(ks: np.ndarray) -> np.ndarray:
    em, ep = np.exp(-1j * ks), np.exp(1j * ks)
    u = np.empty((len(ks), 2, 2), dtype=complex)
    u[:, 0, 0] = em
    u[:, 0, 1] = em
    u[:, 1, 0] = ep
    u[:, 1, 1] = -ep
    return u / np.sqrt(2)


@dataclass(frozen=True)
class EigenSystemK:
    """Eigenphases ``theta_0, theta_1`` and eigenvector columns of ``U(k)``.

    ``theta_0`` is the branch with ``cos(theta_0) > 0``; it equals
    ``-arcsin(sin(k)/sqrt2)`` and is smooth in ``k``.
    """

    k: float
    phases: np.ndarray
    vectors: np.ndarray


def eigensystem(k: float) -> EigenSystemK:
    w, v = np.linalg.eig(coin_step_matrix(k))
    theta = np.angle(w)
    order = [int(np.argmax(np.cos(theta))), int(np.argmin(np.cos(theta)))]
    theta = theta[order]
    v = v[:, order]
    v = v / np.linalg.norm(v, axis=0)
    for j in range(2):
        ref = v[0, j] if abs(v[0, j]) > 1e-12 else v[1, j]
        v[:, j] *= abs(ref) / ref
    return EigenSystemK(k=float(k), phases=theta, vectors=v)


def eigenphases(k):
    """Closed-form ``(theta_0(k), theta_1(k))``; ``theta_1 = pi - theta_0``."""
    a = np.arcsin(np.sin(k) / np.sqrt(2))
    return -a, np.pi + a


def eigenprojector(branch: int, k: float) -> np.ndarray:
    """Spectral projector of ``U(k)`` onto the ``e^{i theta_branch}`` eigenspace."""
    th = eigenphases(k)
    lam = np.exp(1j * th[branch])
    other = np.exp(1j * th[1 - branch])
    return (coin_step_matrix(k) - other * np.eye(2)) / (lam - other)


def _dephase(o: np.ndarray, kappa: float) -> np.ndarray:
    out = o.copy()
    out[..., 0, 1] *= kappa
    out[..., 1, 0] *= kappa
    return out


def superoperator_apply(o, k: float, k_prime: float, kappa: float) -> np.ndarray:
    """``U(k) [kappa O + (1-kappa)(P+ O P+ + P- O P-)] U(k')^dagger``."""
    if not abs(kappa) <= 1:
        raise ContractViolation(f"|kappa| = {abs(kappa)} > 1")
    o = np.asarray(o, dtype=complex)
    return coin_step_matrix(k) @ _dephase(o, kappa) @ coin_step_matrix(k_prime).conj().T


def to_pauli(o) -> np.ndarray:
    """Coefficients ``r`` with ``O = r1 1 + r2 X + r3 Y^T + r4 Z``."""
    o = np.asarray(o, dtype=complex)
    return np.array([np.trace(b.conj().T @ o) / 2 for b in PAULI_BASIS])


def from_pauli(r) -> np.ndarray:
    return sum(c * b for c, b in zip(r, PAULI_BASIS))


def rw_transfer_matrix(k: float) -> np.ndarray:
    """Fully dephased one-step map on Pauli coefficients."""
    c, s = np.cos(2 * k), np.sin(2 * k)
    return np.array(
        [[1, 0, 0, 0], [0, 0, 0, c], [0, 0, 0, -s], [0, 0, 0, 0]], dtype=float
    )


def pauli_transfer_matrix(k: float, kappa: float) -> np.ndarray:
    """The one-step map at strength ``kappa`` written on Pauli coefficients."""
    cols = [to_pauli(superoperator_apply(b, k, k, kappa)) for b in PAULI_BASIS]
    return np.array(cols).T


Z_LEFT = np.array(
    [[0, 0, 0, 1], [0, 0, 1j, 0], [0, -1j, 0, 0], [1, 0, 0, 0]], dtype=complex
)
Z_RIGHT = np.array(
    [[0, 0, 0, 1], [0, 0, -1j, 0], [0, 1j, 0, 0], [1, 0, 0, 0]], dtype=complex
)


def k_grid(n: int, offset: float = 0.0) -> np.ndarray:
    """``n`` uniform points on ``[-pi, pi)``, shifted by ``offset`` grid spacings."""
    return -np.pi + (np.arange(n) + offset) * (2 * np.pi / n)


def _moments_on_grid(schedule, horizon, rho_c, n_k):
    u = _coin_step_grid(k_grid(n_k))
    ud = u.conj().transpose(0, 2, 1)

    def trz(a):
        return np.mean(a[:, 0, 0] - a[:, 1, 1])

    x = np.broadcast_to(rho_c, (n_k, 2, 2)).astype(complex)
    left = np.zeros_like(x)
    right = np.zeros_like(x)
    first = np.zeros(horizon + 1, dtype=complex)
    second = np.zeros(horizon + 1, dtype=complex)
    for j in range(1, horizon + 1):
        kap = kappa_at(schedule, j)
        if not abs(kap) <= 1:
            raise ContractViolation(f"kappa({j}) = {kap} outside [-1, 1]")
        x = u @ _dephase(x, kap) @ ud
        left = u @ _dephase(left, kap) @ ud
        right = u @ _dephase(right, kap) @ ud
        first[j] = trz(x)
        # j' = j term of the left-insertion sum, then the j' < j terms
        second[j] = trz(_Z @ x) + trz(left) + trz(right)
        left = left + _Z @ x
        right = right + x @ _Z
    return np.cumsum(first), np.cumsum(second)


def exact_moments(
    schedule: DrivingSchedule,
    horizon: int,
    n_k: int = 4096,
    coin: CoinSpec = DEFAULT_COIN,
    check_convergence: bool = True,
) -> np.ndarray:
    """Rows ``(t, <x>, <x^2>)`` for ``t = 0 .. horizon``.

    With ``check_convergence`` the moments are recomputed on a grid twice as
    fine and a :class:`QuadratureWarning` is issued if they move by more
    than 1e-8.
    """
    if n_k < 256 or n_k % 2:
        raise ContractViolation("n_k must be even and at least 256")
    if horizon < 0:
        raise ContractViolation("horizon must be non-negative")
    rho_c = coin.density()
    m1, m2 = _moments_on_grid(schedule, horizon, rho_c, n_k)
    if check_convergence:
        f1, f2 = _moments_on_grid(schedule, horizon, rho_c, 2 * n_k)
        delta = max(np.max(np.abs(f1 - m1)), np.max(np.abs(f2 - m2)))
        if delta > 1e-8:
            warnings.warn(
                f"moments changed by {delta:.3g} when n_k doubled "
                f"({n_k}: <x^2>={m2[-1].real:.12g}, {2 * n_k}: <x^2>={f2[-1].real:.12g})",
                QuadratureWarning,
                stacklevel=2,
            )
    t = np.arange(horizon + 1, dtype=float)
    return np.column_stack([t, m1.real, m2.real])


def moment_imaginary_residual(schedule, horizon, n_k=4096, coin=DEFAULT_COIN) -> float:
    """Largest imaginary part of the accumulated moments (should be roundoff)."""
    m1, m2 = _moments_on_grid(schedule, horizon, coin.density(), n_k)
    return float(max(np.max(np.abs(m1.imag)), np.max(np.abs(m2.imag))))


def pauli_rw_moments(horizon: int, n_k: int = 1024, coin: CoinSpec = DEFAULT_COIN) -> np.ndarray:
    """Fully dephased walk moments computed on Pauli coefficients.

    Uses :func:`rw_transfer_matrix` with the ``Z_LEFT`` / ``Z_RIGHT``
    insertions; ``Tr[Z A] = 2 (Z_LEFT a)_1`` in this basis.
    Returns rows ``(t, <x>, <x^2>)``.
    """
    r0 = to_pauli(coin.density())
    z_sum = Z_LEFT + Z_RIGHT
    out = np.zeros((horizon + 1, 3))
    out[:, 0] = np.arange(horizon + 1)
    m1 = np.zeros(horizon + 1)
    m2 = np.zeros(horizon + 1)
    for k in k_grid(n_k):
        tm = rw_transfer_matrix(k).astype(complex)
        x = r0.copy()
        acc = np.zeros(4, dtype=complex)
        f = np.zeros(horizon + 1)
        g = np.zeros(horizon + 1)
        for j in range(1, horizon + 1):
            x = tm @ x
            acc = tm @ acc
            f[j] = 2 * x[3].real
            g[j] = 1.0 + 2 * (Z_LEFT @ acc)[0].real
            acc = acc + z_sum @ x
        m1 += np.cumsum(f)
        m2 += np.cumsum(g)
    out[:, 1] = m1 / n_k
    out[:, 2] = m2 / n_k
    return out
