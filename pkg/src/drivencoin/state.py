"""Joint walker-coin density matrices on a bounded position window.

Index layout is position-major: flat index ``2 * (x + T_max) + c`` with
coin ``c = 0`` for ``|+>`` (steps right) and ``c = 1`` for ``|->``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation

PLUS, MINUS = 0, 1


@dataclass(frozen=True)
class CoinSpec:
    """Pure coin state ``a_plus |+> + a_minus |->``."""

    amplitude_plus: complex
    amplitude_minus: complex

    def __post_init__(self):
        norm = abs(self.amplitude_plus) ** 2 + abs(self.amplitude_minus) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ContractViolation(f"coin state has norm^2 {norm:.15g}, expected 1")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amplitude_plus, self.amplitude_minus], dtype=complex)

    def density(self) -> np.ndarray:
        v = self.vector
        return np.outer(v, v.conj())

    @classmethod
    def parse(cls, text: str) -> "CoinSpec":
        """Parse ``"a,b"`` with Python complex literals, e.g. ``"0.7071,0.7071j"``.

        The named coins ``default``, ``plus`` and ``minus`` are also accepted.
        Amplitudes are normalized after parsing so that truncated decimals work.
        """
        named = {"default": DEFAULT_COIN, "plus": PLUS_COIN, "minus": MINUS_COIN}
        if text in named:
            return named[text]
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"coin must be 'a,b', got {text!r}")
        a, b = (complex(p.strip().replace(" ", "")) for p in parts)
        n = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if n == 0:
            raise ValueError("coin amplitudes are both zero")
        return cls(a / n, b / n)


DEFAULT_COIN = CoinSpec(1 / np.sqrt(2), 1j / np.sqrt(2))
PLUS_COIN = CoinSpec(1.0, 0.0)
MINUS_COIN = CoinSpec(0.0, 1.0)


@dataclass(frozen=True)
class PositionDistribution:
    """Probabilities ``P(x)`` for ``x = x_min, x_min + 1, ...``."""

    x_min: int
    probabilities: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.x_min, self.x_min + len(self.probabilities))

    def at(self, x: int) -> float:
        i = x - self.x_min
        if 0 <= i < len(self.probabilities):
            return float(self.probabilities[i])
        return 0.0

    def total(self) -> float:
        return float(np.sum(self.probabilities))


@dataclass(frozen=True)
class JointState:
    """Immutable snapshot of the walker-coin density matrix at step ``t``."""

    window: int
    t: int
    rho: np.ndarray

    def __post_init__(self):
        d = 2 * (2 * self.window + 1)
        if self.rho.shape != (d, d):
            raise ContractViolation(f"rho has shape {self.rho.shape}, expected {(d, d)}")
        self.rho.setflags(write=False)

    @property
    def sites(self) -> int:
        return 2 * self.window + 1

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def tensor(self) -> np.ndarray:
        """View of ``rho`` as ``[x, c, x', c']``."""
        n = self.sites
        return self.rho.reshape(n, 2, n, 2)

    def support(self) -> np.ndarray:
        """Site indices with nonzero occupation.

        Zero diagonal on a PSD matrix forces the whole row and column to zero,
        so restricting to this set loses nothing.
        """
        return np.flatnonzero(np.einsum("xcxc->x", self.tensor()).real > 0)

    def compressed(self) -> np.ndarray:
        """``rho`` restricted to occupied sites, shape ``[n, 2, n, 2]``."""
        idx = self.support()
        return self.tensor()[np.ix_(idx, [0, 1], idx, [0, 1])]


def initial_state(coin: CoinSpec = DEFAULT_COIN, window: int = 1) -> JointState:
    """Walker localized at the origin with the coin in the pure state ``coin``."""
    if window < 1:
        raise ContractViolation("window half-width must be at least 1")
    if not isinstance(coin, CoinSpec):
        coin = CoinSpec(*coin)
    n = 2 * window + 1
    rho = np.zeros((n, 2, n, 2), dtype=complex)
    rho[window, :, window, :] = coin.density()
    return JointState(window=window, t=0, rho=rho.reshape(2 * n, 2 * n))


def position_distribution(s: JointState) -> PositionDistribution:
    p = np.einsum("xcxc->x", s.tensor()).real.copy()
    return PositionDistribution(x_min=-s.window, probabilities=p)


def reduced_coin(s: JointState) -> np.ndarray:
    """Partial trace over position; a 2x2 density matrix in the (+, -) basis."""
    return np.einsum("xcxd->cd", s.tensor())


def reduced_walker(s: JointState) -> np.ndarray:
    """Partial trace over the coin; a ``(2 T_max + 1)``-dimensional density matrix."""
    return np.einsum("xcyc->xy", s.tensor())


def mix(states, weights) -> JointState:
    """Convex combination of states sharing window and time."""
    states = list(states)
    w = np.asarray(weights, dtype=float)
    if len(states) != len(w) or w.min() < 0 or abs(w.sum() - 1) > 1e-12:
        raise ContractViolation("weights must be a probability vector matching the states")
    first = states[0]
    if any(s.window != first.window for s in states):
        raise ContractViolation("states live on different windows")
    rho = sum(wi * s.rho for wi, s in zip(w, states))
    return JointState(window=first.window, t=first.t, rho=np.array(rho))
