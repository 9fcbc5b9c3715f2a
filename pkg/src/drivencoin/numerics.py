"""Dense Hermitian linear algebra and entropy functionals.

Everything here is a pure function of its inputs.  Entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation

HERMITIAN_ATOL = 1e-12
EIG_CLAMP = 1e-12
NEGATIVE_EIG_ATOL = 1e-9
TRACE_ATOL = 1e-6


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(m) -> float:
    """Return ``max |M - M^dagger|`` entrywise."""
    m = _as_square(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # first component with non-negligible magnitude made real-positive
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-10)
        if nz.size:
            ref = col[nz[0]]
            out[:, j] = col * (abs(ref) / ref)
    return out


def hermitian_eigendecompose(m, atol: float = HERMITIAN_ATOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back sorted in descending order.  Each eigenvector is
    rotated so that its first non-negligible component is real and positive,
    which makes the output reproducible for identical input.

    Raises
    ------
    ContractViolation
        If ``m`` is not square or not Hermitian within ``atol``
        (scaled by the largest entry for large-norm inputs).
    """
    m = _as_square(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if hermiticity_defect(m) > atol * scale:
        raise ContractViolation("matrix is not Hermitian")
    w, v = np.linalg.eigh(m)
    order = np.argsort(w, kind="stable")[::-1]
    return Spectrum(eigenvalues=w[order], eigenvectors=_fix_phases(v[:, order]))


def _plogp(p: np.ndarray, clamp: float) -> float:
    # p within clamp of 0 or of 1 contributes zero, so roundoff in a pure
    # state's unit eigenvalue does not show up as entropy
    p = p[(p > clamp) & (p < 1.0 - EIG_CLAMP)]
    if p.size == 0:
        return 0.0
    return float(-np.sum(p * np.log2(p)))


def entropy_from_eigenvalues(eigs) -> float:
    """``-sum p log2 p`` over eigenvalues strictly inside the clamp band."""
    return _plogp(np.asarray(eigs, dtype=float), EIG_CLAMP)


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy of a density matrix, in bits."""
    rho = _as_square(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ContractViolation(f"density matrix trace is {tr.real:.3g}, expected 1")
    if hermiticity_defect(rho) > 1e-9:
        raise ContractViolation("density matrix is not Hermitian")
    w = np.linalg.eigvalsh(rho)
    if w.size and w[0] < -NEGATIVE_EIG_ATOL:
        raise ContractViolation(f"density matrix has eigenvalue {w[0]:.3g} < 0")
    return entropy_from_eigenvalues(w)


def shannon_entropy(probs) -> float:
    """Shannon entropy of a probability vector, in bits.

    Zero entries contribute nothing, nor does an entry within 1e-12 of one.
    """
    p = np.asarray(probs, dtype=float)
    if p.size and p.min() < -1e-12:
        raise ContractViolation(f"negative probability {p.min():.3g}")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ContractViolation(f"probabilities sum to {p.sum():.12g}, expected 1")
    return _plogp(p, 0.0)
