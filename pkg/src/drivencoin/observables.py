"""Scalar diagnostics of a position distribution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import shannon_entropy
from .state import PositionDistribution


@dataclass(frozen=True)
class MomentSet:
    m1: float
    m2: float
    variance: float

    @property
    def spread(self) -> float:
        return float(np.sqrt(max(self.variance, 0.0)))


def moment(p: PositionDistribution, m: int) -> float:
    """``sum_x x^m P(x)``."""
    x = p.positions.astype(float)
    return float(np.dot(x**m, p.probabilities))


def moments(p: PositionDistribution) -> MomentSet:
    m1 = moment(p, 1)
    m2 = moment(p, 2)
    return MomentSet(m1=m1, m2=m2, variance=m2 - m1 * m1)


def variance(p: PositionDistribution) -> float:
    return moments(p).variance


def entropy(p: PositionDistribution) -> float:
    return shannon_entropy(p.probabilities)


def symmetry_defect(p: PositionDistribution) -> float:
    """``max_x |P(x) - P(-x)|``."""
    hi = max(abs(p.x_min), abs(p.x_min + len(p.probabilities) - 1))
    full = np.zeros(2 * hi + 1)
    full[p.x_min + hi : p.x_min + hi + len(p.probabilities)] = p.probabilities
    return float(np.max(np.abs(full - full[::-1])))


def parity_leak(p: PositionDistribution, t: int) -> float:
    """Largest probability on sites with ``x + t`` odd."""
    odd = (p.positions + t) % 2 == 1
    return float(np.max(np.abs(p.probabilities[odd]), initial=0.0))


def tv_distance(p: PositionDistribution, q: PositionDistribution) -> float:
    """Total-variation distance, half the L1 distance over the union of supports."""
    lo = min(p.x_min, q.x_min)
    hi = max(p.x_min + len(p.probabilities), q.x_min + len(q.probabilities))
    a = np.zeros(hi - lo)
    b = np.zeros(hi - lo)
    a[p.x_min - lo : p.x_min - lo + len(p.probabilities)] = p.probabilities
    b[q.x_min - lo : q.x_min - lo + len(q.probabilities)] = q.probabilities
    return float(0.5 * np.sum(np.abs(a - b)))
