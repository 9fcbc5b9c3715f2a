"""Discrete-time Hadamard walk with a time-dependent dephased coin."""

from .asymptotics import ballistic_constants, binomial_distribution, mixture_distribution
from .correlations import CoinMeasurement, OptimizerConfig, correlation_record, correlation_trajectory
from .evolution import evolve, step
from .momentum import exact_moments
from .schedule import Constant, Cosine, Piecewise, Sawtooth, Table, describe, kappa_at, parse_schedule
from .state import DEFAULT_COIN, CoinSpec, JointState, initial_state, position_distribution

__all__ = [
    "CoinMeasurement",
    "CoinSpec",
    "Constant",
    "Cosine",
    "DEFAULT_COIN",
    "JointState",
    "OptimizerConfig",
    "Piecewise",
    "Sawtooth",
    "Table",
    "ballistic_constants",
    "binomial_distribution",
    "correlation_record",
    "correlation_trajectory",
    "describe",
    "evolve",
    "exact_moments",
    "initial_state",
    "kappa_at",
    "mixture_distribution",
    "parse_schedule",
    "position_distribution",
    "step",
]
