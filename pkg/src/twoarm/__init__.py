"""Two-armed best-arm identification: complexity constants, strategies and a Monte Carlo harness."""

from .arms import BanditModel, bernoulli, gaussian, model_from_config, model_to_config
from .complexity import ComplexityReport, brute_force_complexities, complexities
from .rates import ExplorationRate, RateKind, improved_rate_valid, lil_bound
from .sim import SimulationConfig, SimulationSummary, simulate, sweep, theoretical_curve
from .strategies import (
    SPRT,
    AlphaElimination,
    BernoulliKLStopping,
    FixedBudgetStatic,
    RunOutcome,
    UniformElimination,
    make_runner,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "SPRT",
    "AlphaElimination",
    "BanditModel",
    "BernoulliKLStopping",
    "ComplexityReport",
    "ExplorationRate",
    "FixedBudgetStatic",
    "RateKind",
    "RunOutcome",
    "SimulationConfig",
    "SimulationSummary",
    "UniformElimination",
    "bernoulli",
    "brute_force_complexities",
    "complexities",
    "gaussian",
    "improved_rate_valid",
    "lil_bound",
    "make_runner",
    "model_from_config",
    "model_to_config",
    "run",
    "simulate",
    "sweep",
    "theoretical_curve",
]
