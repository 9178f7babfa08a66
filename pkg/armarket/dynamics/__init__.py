"""Simulators for the AR market model and the kinetic exchange models."""

from armarket.dynamics.ar import (
    AgentState,
    QuenchedResult,
    ar_step,
    ar_trajectory,
    simulate_annealed,
    simulate_growing,
    simulate_quenched,
)
from armarket.dynamics.kinetic import (
    KineticKind,
    KineticModel,
    KineticResult,
    TradeRecord,
    WealthProfile,
    cc_trade,
    ccm_average_wealth_profile,
    ccm_mean_wealth,
    ccm_trade,
    generic_trade,
    simulate_kinetic,
    yakovenko_trade,
)
from armarket.dynamics.population import (
    CapacityKind,
    CapacityLaw,
    ConfigurationError,
    PopulationSpec,
    SimConfig,
    default_burn_in,
)
from armarket.dynamics.replicas import replica_rng, run_replicas

__all__ = [
    "AgentState",
    "QuenchedResult",
    "ar_step",
    "ar_trajectory",
    "simulate_annealed",
    "simulate_growing",
    "simulate_quenched",
    "KineticKind",
    "KineticModel",
    "KineticResult",
    "TradeRecord",
    "WealthProfile",
    "cc_trade",
    "ccm_average_wealth_profile",
    "ccm_mean_wealth",
    "ccm_trade",
    "generic_trade",
    "simulate_kinetic",
    "yakovenko_trade",
    "CapacityKind",
    "CapacityLaw",
    "ConfigurationError",
    "PopulationSpec",
    "SimConfig",
    "default_burn_in",
    "replica_rng",
    "run_replicas",
]
