"""
Auto-regressive (AR) market model.

Each agent invests a fraction μ_i of its wealth and the market returns a
net gain ξ(t):

    x_i(t) = (1 - μ_i) x_i(t-1) + ξ(t)          λ_i ≡ 1 - μ_i

Agents never read each other's state; every agent draws its own
independent ξ each step. Three variants are simulated:

- quenched : μ_i fixed per agent, static market   → per-agent samples, w_i = ⟨ξ⟩/μ_i
- annealed : λ redrawn uniformly in (0,1) every step for every agent → Γ₂ for exp noise
- growing  : a(t) = mean * t/T ramp, ensemble of independent trajectories sampled at t=T

Agents sharing a capacity are advanced with ``scipy.signal.lfilter`` (the
AR(1) recursion as an IIR filter); heterogeneous populations step all
agents per time step with numpy.

Example usage:
    >>> from armarket.dynamics.ar import AgentState, ar_step
    >>> ar_step(AgentState(wealth=2.0, capacity=0.5), xi=1.0).wealth
    2.0
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import partial
from typing import Optional, Tuple

import numpy as np
from scipy.signal import lfilter

from armarket.dynamics.population import (
    ANNEALED_BURN_IN,
    STATIONARY_MEAN,
    ConfigurationError,
    PopulationSpec,
    SimConfig,
    default_burn_in,
)
from armarket.dynamics.replicas import replica_rng, run_replicas
from armarket.estimation.empirical import EmpiricalDistribution
from armarket.estimation.moments import MIN_BATCHES, batch_standard_error
from armarket.noise.spec import NoiseSpec, ScheduleKind, draw_noise
from armarket.settings import RUNTIME_CONFIG

logger = logging.getLogger(__name__)

# Above this many distinct capacities the per-step loop beats one lfilter call per group
MAX_FILTER_GROUPS: int = 64


@dataclass(frozen=True)
class AgentState:
    """
    Attributes:
        wealth  : x_i(t)
        capacity: μ_i in (0, 1]
    """

    wealth: float
    capacity: float

    @property
    def savings(self) -> float:
        return 1.0 - self.capacity


@dataclass
class QuenchedResult:
    """
    Output of a static-market run with fixed capacities.

    Attributes:
        capacities    : μ_i per agent
        mean_wealth   : Time-averaged wealth per agent over recorded steps
        standard_error: Batch-means standard error per agent (None without samples)
        samples       : (N, n_samples) recorded wealth, None if not kept
        burn_in       : Resolved burn-in
        n_samples     : Recorded steps per agent
    """

    capacities: np.ndarray
    mean_wealth: np.ndarray
    standard_error: Optional[np.ndarray]
    samples: Optional[np.ndarray]
    burn_in: int
    n_samples: int

    @property
    def savings(self) -> np.ndarray:
        return 1.0 - self.capacities

    def expected_mean(self, xi_mean: float) -> np.ndarray:
        """Mean-wealth law w_i = ⟨ξ⟩/μ_i."""
        return xi_mean / self.capacities

    def distribution(self, agent: int) -> EmpiricalDistribution:
        if self.samples is None:
            raise ValueError("samples were not kept for this run")
        return EmpiricalDistribution(self.samples[agent])

    def pooled(self) -> EmpiricalDistribution:
        if self.samples is None:
            raise ValueError("samples were not kept for this run")
        return EmpiricalDistribution(self.samples.ravel())

    def average_wealth(self) -> EmpiricalDistribution:
        """Distribution of the per-agent averages {w_i}."""
        return EmpiricalDistribution(self.mean_wealth)


# ---------------------------------------------------------------------------
# Single-agent primitives
# ---------------------------------------------------------------------------

def ar_step(agent: AgentState, xi: float) -> AgentState:
    """x' = (1 - μ) x + ξ; capacity unchanged."""
    return replace(agent, wealth=(1.0 - agent.capacity) * agent.wealth + xi)


def ar_trajectory(x0: float, capacity: float, noise: np.ndarray) -> np.ndarray:
    """
    Replay x' = λx + ξ over a recorded noise sequence.

    Returns:
        x(1..T) for noise ξ(1..T) starting from x(0) = x0
    """
    lam = 1.0 - capacity
    noise = np.asarray(noise, dtype=float)
    path, _ = lfilter([1.0], [1.0, -lam], noise, zi=[lam * x0])
    return path


# ---------------------------------------------------------------------------
# Vectorised advance
# ---------------------------------------------------------------------------

def _filter_groups(lam: np.ndarray) -> Optional[Tuple[np.ndarray, list]]:
    values, inverse = np.unique(lam, return_inverse=True)
    if values.size > MAX_FILTER_GROUPS:
        return None
    return values, [np.flatnonzero(inverse == g) for g in range(values.size)]


def _advance(x: np.ndarray, lam: np.ndarray, xi: np.ndarray, groups) -> np.ndarray:
    """
    Apply x' = λx + ξ to every row of the time-major noise block ``xi`` (L, N).

    Returns:
        Wealth path (L, N); the last row is the new state
    """
    path = np.empty_like(xi)
    if groups is not None:
        values, members = groups
        for lam_g, cols in zip(values, members):
            path[:, cols], _ = lfilter(
                [1.0], [1.0, -lam_g], xi[:, cols], axis=0, zi=(lam_g * x[cols])[None, :]
            )
        return path

    prev = x
    for s in range(xi.shape[0]):
        np.multiply(lam, prev, out=path[s])
        path[s] += xi[s]
        prev = path[s]
    return path


def _recorded(first_step: int, length: int, burn_in: int, stride: int) -> np.ndarray:
    """Mask of block rows whose step index is sampled."""
    steps = np.arange(first_step, first_step + length)
    return (steps > burn_in) & ((steps - burn_in - 1) % stride == 0)


def _block_steps(n_agents: int) -> int:
    return max(1, RUNTIME_CONFIG["chunk_elements"] // max(1, n_agents))


def _require_static(noise: NoiseSpec, hint: str) -> None:
    if not noise.schedule.is_static:
        raise ConfigurationError(
            f"{noise.schedule.kind.value} schedule passed to a static-market simulator; use {hint}"
        )


# ---------------------------------------------------------------------------
# Quenched capacities
# ---------------------------------------------------------------------------

def simulate_quenched(
    pop: PopulationSpec,
    noise: NoiseSpec,
    cfg: SimConfig,
    keep_samples: bool = True,
) -> QuenchedResult:
    """
    Evolve every agent independently under x' = λx + ξ in a static market.

    Samples are recorded after burn-in at the configured stride. With
    ``keep_samples=False`` only per-agent time averages are accumulated
    (used for large-N Pareto sweeps).

    Raises:
        ConfigurationError: If the noise schedule is not constant
    """
    _require_static(noise, "simulate_growing")
    rng = replica_rng(cfg.seed, 0)
    capacities = pop.capacity_law.sample(pop.count, rng)
    lam = 1.0 - capacities
    burn_in = cfg.resolve_burn_in(default_burn_in(float(lam.max())))
    n_samples = cfg.sample_count(burn_in)
    n_agents = pop.count

    logger.info(
        "quenched AR: N=%d steps=%d burn_in=%d samples/agent=%d seed=%d",
        n_agents, cfg.steps, burn_in, n_samples, cfg.seed,
    )

    x = pop.initial_state(capacities, noise.mean)
    groups = _filter_groups(lam)
    sums = np.zeros(n_agents)
    samples = np.empty((n_agents, n_samples)) if keep_samples else None
    recorded = 0
    block = _block_steps(n_agents)

    t = 0
    while t < cfg.steps:
        length = min(block, cfg.steps - t)
        xi = draw_noise(noise, 1, rng, size=(length, n_agents))
        path = _advance(x, lam, xi, groups)
        x = path[-1].copy()
        rows = path[_recorded(t + 1, length, burn_in, cfg.stride)]
        if rows.shape[0]:
            sums += rows.sum(axis=0)
            if samples is not None:
                samples[:, recorded:recorded + rows.shape[0]] = rows.T
            recorded += rows.shape[0]
        t += length
        logger.debug("quenched AR: advanced to step %d", t)

    standard_error = None
    if samples is not None and n_samples >= MIN_BATCHES:
        standard_error = batch_standard_error(samples, axis=1)

    return QuenchedResult(
        capacities=capacities,
        mean_wealth=sums / recorded,
        standard_error=standard_error,
        samples=samples,
        burn_in=burn_in,
        n_samples=recorded,
    )


# ---------------------------------------------------------------------------
# Annealed savings
# ---------------------------------------------------------------------------

def _annealed_replica(
    pop: PopulationSpec,
    noise: NoiseSpec,
    cfg: SimConfig,
    burn_in: int,
    index: int,
    rng: np.random.Generator,
) -> np.ndarray:
    xi_rng, lam_rng = rng.spawn(2)
    n_agents = pop.count
    if pop.initial_wealth == STATIONARY_MEAN:
        # E[x] = ⟨ξ⟩ / (1 - E[λ])
        x = np.full(n_agents, 2.0 * noise.mean)
    else:
        x = np.full(n_agents, float(pop.initial_wealth))

    out = []
    block = _block_steps(n_agents)
    t = 0
    while t < cfg.steps:
        length = min(block, cfg.steps - t)
        xi = draw_noise(noise, 1, xi_rng, size=(length, n_agents))
        lam = lam_rng.random((length, n_agents))
        path = np.empty_like(xi)
        prev = x
        for s in range(length):
            np.multiply(lam[s], prev, out=path[s])
            path[s] += xi[s]
            prev = path[s]
        x = path[-1].copy()
        out.append(path[_recorded(t + 1, length, burn_in, cfg.stride)].ravel())
        t += length
    return np.concatenate(out)


def simulate_annealed(pop: PopulationSpec, noise: NoiseSpec, cfg: SimConfig) -> EmpiricalDistribution:
    """
    AR model with λ redrawn uniformly in (0,1) at every step for every agent.

    With exponential noise the stationary law is Γ₂ scaled by ⟨ξ⟩. The
    capacity law of ``pop`` is not used. Samples are pooled over agents
    and replicas in replica order.

    Raises:
        ConfigurationError: If the noise schedule is not constant
    """
    _require_static(noise, "simulate_growing")
    burn_in = cfg.resolve_burn_in(ANNEALED_BURN_IN)
    logger.info(
        "annealed AR: N=%d replicas=%d steps=%d burn_in=%d seed=%d",
        pop.count, cfg.replicas, cfg.steps, burn_in, cfg.seed,
    )
    parts = run_replicas(
        partial(_annealed_replica, pop, noise, cfg, burn_in),
        cfg.replicas,
        cfg.seed,
    )
    emp = EmpiricalDistribution(np.concatenate(parts))
    logger.info("annealed AR: %d pooled samples", emp.count)
    return emp


# ---------------------------------------------------------------------------
# Growing market
# ---------------------------------------------------------------------------

def _growing_replica(
    pop: PopulationSpec,
    noise: NoiseSpec,
    index: int,
    rng: np.random.Generator,
) -> np.ndarray:
    capacities = pop.capacity_law.sample(pop.count, rng)
    lam = 1.0 - capacities
    x = pop.initial_state(capacities, noise.mean_at(1))
    for t in range(1, noise.schedule.horizon + 1):
        x = lam * x + draw_noise(noise, t, rng, size=pop.count)
    return x


def simulate_growing(pop: PopulationSpec, noise: NoiseSpec, cfg: SimConfig) -> EmpiricalDistribution:
    """
    Instantaneous distribution P(x, T) of a market whose mean ramps as
    a(t) = mean * t/T.

    Every agent of every replica is an independent trajectory run for
    exactly T steps; samples are taken across the ensemble at t=T only.
    Only ``cfg.seed`` and ``cfg.replicas`` are used.

    Raises:
        ConfigurationError: If the schedule is not a linear ramp
    """
    if noise.schedule.kind is not ScheduleKind.LINEAR_RAMP:
        raise ConfigurationError("simulate_growing needs a linear_ramp noise schedule")
    logger.info(
        "growing AR: T=%d ensemble=%d x %d seed=%d",
        noise.schedule.horizon, cfg.replicas, pop.count, cfg.seed,
    )
    parts = run_replicas(partial(_growing_replica, pop, noise), cfg.replicas, cfg.seed)
    return EmpiricalDistribution(np.concatenate(parts))
