"""
Pairwise wealth-conserving kinetic exchange models.

Trade rules for a pair (i, j) with wealths (x_i, x_j):

- CCM      : x_i' = λ_i x_i + r T,  x_j' = λ_j x_j + (1-r) T,
             T = (1-λ_i) x_i + (1-λ_j) x_j, quenched heterogeneous λ_i
- CC       : CCM with a shared λ
- GENERIC  : x_i' = λ x_i + η x_j,  x_j' = (1-λ) x_i + (1-η) x_j, λ, η ~ U(0,1)
- YAKOVENKO: x_i' = λ (x_i + x_j),  x_j' = (1-λ)(x_i + x_j),   λ ~ U(0,1)

Every trade maps onto the non-conserving AR update x' = (savings) x + noise;
the effective noise each agent receives is recorded so its distribution can
be compared with the AR noise (r T for CCM/CC, η x̃ for GENERIC, λ x̃ for
YAKOVENKO).

Pair selection: one sweep is ceil(N / ⌊N/2⌋) rounds, each round a uniformly
random perfect matching executed as ⌊N/2⌋ simultaneous disjoint trades.
Every trade is a uniform random unordered pair; a sweep holds >= N trades.

Example usage:
    >>> from armarket.dynamics.kinetic import ccm_trade
    >>> ccm_trade(1.0, 1.0, 0.0, 0.0, 1.0)
    (2.0, 0.0)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import partial
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from armarket.dynamics.population import (
    ANNEALED_BURN_IN,
    CapacityLaw,
    ConfigurationError,
    SimConfig,
    default_burn_in,
)
from armarket.dynamics.replicas import run_replicas
from armarket.estimation.empirical import EmpiricalDistribution

logger = logging.getLogger(__name__)

# relative total-wealth drift tolerated before a warning
DRIFT_WARN = 1e-6


class KineticKind(Enum):
    """Kinetic exchange rule."""
    CCM = "ccm"
    CC = "cc"
    GENERIC = "generic"
    YAKOVENKO = "yakovenko"


@dataclass(frozen=True)
class KineticModel:
    """
    Attributes:
        kind          : Trade rule
        savings       : Shared λ for CC, in [0, 1)
        savings_law   : Law of μ = 1 - λ for CCM (uniform μ ⇔ uniform λ)
        tagged_savings: Optional λ forced on the tagged agent (CCM)
    """

    kind: KineticKind
    savings: float = 0.0
    savings_law: CapacityLaw = CapacityLaw.uniform()
    tagged_savings: Optional[float] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.savings < 1.0:
            raise ConfigurationError(f"savings must lie in [0, 1), got {self.savings}")
        if self.tagged_savings is not None and not 0.0 <= self.tagged_savings < 1.0:
            raise ConfigurationError(f"tagged_savings must lie in [0, 1), got {self.tagged_savings}")

    @classmethod
    def ccm(cls, savings_law: Optional[CapacityLaw] = None, tagged_savings: Optional[float] = None) -> "KineticModel":
        return cls(KineticKind.CCM, savings_law=savings_law or CapacityLaw.uniform(), tagged_savings=tagged_savings)

    @classmethod
    def cc(cls, savings: float) -> "KineticModel":
        return cls(KineticKind.CC, savings=savings)

    @classmethod
    def generic(cls) -> "KineticModel":
        return cls(KineticKind.GENERIC)

    @classmethod
    def yakovenko(cls) -> "KineticModel":
        return cls(KineticKind.YAKOVENKO)

    def draw_savings(self, n_agents: int, rng: np.random.Generator, tagged: Optional[int]) -> np.ndarray:
        """Quenched per-agent λ (CCM, CC); annealed models return zeros."""
        if self.kind is KineticKind.CCM:
            lam = 1.0 - self.savings_law.sample(n_agents, rng)
            if tagged is not None and self.tagged_savings is not None:
                lam[tagged] = self.tagged_savings
            return lam
        if self.kind is KineticKind.CC:
            return np.full(n_agents, self.savings)
        return np.zeros(n_agents)


@dataclass(frozen=True)
class TradeRecord:
    """
    Attributes:
        noise_value: Effective AR noise of one trade (η x̃ or r T_ij)
    """

    noise_value: float


@dataclass
class KineticResult:
    """
    Attributes:
        pooled         : All agents' wealth at every pool_every-th recorded sweep
        tagged         : Tagged agent's wealth at every recorded sweep (or None)
        noise          : Effective noise of the i side of every trade in a pooled sweep
        tagged_noise   : Effective noise received by the tagged agent (or None)
        savings        : λ per agent of replica 0 (zeros for annealed rules)
        mean_wealth    : Time-averaged wealth per agent of replica 0
        relative_drift : Max |total(t) - total(0)| / total(0) over replicas
        burn_in        : Resolved burn-in in sweeps
    """

    pooled: EmpiricalDistribution
    tagged: Optional[EmpiricalDistribution]
    noise: EmpiricalDistribution
    tagged_noise: Optional[EmpiricalDistribution]
    savings: np.ndarray
    mean_wealth: np.ndarray
    relative_drift: float
    burn_in: int


@dataclass
class WealthProfile:
    """Per-agent savings λ_i and long-run mean wealth w_i."""

    savings: np.ndarray
    mean_wealth: np.ndarray

    def as_rows(self) -> List[Tuple[float, float]]:
        return list(zip(self.savings.tolist(), self.mean_wealth.tolist()))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"savings": self.savings, "mean_wealth": self.mean_wealth})

    def average_wealth(self) -> EmpiricalDistribution:
        return EmpiricalDistribution(self.mean_wealth)


# ---------------------------------------------------------------------------
# Trade rules (scalar or numpy arrays)
# ---------------------------------------------------------------------------

def ccm_trade(xi, xj, lam_i, lam_j, r):
    """Both agents save λ x, the pooled rest T is split r : (1-r)."""
    trade = (1.0 - lam_i) * xi + (1.0 - lam_j) * xj
    new_i = lam_i * xi + r * trade
    # xj' = total - xi' keeps the pair sum exact
    new_j = (xi + xj) - new_i
    return new_i, new_j


def cc_trade(xi, xj, lam, r):
    """CCM with a shared savings propensity."""
    return ccm_trade(xi, xj, lam, lam, r)


def generic_trade(xi, xj, lam, eta):
    """
    x_i' = λ x_i + η x_j, x_j' = (1-λ) x_i + (1-η) x_j.

    Returns:
        (x_i', x_j', TradeRecord(η x_j)) for scalars
    """
    new_i = lam * xi + eta * xj
    new_j = (xi + xj) - new_i
    return new_i, new_j, TradeRecord(noise_value=eta * xj)


def yakovenko_trade(xi, xj, lam):
    """The pair total is split λ : (1-λ)."""
    total = xi + xj
    new_i = lam * total
    return new_i, total - new_i


def _round(kind: KineticKind, x: np.ndarray, lam: np.ndarray, i: np.ndarray, j: np.ndarray,
           u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Execute one matching round in place.

    Returns:
        (noise received by the i side, noise received by the j side)
    """
    xi, xj = x[i], x[j]
    if kind is KineticKind.GENERIC:
        new_i, new_j, _ = generic_trade(xi, xj, u, v)
        noise_i, noise_j = v * xj, (1.0 - u) * xi
    elif kind is KineticKind.YAKOVENKO:
        new_i, new_j = yakovenko_trade(xi, xj, u)
        noise_i, noise_j = u * xj, (1.0 - u) * xi
    else:
        lam_i, lam_j = lam[i], lam[j]
        new_i, new_j = ccm_trade(xi, xj, lam_i, lam_j, u)
        trade = (1.0 - lam_i) * xi + (1.0 - lam_j) * xj
        noise_i, noise_j = u * trade, (1.0 - u) * trade
    x[i] = new_i
    x[j] = new_j
    return noise_i, noise_j


def rounds_per_sweep(n_agents: int) -> int:
    return math.ceil(n_agents / (n_agents // 2))


def _kinetic_replica(
    model: KineticModel,
    n_agents: int,
    total_wealth: float,
    cfg: SimConfig,
    burn_in: int,
    tagged: Optional[int],
    pool_every: int,
    index: int,
    rng: np.random.Generator,
) -> dict:
    savings_rng, pair_rng, trade_rng = rng.spawn(3)
    lam = model.draw_savings(n_agents, savings_rng, tagged)
    x = np.full(n_agents, total_wealth / n_agents)
    total0 = float(x.sum())
    half = n_agents // 2
    n_rounds = rounds_per_sweep(n_agents)
    base = np.tile(np.arange(n_agents), (n_rounds, 1))

    pooled, tagged_path, noise, tagged_noise = [], [], [], []
    sums = np.zeros(n_agents)
    recorded = 0
    drift = 0.0
    pool_stride = cfg.stride * pool_every

    for sweep in range(1, cfg.steps + 1):
        perms = pair_rng.permuted(base, axis=1)
        u = trade_rng.random((n_rounds, half))
        v = trade_rng.random((n_rounds, half)) if model.kind is KineticKind.GENERIC else u
        sampling = sweep > burn_in
        pooling = sampling and (sweep - burn_in - 1) % pool_stride == 0
        for k in range(n_rounds):
            i, j = perms[k, :half], perms[k, half:2 * half]
            noise_i, noise_j = _round(model.kind, x, lam, i, j, u[k], v[k])
            if pooling:
                noise.append(noise_i)
            if sampling and tagged is not None:
                hit_i = np.flatnonzero(i == tagged)
                hit_j = np.flatnonzero(j == tagged)
                if hit_i.size:
                    tagged_noise.append(noise_i[hit_i])
                elif hit_j.size:
                    tagged_noise.append(noise_j[hit_j])
        if pooling:
            pooled.append(x.copy())
        if sampling and (sweep - burn_in - 1) % cfg.stride == 0:
            sums += x
            recorded += 1
            if tagged is not None:
                tagged_path.append(x[tagged])
        if sweep % 1000 == 0 or sweep == cfg.steps:
            drift = max(drift, abs(float(x.sum()) - total0) / total0)

    return {
        "pooled": np.concatenate(pooled),
        "tagged": np.asarray(tagged_path) if tagged is not None else None,
        "noise": np.concatenate(noise),
        "tagged_noise": np.concatenate(tagged_noise) if tagged_noise else np.empty(0),
        "savings": lam,
        "mean_wealth": sums / recorded,
        "drift": drift,
    }


def _default_burn_in(model: KineticModel) -> int:
    if model.kind is KineticKind.CC:
        return default_burn_in(model.savings)
    if model.kind is KineticKind.CCM:
        lam_max = 1.0 - model.savings_law.lower
        if model.tagged_savings is not None:
            lam_max = max(lam_max, model.tagged_savings)
        return default_burn_in(lam_max)
    return ANNEALED_BURN_IN


def simulate_kinetic(
    model: KineticModel,
    n_agents: int,
    total_wealth: float,
    cfg: SimConfig,
    tagged: Optional[int] = None,
    pool_every: int = 1,
) -> KineticResult:
    """
    Run a kinetic exchange model for ``cfg.steps`` sweeps.

    Args:
        model       : Trade rule and savings
        n_agents    : N >= 2
        total_wealth: Conserved total (N → ⟨x⟩ = 1)
        cfg         : Sweeps, burn-in (sweeps), stride (sweeps), seed, replicas
        tagged      : Optional agent index whose wealth is tracked separately
        pool_every  : Keep pooled wealth and trade-noise records from every
                      pool_every-th recorded sweep only; tagged records and
                      time averages still use every recorded sweep

    Raises:
        ConfigurationError: If N < 2, total wealth is not positive or the
                            tagged index is out of range
    """
    if n_agents < 2:
        raise ConfigurationError(f"kinetic models need N >= 2 agents, got {n_agents}")
    if not total_wealth > 0.0:
        raise ConfigurationError(f"total wealth must be positive, got {total_wealth}")
    if tagged is not None and not 0 <= tagged < n_agents:
        raise ConfigurationError(f"tagged agent {tagged} outside 0..{n_agents - 1}")
    if pool_every < 1:
        raise ConfigurationError(f"pool_every must be >= 1, got {pool_every}")

    burn_in = cfg.resolve_burn_in(_default_burn_in(model))
    logger.info(
        "kinetic %s: N=%d total=%.4g sweeps=%d burn_in=%d replicas=%d seed=%d",
        model.kind.value, n_agents, total_wealth, cfg.steps, burn_in, cfg.replicas, cfg.seed,
    )
    parts = run_replicas(
        partial(_kinetic_replica, model, n_agents, total_wealth, cfg, burn_in, tagged, pool_every),
        cfg.replicas,
        cfg.seed,
    )

    result = KineticResult(
        pooled=EmpiricalDistribution(np.concatenate([p["pooled"] for p in parts])),
        tagged=(
            EmpiricalDistribution(np.concatenate([p["tagged"] for p in parts]))
            if tagged is not None else None
        ),
        noise=EmpiricalDistribution(np.concatenate([p["noise"] for p in parts])),
        tagged_noise=(
            EmpiricalDistribution(np.concatenate([p["tagged_noise"] for p in parts]))
            if tagged is not None else None
        ),
        savings=parts[0]["savings"],
        mean_wealth=parts[0]["mean_wealth"],
        relative_drift=max(p["drift"] for p in parts),
        burn_in=burn_in,
    )
    logger.info(
        "kinetic %s: %d pooled samples, %d noise records, drift %.2e",
        model.kind.value, result.pooled.count, result.noise.count, result.relative_drift,
    )
    if result.relative_drift > DRIFT_WARN:
        logger.warning("total wealth drifted by %.2e (relative), above %.0e", result.relative_drift, DRIFT_WARN)
    return result


def ccm_mean_wealth(savings: np.ndarray, total_wealth: float) -> np.ndarray:
    """
    Exact long-run mean wealth in CCM: (1-λ_i) w_i is the same for every
    agent, so w_i = (total / Σ_j 1/(1-λ_j)) / (1-λ_i).
    """
    inv = 1.0 / (1.0 - np.asarray(savings, dtype=float))
    return total_wealth / inv.sum() * inv


def ccm_average_wealth_profile(
    n_agents: int,
    savings_law: CapacityLaw,
    cfg: SimConfig,
    total_wealth: Optional[float] = None,
) -> WealthProfile:
    """
    Long-run time-averaged wealth of every CCM agent against its λ_i.

    Uses replica 0 of the run; total wealth defaults to N (⟨x⟩ = 1). Only
    the time averages are needed, so a single pooled snapshot is kept.
    """
    single = SimConfig(steps=cfg.steps, burn_in=cfg.burn_in, stride=cfg.stride, seed=cfg.seed, replicas=1)
    result = simulate_kinetic(
        KineticModel.ccm(savings_law),
        n_agents,
        float(n_agents) if total_wealth is None else total_wealth,
        single,
        pool_every=cfg.steps,
    )
    return WealthProfile(savings=result.savings, mean_wealth=result.mean_wealth)
