"""
Experiment runner: one handler per experiment kind.

Every handler turns a validated ``ExperimentConfig`` into a ``RunOutput``
(summary statistics plus the frames and arrays to persist); ``run_experiment``
writes them into the run directory. Given the same config and seed the
summary is byte-identical across reruns.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from scipy import stats

from armarket.analytics.convolution import GridSpec, convolution_recursion
from armarket.analytics.densities import (
    cc_gamma_shape,
    cc_reference_pdf,
    gamma_pdf,
    gaussian_fixed_point,
    gaussian_pdf,
)
from armarket.analytics.series import MAX_SERIES_LAMBDA, finite_time_series, series_coefficients
from armarket.dynamics.ar import simulate_annealed, simulate_growing, simulate_quenched
from armarket.dynamics.kinetic import (
    KineticKind,
    ccm_average_wealth_profile,
    ccm_mean_wealth,
    simulate_kinetic,
)
from armarket.dynamics.population import CapacityKind
from armarket.estimation.empirical import (
    EmpiricalDistribution,
    Histogram,
    effective_sample_size,
    ks_distance,
    ks_threshold,
)
from armarket.estimation.moments import moments
from armarket.estimation.tail import MIN_TAIL_SAMPLES, tail_exponent, tail_sensitivity
from armarket.experiments import artifacts
from armarket.experiments.references import Reference, parse_reference
from armarket.experiments.schema import KINETIC_KINDS, ExperimentConfig
from armarket.noise.spec import NoiseFamily

logger = logging.getLogger(__name__)

# λ used for the effective-sample-size of dynamics whose λ is redrawn (E[λ] = 1/2)
ANNEALED_LAMBDA = 0.5

# max |P_m - finite-time series| on the oracle grid
ORACLE_TOLERANCE = 1e-3


@dataclass
class RunOutput:
    """Everything a handler produces; ``None`` entries are not written."""

    summary: Dict[str, Any]
    histogram: Optional[pd.DataFrame] = None
    analytic: Optional[pd.DataFrame] = None
    fit: Optional[Dict[str, Any]] = None
    profile: Optional[pd.DataFrame] = None
    samples: Optional[np.ndarray] = None
    noise: Optional[np.ndarray] = None


@dataclass
class RunResult:
    run_dir: Path
    summary: Dict[str, Any]
    files: List[Path] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Shared statistics
# ---------------------------------------------------------------------------

def _stats(emp: EmpiricalDistribution, batches: int) -> Dict[str, Any]:
    m = moments(emp, batches)
    return {"mean": m.mean, "std": m.std, "standard_error": m.standard_error, "n": m.n}


def _ks(emp: EmpiricalDistribution, ref: Reference, lam_eff: float) -> Dict[str, Any]:
    n_eff = effective_sample_size(emp.count, lam_eff)
    return {
        "reference": ref.label,
        "ks": ks_distance(emp, ref.cdf),
        "n_eff": n_eff,
        "threshold_1pct": ks_threshold(n_eff),
    }


def _histogram_frame(hist: Histogram, ref: Optional[Reference]) -> pd.DataFrame:
    frame = hist.to_frame()
    if ref is not None:
        frame["reference"] = ref.pdf(hist.centers)
    return frame


def _histogram_summary(hist: Histogram) -> Dict[str, Any]:
    return {
        "bins": int(hist.counts.size),
        "underflow": hist.underflow,
        "overflow": hist.overflow,
        "range": [float(hist.edges[0]), float(hist.edges[-1])],
    }


def _tail_summary(emp: EmpiricalDistribution, k: Optional[int]) -> Dict[str, Any]:
    fit = tail_exponent(emp, k=k)
    return {
        "fit": fit.to_dict(),
        "sensitivity": {key: r.to_dict() for key, r in tail_sensitivity(emp).items()},
    }


class ExperimentRunner:
    """
    Dispatches a validated configuration to its experiment handler.

    Args:
        config: Validated experiment configuration
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.analysis = config.analysis
        self._handlers: Dict[str, Callable[[], RunOutput]] = {
            "ar-static": self._ar_static,
            "ar-growing": self._ar_growing,
            "ar-annealed": self._ar_annealed,
            "kinetic-ccm": self._kinetic,
            "kinetic-cc": self._kinetic,
            "kinetic-generic": self._kinetic,
            "kinetic-yakovenko": self._kinetic,
            "pareto-sweep": self._pareto_sweep,
            "analytic-curves": self._analytic_curves,
        }

    def run(self) -> RunOutput:
        logger.info("running %s (seed=%d)", self.config.experiment, self.config.seed)
        output = self._handlers[self.config.experiment]()
        output.summary.update({
            "experiment": self.config.experiment,
            "seed": self.config.seed,
            "config_sha256": self.config.config_hash(),
        })
        return output

    # -- helpers -----------------------------------------------------------

    def _stationary_reference(self, lam: float) -> Optional[Reference]:
        """Exact static-market reference for a shared savings λ, when one exists."""
        noise = self.config.noise
        if noise.family == "gaussian":
            alpha, sigma = gaussian_fixed_point(noise.mean, noise.std or 1.0, lam)
            return parse_reference(f"gauss:mean={alpha!r},std={sigma!r}")
        if lam == 0.0:
            return parse_reference(f"exp:mean={noise.mean!r}")
        if lam <= MAX_SERIES_LAMBDA:
            order = self.analysis.series_order
            return parse_reference(f"series:lam={lam!r},order={order},mean={noise.mean!r}")
        logger.info("no closed-form reference for lambda=%.3f (series refused above %.1f)", lam, MAX_SERIES_LAMBDA)
        return None

    def _distribution_block(
        self,
        emp: EmpiricalDistribution,
        ref: Optional[Reference],
        lam_eff: float,
    ) -> tuple:
        hist = emp.histogram(bins=self.analysis.bins, upper_quantile=self.analysis.upper_quantile)
        summary: Dict[str, Any] = {
            "wealth": _stats(emp, self.analysis.batches),
            "histogram": _histogram_summary(hist),
        }
        if ref is not None:
            summary["ks"] = _ks(emp, ref, lam_eff)
        return summary, _histogram_frame(hist, ref)

    # -- AR ----------------------------------------------------------------

    def _ar_static(self) -> RunOutput:
        cfg = self.config
        pop = cfg.population.to_domain()
        noise = cfg.noise.to_domain()
        result = simulate_quenched(pop, noise, cfg.sim_config(), keep_samples=True)
        pooled = result.pooled()

        ref = None
        lam_eff = float(result.savings.max())
        if pop.capacity_law.kind is CapacityKind.CONSTANT:
            ref = self._stationary_reference(1.0 - pop.capacity_law.value)
        summary, frame = self._distribution_block(pooled, ref, lam_eff)

        summary["agents"] = pop.count
        summary["burn_in"] = result.burn_in
        summary["samples_per_agent"] = result.n_samples

        expected = result.expected_mean(noise.mean)
        agents: Dict[str, Any] = {
            "max_relative_error": float(np.max(np.abs(result.mean_wealth / expected - 1.0))),
        }
        if result.standard_error is not None:
            z = np.abs(result.mean_wealth - expected) / np.where(
                result.standard_error > 0.0, result.standard_error, np.inf
            )
            agents["max_abs_z"] = float(z.max())
            agents["fraction_within_4se"] = float(np.mean(z <= 4.0))
        summary["mean_wealth_law"] = agents

        if noise.family is NoiseFamily.EXPONENTIAL and lam_eff > 0.0:
            density = frame["density"].to_numpy()
            peak = float(density.max())
            summary["boundary_ratio"] = float(density[0] / peak) if peak > 0.0 else 0.0

        fit = None
        if pop.capacity_law.kind is not CapacityKind.CONSTANT and pop.count >= MIN_TAIL_SAMPLES:
            fit = _tail_summary(result.average_wealth(), self.analysis.tail_k)
            summary["tail"] = fit["fit"]

        return RunOutput(summary=summary, histogram=frame, fit=fit, samples=pooled.samples)

    def _ar_growing(self) -> RunOutput:
        cfg = self.config
        pop = cfg.population.to_domain()
        noise = cfg.noise.to_domain()
        emp = simulate_growing(pop, noise, cfg.sim_config())

        ref = None
        if pop.capacity_law.kind is CapacityKind.CONSTANT:
            ref = self._stationary_reference(1.0 - pop.capacity_law.value)
        # ensemble members are independent trajectories
        summary, frame = self._distribution_block(emp, ref, 0.0)
        summary["horizon"] = noise.schedule.horizon
        summary["ensemble"] = emp.count
        return RunOutput(summary=summary, histogram=frame, samples=emp.samples)

    def _ar_annealed(self) -> RunOutput:
        cfg = self.config
        emp = simulate_annealed(cfg.population.to_domain(), cfg.noise.to_domain(), cfg.sim_config())
        ref = None
        if cfg.noise.family == "exponential":
            ref = parse_reference(f"gamma:n=2,scale={cfg.noise.mean!r}")
        summary, frame = self._distribution_block(emp, ref, ANNEALED_LAMBDA)
        return RunOutput(summary=summary, histogram=frame, samples=emp.samples)

    # -- kinetic -----------------------------------------------------------

    def _kinetic(self) -> RunOutput:
        cfg = self.config
        kc = cfg.kinetic
        kind = KINETIC_KINDS[cfg.experiment]
        model = kc.to_domain(kind)
        tagged = kc.tagged_agent
        result = simulate_kinetic(
            model, kc.n_agents, kc.total_wealth, cfg.sim_config(), tagged=tagged, pool_every=kc.pool_every
        )

        wealth_ref, noise_ref = None, None
        lam_eff = ANNEALED_LAMBDA
        if kind is KineticKind.GENERIC:
            wealth_ref = parse_reference(f"gamma:n=2,scale={kc.mean_wealth / 2.0!r}")
            noise_ref = parse_reference(f"exp:mean={kc.mean_wealth / 2.0!r}")
        elif kind is KineticKind.YAKOVENKO:
            wealth_ref = parse_reference(f"exp:mean={kc.mean_wealth!r}")
        elif kind is KineticKind.CC:
            lam_eff = kc.savings
            if kc.savings == 0.0:
                wealth_ref = parse_reference(f"exp:mean={kc.mean_wealth!r}")

        summary, frame = self._distribution_block(result.pooled, wealth_ref, lam_eff)
        summary["agents"] = kc.n_agents
        summary["total_wealth"] = kc.total_wealth
        summary["burn_in"] = result.burn_in
        summary["relative_drift"] = result.relative_drift
        summary["noise"] = _stats(result.noise, self.analysis.batches)
        if noise_ref is not None:
            summary["noise_ks"] = _ks(result.noise, noise_ref, 0.0)

        if kind is KineticKind.CC and kc.savings > 0.0:
            approx = parse_reference(f"cc:lam={kc.savings!r},mean={kc.mean_wealth!r}")
            summary["approximate_gamma"] = {
                "shape": cc_gamma_shape(kc.savings),
                "ks": ks_distance(result.pooled, approx.cdf),
            }

        primary, noise = result.pooled.samples, result.noise.samples
        if tagged is not None:
            lam_k = float(result.savings[tagged])
            expected = float(ccm_mean_wealth(result.savings, kc.total_wealth)[tagged]) if kind is KineticKind.CCM else None
            tagged_stats = _stats(result.tagged, self.analysis.batches)
            summary["tagged"] = {
                "agent": tagged,
                "savings": lam_k,
                "wealth": tagged_stats,
                "noise": _stats(result.tagged_noise, self.analysis.batches),
            }
            if expected is not None:
                summary["tagged"]["expected_mean"] = expected
                summary["tagged"]["relative_error"] = tagged_stats["mean"] / expected - 1.0
            primary, noise = result.tagged.samples, result.tagged_noise.samples

        fit = None
        if kind is KineticKind.CCM and kc.n_agents >= MIN_TAIL_SAMPLES:
            fit = _tail_summary(EmpiricalDistribution(result.mean_wealth), self.analysis.tail_k)
            summary["tail"] = fit["fit"]

        return RunOutput(summary=summary, histogram=frame, fit=fit, samples=primary, noise=noise)

    # -- Pareto ------------------------------------------------------------

    def _pareto_sweep(self) -> RunOutput:
        cfg = self.config
        if cfg.sweep.source == "ccm":
            return self._pareto_ccm()

        pop = cfg.population.to_domain()
        noise = cfg.noise.to_domain()
        result = simulate_quenched(pop, noise, cfg.sim_config(), keep_samples=False)
        emp = result.average_wealth()

        law = pop.capacity_law
        ref = None
        if law.kind is not CapacityKind.CONSTANT:
            ref = parse_reference(
                f"pareto:law={law.kind.value},alpha={law.alpha!r},floor={law.floor!r},xi_mean={noise.mean!r}"
            )
        fit = _tail_summary(emp, self.analysis.tail_k)
        summary: Dict[str, Any] = {
            "agents": pop.count,
            "burn_in": result.burn_in,
            "samples_per_agent": result.n_samples,
            "expected_gamma": 2.0 + law.alpha if law.kind is CapacityKind.POWER_ALPHA else 2.0,
            "gamma_hat": fit["fit"]["gamma_hat"],
            "tail": fit["fit"],
        }
        hist = emp.log_histogram(per_decade=self.analysis.log_per_decade)
        summary["histogram"] = _histogram_summary(hist)
        if ref is not None:
            summary["ks"] = {"reference": ref.label, "ks": ks_distance(emp, ref.cdf)}
        return RunOutput(summary=summary, histogram=_histogram_frame(hist, ref), fit=fit, samples=emp.samples)

    def _pareto_ccm(self) -> RunOutput:
        cfg = self.config
        kc = cfg.kinetic
        profile = ccm_average_wealth_profile(
            kc.n_agents, kc.savings_law.to_domain(), cfg.sim_config(), total_wealth=kc.total_wealth
        )
        emp = profile.average_wealth()
        fit = _tail_summary(emp, self.analysis.tail_k)
        rank = stats.spearmanr(profile.savings, profile.mean_wealth)
        hist = emp.log_histogram(per_decade=self.analysis.log_per_decade)
        summary = {
            "agents": kc.n_agents,
            "expected_gamma": 2.0,
            "gamma_hat": fit["fit"]["gamma_hat"],
            "tail": fit["fit"],
            "rank_correlation": float(rank.statistic),
            "histogram": _histogram_summary(hist),
        }
        return RunOutput(
            summary=summary,
            histogram=_histogram_frame(hist, None),
            fit=fit,
            profile=profile.to_frame(),
            samples=emp.samples,
        )

    # -- analytic ----------------------------------------------------------

    def _analytic_curves(self) -> RunOutput:
        cfg = self.config
        ac = cfg.analytic
        mean = cfg.noise.mean
        x = np.linspace(0.0, ac.x_max, ac.points)

        shown = series_coefficients(ac.lam, ac.order, mean=mean)
        oracle_series = series_coefficients(ac.lam, ac.oracle_order, mean=mean)
        tabulated = convolution_recursion(
            cfg.noise.to_domain(), ac.lam, ac.oracle_order, GridSpec(points=ac.grid_points)
        )
        p_last = tabulated[-1]
        finite = finite_time_series(ac.lam, ac.oracle_order + 1, mean=mean)
        alpha, sigma = gaussian_fixed_point(ac.alpha0, ac.sigma0, ac.lam)
        stationary_mean = mean / (1.0 - ac.lam)

        frame = pd.DataFrame({
            "x": x,
            "series": np.maximum(shown.evaluate(x), 0.0),
            "series_raw": shown.evaluate(x),
            f"series_m{ac.oracle_order}": oracle_series.evaluate(x),
            "convolution": p_last(x),
            "gamma2": gamma_pdf(2.0, x, scale=stationary_mean / 2.0),
            "cc_gamma_approx": cc_reference_pdf(ac.lam, x, mean=stationary_mean),
            "gaussian_fixed_point": gaussian_pdf(x, alpha, sigma),
        })

        grid = p_last.grid
        diff_finite = float(np.max(np.abs(finite.evaluate(grid) - p_last.density)))
        if diff_finite > ORACLE_TOLERANCE:
            logger.warning("series and convolution oracle differ by %.2e (> %.0e)", diff_finite, ORACLE_TOLERANCE)
        summary = {
            "lam": ac.lam,
            "order": ac.order,
            "coefficients": shown.coefficients.tolist(),
            "scales": shown.scales.tolist(),
            "boundary_residual": shown.boundary_residual(),
            "normalisation": shown.normalisation(),
            "first_moment": shown.first_moment(),
            "expected_mean": 1.0 / (1.0 - ac.lam),
            "oracle": {
                "order": ac.oracle_order,
                "grid_points": int(grid.size),
                "x_max": float(grid[-1]),
                "mass": p_last.integral(),
                "max_abs_diff_finite": diff_finite,
                "max_abs_diff_stationary": float(np.max(np.abs(oracle_series.evaluate(grid) - p_last.density))),
                "tolerance": ORACLE_TOLERANCE,
                "agrees": diff_finite <= ORACLE_TOLERANCE,
            },
            "gaussian_fixed_point": {"alpha": alpha, "sigma": sigma},
            "cc_gamma_shape": cc_gamma_shape(ac.lam),
        }
        return RunOutput(summary=summary, analytic=frame)


def write_output(config: ExperimentConfig, output: RunOutput, run_dir: Path) -> List[Path]:
    """Persist a handler's output; returns the written paths."""
    run_dir = artifacts.prepare_run_dir(run_dir)
    files = [
        artifacts.write_json(run_dir / artifacts.CONFIG_FILE, config.model_dump(mode="json")),
        artifacts.write_run_json(run_dir / artifacts.SUMMARY_FILE, output.summary, config),
    ]
    if output.histogram is not None:
        files.append(artifacts.write_csv(run_dir / artifacts.HISTOGRAM_FILE, output.histogram, config))
    if output.analytic is not None:
        files.append(artifacts.write_csv(run_dir / artifacts.ANALYTIC_FILE, output.analytic, config))
    if output.profile is not None:
        files.append(artifacts.write_csv(run_dir / artifacts.PROFILE_FILE, output.profile, config))
    if output.fit is not None:
        files.append(artifacts.write_run_json(run_dir / artifacts.FIT_FILE, output.fit, config))
    if output.samples is not None:
        files.append(artifacts.write_samples(run_dir / artifacts.SAMPLES_FILE, output.samples, config, output.noise))
    return files


def run_experiment(config: ExperimentConfig, run_dir: Path) -> RunResult:
    """
    Run one experiment and write its artifacts.

    Raises:
        OSError: If the run directory cannot be created or written
    """
    output = ExperimentRunner(config).run()
    files = write_output(config, output, Path(run_dir))
    logger.info("wrote %d files to %s", len(files), run_dir)
    return RunResult(run_dir=Path(run_dir), summary=output.summary, files=files)
