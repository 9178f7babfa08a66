"""
Analytic reference distributions addressable from the command line.

    series:lam=0.4,order=12[,mean=1]        exponential-noise AR steady state
    gamma:n=2[,scale=1]                     Γ_n
    exp:mean=1                              exponential
    gauss:mean=2,std=1.1547                 Gaussian
    pareto:law=uniform[,alpha=0.5][,floor=0.001],xi_mean=1
    cc:lam=0.4[,mean=1]                     approximate CC Gamma fit
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from armarket.analytics import densities
from armarket.analytics.series import AnalyticsDomainError, series_coefficients
from armarket.dynamics.population import MU_MIN, CapacityLaw, ConfigurationError
from armarket.experiments.schema import ConfigError


@dataclass
class Reference:
    """
    Attributes:
        label : Canonical reference string
        cdf   : Vectorised CDF
        pdf   : Vectorised density
        mean  : Mean of the distribution, when finite
        lower : Lower end of the support (None for the whole real line)
    """

    label: str
    cdf: Callable[[np.ndarray], np.ndarray]
    pdf: Callable[[np.ndarray], np.ndarray]
    mean: Optional[float]
    lower: Optional[float] = 0.0


def _parse_params(text: str) -> Dict[str, str]:
    params: Dict[str, str] = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"reference parameter must be key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def _float(params: Dict[str, str], key: str, default: Optional[float] = None) -> float:
    if key not in params:
        if default is None:
            raise ConfigError(f"reference needs parameter {key!r}")
        return default
    try:
        return float(params[key])
    except ValueError as exc:
        raise ConfigError(f"reference parameter {key!r} is not a number: {params[key]!r}") from exc


def _series(p: Dict[str, str]) -> Reference:
    lam = _float(p, "lam")
    order = int(_float(p, "order", 12))
    mean = _float(p, "mean", 1.0)
    dist = series_coefficients(lam, order, mean=mean)
    return Reference(
        label=f"series:lam={lam},order={order},mean={mean}",
        cdf=dist.cdf,
        pdf=lambda x: np.maximum(dist.evaluate(x), 0.0),
        mean=mean / (1.0 - lam),
    )


def _gamma(p: Dict[str, str]) -> Reference:
    n = _float(p, "n")
    scale = _float(p, "scale", 1.0)
    if n <= 0.0 or scale <= 0.0:
        raise ConfigError(f"gamma reference needs n > 0 and scale > 0, got n={n}, scale={scale}", path="gamma")
    return Reference(
        label=f"gamma:n={n},scale={scale}",
        cdf=lambda x: densities.gamma_cdf(n, x, scale=scale),
        pdf=lambda x: densities.gamma_pdf(n, np.maximum(x, 0.0), scale=scale),
        mean=n * scale,
    )


def _exp(p: Dict[str, str]) -> Reference:
    mean = _float(p, "mean", 1.0)
    return Reference(
        label=f"exp:mean={mean}",
        cdf=lambda x: densities.exponential_cdf(x, mean),
        pdf=lambda x: densities.exponential_pdf(x, mean),
        mean=mean,
    )


def _gauss(p: Dict[str, str]) -> Reference:
    mean = _float(p, "mean")
    std = _float(p, "std")
    return Reference(
        label=f"gauss:mean={mean},std={std}",
        cdf=lambda x: densities.gaussian_cdf(x, mean, std),
        pdf=lambda x: densities.gaussian_pdf(x, mean, std),
        mean=mean,
        lower=None,
    )


def _pareto(p: Dict[str, str]) -> Reference:
    law_name = p.get("law", "uniform")
    floor = _float(p, "floor", MU_MIN)
    xi_mean = _float(p, "xi_mean", 1.0)
    if law_name == "uniform":
        law = CapacityLaw.uniform(floor=floor)
    elif law_name == "power_alpha":
        law = CapacityLaw.power_alpha(_float(p, "alpha"), floor=floor)
    else:
        raise ConfigError(f"pareto reference law must be uniform or power_alpha, got {law_name!r}")
    return Reference(
        label=f"pareto:law={law_name},alpha={law.alpha},floor={floor},xi_mean={xi_mean}",
        cdf=lambda w: densities.pareto_cdf(law, xi_mean, w),
        pdf=lambda w: densities.pareto_density(law, xi_mean, w),
        mean=None,
    )


def _cc(p: Dict[str, str]) -> Reference:
    lam = _float(p, "lam")
    mean = _float(p, "mean", 1.0)
    return Reference(
        label=f"cc:lam={lam},mean={mean}",
        cdf=lambda x: densities.cc_reference_cdf(lam, x, mean),
        pdf=lambda x: densities.cc_reference_pdf(lam, np.maximum(x, 0.0), mean),
        mean=mean,
    )


_BUILDERS = {
    "series": _series,
    "gamma": _gamma,
    "exp": _exp,
    "gauss": _gauss,
    "pareto": _pareto,
    "cc": _cc,
}


def is_reference(text: str) -> bool:
    """True when ``text`` names an analytic reference rather than a run directory."""
    kind, sep, _ = text.partition(":")
    return bool(sep) and kind in _BUILDERS


def parse_reference(text: str) -> Reference:
    """
    Build a reference from its string form.

    Raises:
        ConfigError: Unknown kind, missing or malformed parameters, or
                     parameters outside the distribution's domain
    """
    kind, sep, rest = text.partition(":")
    if not sep or kind not in _BUILDERS:
        raise ConfigError(f"unknown reference {text!r}; kinds: {', '.join(sorted(_BUILDERS))}")
    try:
        return _BUILDERS[kind](_parse_params(rest))
    except (AnalyticsDomainError, ConfigurationError) as exc:
        raise ConfigError(str(exc), path=kind) from exc
