"""Analytic coverage, capacity and mean-power expressions.

Coverage evaluators take the SINR threshold ``theta`` in linear units. Monte
Carlo based evaluators (the Np-dimensional ones) report a one-sigma standard
error in ``abs_uncertainty``; quadrature based ones report the quadrature
error estimate; closed forms report zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import NetworkConfig
from .errors import ConfigurationError
from .pointprocess import sample_ordered_nearest
from .seeding import seed_sequence
from .specfun import ExpectationEstimate, expint_ei, integrate_semi_infinite, ordered_distance_expectation

__all__ = [
    "Method",
    "CoverageEstimate",
    "CapacityEstimate",
    "mean_power_np_nearest",
    "mean_power_all_pbs",
    "laplace_constant",
    "nearest_clamped_moment",
    "coverage_theorem1",
    "coverage_corollary1",
    "coverage_corollary2",
    "coverage_corollary3",
    "coverage_corollary4",
    "coverage_corollary5_theorem2",
    "coverage_corollary5",
    "coverage_theorem2",
    "capacity",
    "evaluate",
]


class Method(str, Enum):
    THEOREM1 = "theorem1"
    COROLLARY1 = "corollary1"
    COROLLARY2 = "corollary2"
    COROLLARY3 = "corollary3"
    COROLLARY4 = "corollary4"
    COROLLARY5 = "corollary5"
    THEOREM2 = "theorem2"
    SIMULATION = "simulation"


@dataclass(frozen=True)
class CoverageEstimate:
    value: float
    abs_uncertainty: float
    method: str
    theta: float

    def __post_init__(self):
        if not -1e-12 <= self.value <= 1 + 1e-12:
            raise ValueError(f"coverage {self.value!r} outside [0, 1]")
        if not self.abs_uncertainty >= 0:
            raise ValueError("abs_uncertainty must be >= 0")


@dataclass(frozen=True)
class CapacityEstimate:
    value: float
    abs_uncertainty: float


# --- mean received power -----------------------------------------------------

def mean_power_np_nearest(cfg: NetworkConfig, samples: int = 100_000, seed=None) -> ExpectationEstimate:
    """Average power harvested from the Np nearest PBs under bounded path loss."""
    est = ordered_distance_expectation(cfg.lambda_p, cfg.Np, cfg.alpha_f, 1.0, samples, seed)
    return ExpectationEstimate(cfg.P_C * est.value, cfg.P_C * est.std_error, est.samples)


def mean_power_all_pbs(cfg: NetworkConfig) -> float:
    """Campbell mean of the power harvested from every PB in the plane."""
    if not cfg.alpha_f > 2:
        raise ValueError("alpha_f must exceed 2 for a finite all-PB mean")
    return cfg.P_C * math.pi * cfg.lambda_p * cfg.alpha_f / (cfg.alpha_f - 2.0)


# --- shared pieces -----------------------------------------------------------

def laplace_constant(alpha_b: float) -> float:
    """``2 pi^2 / (alpha sin(2 pi / alpha))``, the PPP interference Laplace constant."""
    if not alpha_b > 2:
        raise ValueError("alpha_b must exceed 2")
    return 2.0 * math.pi**2 / (alpha_b * math.sin(2.0 * math.pi / alpha_b))


def nearest_clamped_moment(lambda_p: float) -> float:
    """``E[min(1, x_1**-2)]`` for the nearest-PB distance, in closed form."""
    a = math.pi * lambda_p
    return 1.0 - math.exp(-a) - a * expint_ei(-a)


def _interference_exponent(cfg: NetworkConfig, theta: float) -> float:
    # lambda_b * K * (theta d00^alpha_b)^(2/alpha_b) written without the round trip
    delta = 2.0 / cfg.alpha_b
    return laplace_constant(cfg.alpha_b) * cfg.lambda_b * theta**delta * cfg.d00**2


def _noise_scale(cfg: NetworkConfig, power: float) -> float:
    # N0 / (beta * power); a silent reflector (beta = 0) with noise never succeeds
    if cfg.N0 == 0:
        return 0.0
    if cfg.beta == 0:
        return math.inf
    return cfg.N0 / (cfg.beta * power)


def _check_theta(theta):
    if not theta > 0:
        raise ValueError(f"theta must be positive (linear), got {theta!r}")


# --- Np-nearest harvesting ----------------------------------------------------

def _theorem1_core(cfg, theta, samples, seed, inner_samples, with_noise):
    _check_theta(theta)
    if not cfg.alpha_b > 2:
        raise ValueError("alpha_b must exceed 2")
    outer_seed, inner_seed = seed_sequence(seed).spawn(2)
    delta = 2.0 / cfg.alpha_b
    inner = ordered_distance_expectation(cfg.lambda_p, cfg.Np, cfg.alpha_f, delta, inner_samples, inner_seed)
    k_lb = laplace_constant(cfg.alpha_b) * cfg.lambda_b

    x = sample_ordered_nearest(cfg.lambda_p, cfg.Np, np.random.default_rng(outer_seed), size=samples)
    gain = np.sum(np.minimum(1.0, x ** (-cfg.alpha_f)), axis=1)
    s = theta * cfg.d00**cfg.alpha_b / gain
    interference = k_lb * s**delta
    exponent = interference * inner.value
    if with_noise:
        exponent = exponent + s * _noise_scale(cfg, cfg.P_C)
    v = np.exp(-exponent)
    value = float(np.mean(v))
    se_outer = float(np.std(v, ddof=1) / math.sqrt(samples)) if samples > 1 and value > 0 else 0.0
    # first-order propagation of the inner-expectation error
    sensitivity = float(np.mean(interference * v)) if value > 0 else 0.0
    se = math.hypot(se_outer, sensitivity * inner.std_error)
    return value, se


def coverage_theorem1(cfg: NetworkConfig, theta: float, samples: int = 100_000, seed=None,
                      inner_samples: int = 100_000) -> CoverageEstimate:
    """Coverage when every BN reflects the forward-fading mean of its Np-PB harvest.

    The Np-fold integral over the ordered-distance density is a Monte Carlo
    average over exact draws from that density; the interferer mark
    expectation is estimated once from an independent seed substream.
    """
    value, se = _theorem1_core(cfg, theta, samples, seed, inner_samples, with_noise=cfg.N0 > 0)
    return CoverageEstimate(value, se, Method.THEOREM1.value, theta)


def coverage_corollary3(cfg: NetworkConfig, theta: float, samples: int = 100_000, seed=None,
                        inner_samples: int = 100_000) -> CoverageEstimate:
    """Interference-limited (N0 = 0) version of :func:`coverage_theorem1`."""
    if cfg.N0 != 0:
        raise ConfigurationError("corollary3 requires N0 = 0")
    value, se = _theorem1_core(cfg, theta, samples, seed, inner_samples, with_noise=False)
    return CoverageEstimate(value, se, Method.COROLLARY3.value, theta)


def _check_corollary1(cfg):
    if cfg.Np != 1:
        raise ConfigurationError("corollary1/2 require Np = 1")
    if cfg.alpha_f != cfg.alpha_b:
        raise ConfigurationError("corollary1/2 require alpha_f == alpha_b")


def _corollary1_value(cfg, theta, tol, with_noise, bounded_signal):
    _check_theta(theta)
    _check_corollary1(cfg)
    alpha = cfg.alpha_b
    delta = 2.0 / alpha
    a = math.pi * cfg.lambda_p
    k_lb_m = laplace_constant(alpha) * cfg.lambda_b * nearest_clamped_moment(cfg.lambda_p)
    noise = _noise_scale(cfg, cfg.P_C) if with_noise else 0.0
    s0 = theta * cfg.d00**alpha

    def integrand(x):
        s = s0 * x**alpha
        expo = a * x * x + k_lb_m * s**delta
        if with_noise:
            expo = expo + s * noise
        return 2.0 * a * x * np.exp(-expo)

    if not bounded_signal:
        q = integrate_semi_infinite(integrand, 0.0, tol)
        return q.value, q.abs_error_estimate
    # inside unit distance the clamped gain is 1, so s is constant there
    near = -math.expm1(-a) * math.exp(-(k_lb_m * s0**delta + s0 * noise))
    q = integrate_semi_infinite(integrand, 1.0, tol)
    return near + q.value, q.abs_error_estimate


def coverage_corollary1(cfg: NetworkConfig, theta: float, tol: float = 1e-10,
                        bounded_signal: bool = True) -> CoverageEstimate:
    """Single-PB harvesting with equal exponents: one radial quadrature.

    With ``bounded_signal`` (default) the signal-side gain is
    ``min(1, x**-alpha)``, the same law used for interferers; pass ``False``
    for the unclamped ``x**-alpha`` signal gain.
    """
    value, err = _corollary1_value(cfg, theta, tol, cfg.N0 > 0, bounded_signal)
    return CoverageEstimate(min(max(value, 0.0), 1.0), err, Method.COROLLARY1.value, theta)


def coverage_corollary2(cfg: NetworkConfig, theta: float, tol: float = 1e-10,
                        bounded_signal: bool = True) -> CoverageEstimate:
    """Noise-free :func:`coverage_corollary1`; independent of P_C and beta."""
    if cfg.N0 != 0:
        raise ConfigurationError("corollary2 requires N0 = 0")
    value, err = _corollary1_value(cfg, theta, tol, False, bounded_signal)
    return CoverageEstimate(min(max(value, 0.0), 1.0), err, Method.COROLLARY2.value, theta)


# --- constant (averaged) BN power ---------------------------------------------

def coverage_corollary4(cfg: NetworkConfig, theta: float, mean_power: float) -> CoverageEstimate:
    """Closed-form coverage when every BN reflects ``beta * mean_power``.

    ``mean_power`` is the averaged harvested power; pass
    :func:`mean_power_np_nearest` or :func:`mean_power_all_pbs` depending on
    the harvesting scenario.
    """
    _check_theta(theta)
    if not mean_power > 0:
        raise ValueError("mean_power must be positive")
    s = theta * cfg.d00**cfg.alpha_b
    noise = s * _noise_scale(cfg, mean_power)
    value = math.exp(-(noise + _interference_exponent(cfg, theta)))
    return CoverageEstimate(value, 0.0, Method.COROLLARY4.value, theta)


def coverage_corollary5_theorem2(cfg: NetworkConfig, theta: float, method: str = "corollary5") -> CoverageEstimate:
    """Interference-limited coverage with power-independent closed form.

    The same expression serves as the noise-free averaged-power coverage and
    as the Jensen approximation for all-PB harvesting; ``method`` only sets
    the label.
    """
    _check_theta(theta)
    method = Method(method)
    if method not in (Method.COROLLARY5, Method.THEOREM2):
        raise ValueError("method must be corollary5 or theorem2")
    value = math.exp(-(0.0 + _interference_exponent(cfg, theta)))
    return CoverageEstimate(value, 0.0, method.value, theta)


def coverage_corollary5(cfg: NetworkConfig, theta: float) -> CoverageEstimate:
    return coverage_corollary5_theorem2(cfg, theta, "corollary5")


def coverage_theorem2(cfg: NetworkConfig, theta: float) -> CoverageEstimate:
    return coverage_corollary5_theorem2(cfg, theta, "theorem2")


def capacity(cfg: NetworkConfig, coverage: CoverageEstimate, area: float = 100.0) -> CapacityEstimate:
    """Successful transmissions in ``area`` square meters: ``lambda_b * P_s * area``."""
    scale = cfg.lambda_b * area
    return CapacityEstimate(scale * coverage.value, scale * coverage.abs_uncertainty)


def evaluate(method: str, cfg: NetworkConfig, theta: float, samples: int = 100_000, seed=None,
             tol: float = 1e-10, power_scenario: str = "all_pbs") -> CoverageEstimate:
    """Dispatch to an analytic coverage evaluator by name.

    ``power_scenario`` selects the mean power fed to corollary4
    (``"all_pbs"`` or ``"np_nearest"``).
    """
    method = Method(method)
    if method is Method.THEOREM1:
        return coverage_theorem1(cfg, theta, samples, seed, samples)
    if method is Method.COROLLARY1:
        return coverage_corollary1(cfg, theta, tol)
    if method is Method.COROLLARY2:
        return coverage_corollary2(cfg.replace(N0=0.0), theta, tol)
    if method is Method.COROLLARY3:
        return coverage_corollary3(cfg.replace(N0=0.0), theta, samples, seed, samples)
    if method is Method.COROLLARY4:
        if power_scenario == "all_pbs":
            p = mean_power_all_pbs(cfg)
        elif power_scenario == "np_nearest":
            p = mean_power_np_nearest(cfg, samples, seed).value
        else:
            raise ConfigurationError(f"unknown power scenario {power_scenario!r}")
        return coverage_corollary4(cfg, theta, p)
    if method in (Method.COROLLARY5, Method.THEOREM2):
        return coverage_corollary5_theorem2(cfg, theta, method.value)
    raise ConfigurationError(f"{method.value} is not an analytic method")
