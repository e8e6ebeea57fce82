"""Angular and coarse-variable distributions.

Four families cover everything the experiments need:

* von Mises on the circle (prior over step/backbone angles),
* the Stephens chi-square approximation to the resultant length of a
  von Mises random walk (reference density over the coarse variable),
* a Beta density rescaled to [0, n_scale] (target density over the
  coarse variable),
* a Gaussian (target/reference for the protein end-to-end distance).

All densities are evaluated in log space only; exp of a log-density is
left to the caller.  Angles live on (-pi, pi], enforced by
:func:`wrap_angle` (wrap first, then evaluate), so every log-density is
exactly periodic.  Sampling draws from an externally supplied
``numpy.random.Generator`` so the callers own determinism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import special
from .errors import DomainError

TWO_PI = 2.0 * math.pi


def wrap_angle(theta):
    """Wrap angles to (-pi, pi] (remainder into [0, 2pi), then shift).

    Accepts scalars or arrays; -pi maps to +pi so the interval is
    half-open on the left.
    """
    arr = np.asarray(theta, dtype=float)
    w = np.remainder(arr, TWO_PI)
    w = np.where(w > math.pi, w - TWO_PI, w)
    return float(w) if arr.ndim == 0 else w


@dataclass(frozen=True)
class VonMisesParams:
    """Mean direction mu (wrapped to (-pi, pi]) and concentration kappa >= 0."""

    mu: float
    kappa: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")
        if not (math.isfinite(self.kappa) and self.kappa >= 0.0):
            raise DomainError(f"kappa must be finite and >= 0, got {self.kappa}")
        object.__setattr__(self, "mu", wrap_angle(float(self.mu)))
        object.__setattr__(self, "kappa", float(self.kappa))


@dataclass(frozen=True)
class StephensParams:
    """Parameters of the chi-square approximation to the walk resultant length.

    ``gamma`` solves 1/gamma = 1/kappa + 3/(8 kappa^2); the transform
    u = 2 N gamma (1 - d/N) is approximately chi-square with N - 1
    degrees of freedom.  The approximation is intended for kappa >= 4
    (it degrades below), and kappa must be strictly positive for gamma
    to exist.
    """

    kappa: float
    n_steps: int

    def __post_init__(self):
        if not (math.isfinite(self.kappa) and self.kappa > 0.0):
            raise DomainError(f"kappa must be finite and > 0, got {self.kappa}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 2:
            raise DomainError(f"n_steps must be an integer >= 2, got {self.n_steps}")
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @property
    def gamma(self) -> float:
        k = self.kappa
        return 1.0 / (1.0 / k + 3.0 / (8.0 * k * k))

    @property
    def dof(self) -> int:
        return self.n_steps - 1

    @property
    def support_mass(self) -> float:
        """Mass the chi-square assigns to the physical range d in [0, N]."""
        return float(special.chi2_cdf(2.0 * self.n_steps * self.gamma, self.dof))


@dataclass(frozen=True)
class ScaledBetaParams:
    """Beta(alpha, beta) stretched onto [0, n_scale]."""

    alpha: float
    beta: float
    n_scale: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise DomainError(f"alpha must be finite and > 0, got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"beta must be finite and > 0, got {self.beta}")
        if not (math.isfinite(self.n_scale) and self.n_scale > 0.0):
            raise DomainError(f"n_scale must be finite and > 0, got {self.n_scale}")


@dataclass(frozen=True)
class GaussianParams:
    """Mean and variance (> 0) of a univariate Gaussian."""

    mean: float
    variance: float

    def __post_init__(self):
        if not math.isfinite(self.mean):
            raise DomainError(f"mean must be finite, got {self.mean}")
        if not (math.isfinite(self.variance) and self.variance > 0.0):
            raise DomainError(f"variance must be finite and > 0, got {self.variance}")

    @property
    def stddev(self) -> float:
        return math.sqrt(self.variance)


def vm_logpdf(theta, params: VonMisesParams):
    """von Mises log-density kappa cos(theta - mu) - log(2 pi I0(kappa)).

    Input angles are wrapped before evaluation, so the result is exactly
    periodic in theta.  Accepts scalars or arrays.
    """
    arr = wrap_angle(theta)
    log_norm = special.LOG_TWO_PI + special.log_bessel_i0(params.kappa)
    out = params.kappa * np.cos(np.asarray(arr) - params.mu) - log_norm
    return float(out) if np.ndim(theta) == 0 else out


def vm_sample(rng: np.random.Generator, params: VonMisesParams, size=None):
    """Draw von Mises variates with the Best-Fisher rejection sampler.

    kappa = 0 falls back to the uniform circle.  Returns angles in
    (-pi, pi]; ``size=None`` returns a scalar.
    """
    shape = () if size is None else (size if isinstance(size, tuple) else (size,))
    n = int(np.prod(shape)) if shape else 1
    if params.kappa == 0.0:
        draws = math.pi - rng.uniform(0.0, TWO_PI, size=n)  # lands in (-pi, pi]
    else:
        kappa = params.kappa
        tau = 1.0 + math.sqrt(1.0 + 4.0 * kappa * kappa)
        rho = (tau - math.sqrt(2.0 * tau)) / (2.0 * kappa)
        r = (1.0 + rho * rho) / (2.0 * rho)
        draws = np.empty(n)
        todo = np.arange(n)
        while todo.size:
            m = todo.size
            u1 = rng.uniform(size=m)
            u2 = rng.uniform(size=m)
            u3 = rng.uniform(size=m)
            z = np.cos(math.pi * u1)
            f = (1.0 + r * z) / (r + z)
            c = kappa * (r - f)
            with np.errstate(divide="ignore"):
                accept = (c * (2.0 - c) - u2 > 0.0) | (np.log(c / u2) + 1.0 - c >= 0.0)
            angles = np.where(u3 < 0.5, -1.0, 1.0) * np.arccos(f)
            draws[todo[accept]] = params.mu + angles[accept]
            todo = todo[~accept]
        draws = wrap_angle(draws)
    if size is None:
        return float(draws[0])
    return draws.reshape(shape)


def stephens_logpdf(d, params: StephensParams):
    """Log-density of the walk resultant length under the Stephens approximation.

    Chi-square log-density at u = 2 N gamma (1 - d/N) plus the Jacobian
    log(2 gamma).  -inf outside the open interval (0, N): the density is
    zero beyond the physical range, and the boundary points are pinned
    to -inf to keep samplers away from the d = N ridge where the
    chi-square support ends.
    """
    arr = np.asarray(d, dtype=float)
    n = params.n_steps
    gamma = params.gamma
    dof = params.dof
    u = 2.0 * n * gamma * (1.0 - arr / n)
    half = 0.5 * dof
    log_norm = half * math.log(2.0) + math.lgamma(half)
    with np.errstate(divide="ignore", invalid="ignore"):
        body = (half - 1.0) * np.log(u) - 0.5 * u - log_norm + math.log(2.0 * gamma)
    out = np.where((arr > 0.0) & (arr < n), body, -np.inf)
    return float(out) if arr.ndim == 0 else out


def stephens_cdf(d, params: StephensParams):
    """CDF of the Stephens approximation.

    u decreases in d, so P(d <= x) is the chi-square survival function
    at u(x).  Clamped to 0 below d = 0 and 1 above d = N.
    """
    arr = np.asarray(d, dtype=float)
    u = np.clip(2.0 * params.n_steps * params.gamma * (1.0 - arr / params.n_steps), 0.0, None)
    out = np.asarray(special.chi2_sf(u, params.dof), dtype=float)
    out = np.where(arr < 0.0, 0.0, np.where(arr > params.n_steps, 1.0, out))
    return float(out) if arr.ndim == 0 else out


def _xlogy(c: float, x: np.ndarray) -> np.ndarray:
    """c * log(x) with the convention 0 * log(0) = 0."""
    if c == 0.0:
        return np.zeros_like(x)
    with np.errstate(divide="ignore"):
        return c * np.log(x)


def scaled_beta_logpdf(d, params: ScaledBetaParams):
    """Log-density of N * X where X ~ Beta(alpha, beta), on [0, n_scale]."""
    arr = np.asarray(d, dtype=float)
    n = params.n_scale
    x = arr / n
    inside = (x >= 0.0) & (x <= 1.0)
    xs = np.where(inside, x, 0.5)  # placeholder value off-support
    body = (
        -math.log(n)
        - special.log_beta(params.alpha, params.beta)
        + _xlogy(params.alpha - 1.0, xs)
        + _xlogy(params.beta - 1.0, 1.0 - xs)
    )
    out = np.where(inside, body, -np.inf)
    return float(out) if arr.ndim == 0 else out


def scaled_beta_cdf(d, params: ScaledBetaParams):
    """CDF of the scaled Beta: regularized incomplete beta at d / n_scale."""
    arr = np.asarray(d, dtype=float)
    x = np.clip(arr / params.n_scale, 0.0, 1.0)
    out = np.asarray(special.regularized_incomplete_beta(params.alpha, params.beta, x), dtype=float)
    return float(out) if arr.ndim == 0 else out


def gaussian_logpdf(x, params: GaussianParams):
    """Univariate Gaussian log-density."""
    arr = np.asarray(x, dtype=float)
    out = -0.5 * (arr - params.mean) ** 2 / params.variance - 0.5 * (
        math.log(params.variance) + special.LOG_TWO_PI
    )
    return float(out) if arr.ndim == 0 else out


def gaussian_cdf(x, params: GaussianParams):
    """Univariate Gaussian CDF."""
    arr = np.asarray(x, dtype=float)
    out = special.std_normal_cdf((arr - params.mean) / params.stddev)
    return float(out) if arr.ndim == 0 else np.asarray(out)
