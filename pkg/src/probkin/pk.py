"""Probability kinematics: belief revision on a coarse partition.

When new evidence arrives as a distribution over a coarse variable xi
(rather than as a hard observation), the prior pi(omega) is revised to

    p(omega) = [p_target(xi(omega)) / pi_ref(xi(omega))] * pi(omega),

which keeps conditional beliefs within each coarse fibre untouched
(the J-condition) while moving the coarse marginal to the target.  The
discrete case divides prior mass within each partition element
proportionally; the continuous case multiplies the prior log-density by
the log-ratio of target to reference coarse densities.  The reference
must dominate the target on the coarse variable's range, otherwise mass
is requested where none exists; model construction scans for that.

An ablation switch drops the reference denominator, which is the naive
"multiply prior by evidence" update; it is kept because the experiments
quantify exactly how wrong it is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import (
    DegenerateSampleError,
    DomainError,
    NumericError,
    SupportMismatchError,
)
from .stats import KSReport, ks_one_sample

_SUPPORT_SCAN_POINTS = 512


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probabilities over named outcomes; must sum to 1 within 1e-12."""

    probs: Mapping[str, float]

    def __post_init__(self):
        if not self.probs:
            raise DomainError("need at least one outcome")
        for name, p in self.probs.items():
            if not (math.isfinite(p) and p >= 0.0):
                raise DomainError(f"probability of {name!r} must be finite and >= 0, got {p}")
        total = math.fsum(self.probs.values())
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", dict(self.probs))

    def prob(self, outcome: str) -> float:
        return self.probs[outcome]


@dataclass(frozen=True)
class Partition:
    """Assignment of each outcome to a partition element (coarse value)."""

    assignment: Mapping[str, str]

    def __post_init__(self):
        if not self.assignment:
            raise DomainError("partition must cover at least one outcome")
        object.__setattr__(self, "assignment", dict(self.assignment))

    def elements(self) -> set:
        return set(self.assignment.values())

    def members(self, element: str) -> list:
        return [o for o, e in self.assignment.items() if e == element]


def discrete_pk_update(
    prior: DiscreteDistribution,
    partition: Partition,
    new_marginals: DiscreteDistribution,
) -> DiscreteDistribution:
    """Jeffrey's rule on a finite outcome set.

    posterior(omega) = prior(omega) * new_marginals(E) / prior_mass(E)
    for E the element containing omega.  Every outcome must be assigned
    to an element; evidence mass on an element with zero prior mass (or
    on an unknown element) is a support mismatch.
    """
    missing = set(prior.probs) - set(partition.assignment)
    if missing:
        raise DomainError(f"partition does not cover outcomes: {sorted(missing)}")
    element_mass: dict = {e: 0.0 for e in partition.elements()}
    for outcome, p in prior.probs.items():
        element_mass[partition.assignment[outcome]] += p
    for element, p in new_marginals.probs.items():
        if p > 0.0 and element_mass.get(element, 0.0) == 0.0:
            raise SupportMismatchError(
                f"evidence puts mass {p} on element {element!r} with zero prior mass"
            )
    ratio = {
        e: (new_marginals.probs.get(e, 0.0) / m if m > 0.0 else 0.0)
        for e, m in element_mass.items()
    }
    posterior = {o: p * ratio[partition.assignment[o]] for o, p in prior.probs.items()}
    return DiscreteDistribution(probs=posterior)


@dataclass(frozen=True)
class PkModel:
    """Continuous PK update specified by densities and a coarse map.

    ``prior_logpdf`` acts on the fine variable (an angle vector);
    ``coarse_map`` sends it to the scalar coarse value; target and
    reference are log-densities of that coarse value.  On construction
    the coarse range is scanned: any point where the target is finite
    but the reference is -inf means the update would create mass out of
    nothing, and raises.  ``ablation_mode`` skips the reference
    denominator (naive product update) and therefore skips the scan.
    """

    prior_logpdf: Callable[[np.ndarray], float]
    coarse_map: Callable[[np.ndarray], float]
    target_logpdf: Callable[[float], float]
    reference_logpdf: Callable[[float], float]
    coarse_range: tuple
    ablation_mode: bool = False

    def __post_init__(self):
        lo, hi = float(self.coarse_range[0]), float(self.coarse_range[1])
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"coarse_range must be finite with lo < hi, got {self.coarse_range}")
        object.__setattr__(self, "coarse_range", (lo, hi))
        if not self.ablation_mode:
            grid = np.linspace(lo, hi, _SUPPORT_SCAN_POINTS + 2)[1:-1]
            for xi in grid:
                lt = float(self.target_logpdf(xi))
                lr = float(self.reference_logpdf(xi))
                if math.isnan(lt) or math.isnan(lr):
                    raise NumericError(f"NaN coarse log-density at xi = {xi}")
                if math.isfinite(lt) and lr == -math.inf:
                    raise SupportMismatchError(
                        f"target has mass at xi = {xi} where the reference has none"
                    )


def reference_ratio_from_parts(model: PkModel, xi: float, prior_logpdf_value: float) -> float:
    """Combine precomputed coarse value and prior log-density into the posterior.

    log p = log target(xi) - log reference(xi) + log prior, the
    reference term dropped in ablation mode.  -inf from any component
    propagates as -inf (rejection region); NaN raises.  Split out from
    :func:`reference_ratio_logpdf` for callers that already computed
    xi and the prior term on a cheaper path.
    """
    lt = float(model.target_logpdf(xi))
    parts = [lt, float(prior_logpdf_value)]
    if not model.ablation_mode:
        parts.append(float(model.reference_logpdf(xi)))
    if any(math.isnan(v) for v in parts):
        raise NumericError(f"NaN log-density component at xi = {xi}")
    if any(v == -math.inf for v in parts):
        return -math.inf
    if model.ablation_mode:
        return lt + parts[1]
    return lt - parts[2] + parts[1]


def reference_ratio_logpdf(model: PkModel, omega) -> float:
    """Log posterior density at a fine-variable point.

    log p = log target(xi) - log reference(xi) + log prior(omega), with
    the reference term dropped in ablation mode.  -inf from any
    component propagates as -inf (rejection region); NaN raises.
    """
    omega = np.asarray(omega, dtype=float)
    xi = float(model.coarse_map(omega))
    return reference_ratio_from_parts(model, xi, float(model.prior_logpdf(omega)))


@dataclass(frozen=True)
class RobustGaussianFit:
    """Location/scale fit that ignores tail contamination."""

    mean: float
    variance: float

    @property
    def stddev(self) -> float:
        return math.sqrt(self.variance)


def estimate_reference_gaussian(samples) -> RobustGaussianFit:
    """Median / scaled-MAD Gaussian fit (scale factor 1.4826).

    Needs at least 30 samples; a zero MAD means the sample carries no
    spread to calibrate against.
    """
    x = np.asarray(samples, dtype=float).reshape(-1)
    if x.size < 30:
        raise DomainError(f"need at least 30 samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DomainError("samples must be finite")
    med = float(np.median(x))
    mad = float(np.median(np.abs(x - med)))
    if mad == 0.0:
        raise DegenerateSampleError("median absolute deviation is zero")
    sd = 1.4826 * mad
    return RobustGaussianFit(mean=med, variance=sd * sd)


def faithfulness_check(posterior_samples, coarse_map, target_cdf) -> KSReport:
    """KS test of the pushed-forward posterior against the target CDF.

    This is the continuous faithfulness criterion: the posterior's
    coarse marginal should match the evidence distribution.
    """
    samples = list(posterior_samples)
    if len(samples) < 100:
        raise DomainError(f"need at least 100 posterior samples, got {len(samples)}")
    coarse = np.array([float(coarse_map(np.asarray(s, dtype=float))) for s in samples])
    return ks_one_sample(coarse, target_cdf)
