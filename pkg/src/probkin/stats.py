"""One-sample Kolmogorov-Smirnov test plus small sample utilities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidCdfError


@dataclass(frozen=True)
class KSReport:
    """KS statistic, asymptotic p-value and the sample size used."""

    statistic: float
    p_value: float
    n_effective: int


def kolmogorov_sf(lam: float) -> float:
    """Kolmogorov survival function Q(lam) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lam^2).

    Alternating series, up to 100 terms with early exit once terms drop
    below 1e-12.  Below lam = 0.1 the survival probability is 1 to
    double precision, so 1.0 is returned outright (the series needs too
    many terms there).
    """
    if lam < 0.0:
        raise DomainError(f"kolmogorov_sf requires lam >= 0, got {lam}")
    if lam < 0.1:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 101):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += sign * term
        sign = -sign
        if term < 1e-12:
            break
    return float(min(1.0, max(0.0, 2.0 * total)))


def ks_one_sample(samples, cdf) -> KSReport:
    """One-sample KS test of ``samples`` against the CDF callable.

    statistic = sup over sorted samples of max(i/n - F(x_i),
    F(x_i) - (i-1)/n); p-value from the asymptotic Kolmogorov law at
    sqrt(n) * statistic.  The CDF is probed on the sorted sample grid
    and must be nondecreasing there.
    """
    x = np.sort(np.asarray(samples, dtype=float).reshape(-1))
    n = x.size
    if n < 10:
        raise DomainError(f"need at least 10 samples for a KS test, got {n}")
    if not np.all(np.isfinite(x)):
        raise DomainError("samples must be finite")
    try:
        f = np.asarray(cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except TypeError:
        f = np.array([float(cdf(v)) for v in x])
    if np.any(~np.isfinite(f)) or np.any(f < -1e-12) or np.any(f > 1.0 + 1e-12):
        raise InvalidCdfError("cdf returned values outside [0, 1] on the sample grid")
    if np.any(np.diff(f) < -1e-12):
        raise InvalidCdfError("cdf is not nondecreasing on the sample grid")
    f = np.clip(f, 0.0, 1.0)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    stat = float(max(d_plus, d_minus, 0.0))
    return KSReport(statistic=stat, p_value=kolmogorov_sf(math.sqrt(n) * stat), n_effective=n)


def thin(samples, stride: int):
    """Every stride-th entry, starting at index 0.

    A stride beyond the length leaves a single entry.  Works on arrays
    (first axis) and sequences.
    """
    if int(stride) != stride or stride < 1:
        raise DomainError(f"stride must be a positive integer, got {stride}")
    return samples[:: int(stride)]


def histogram(samples, bins: int, value_range: tuple) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-range histogram normalized against the *total* sample count.

    Returns (edges, densities) with len(edges) = bins + 1.  Densities
    are counts / (total_count * bin_width), so integrating over the
    range gives the fraction of samples inside it; out-of-range samples
    lower the integral instead of silently renormalizing.
    """
    lo, hi = float(value_range[0]), float(value_range[1])
    if int(bins) != bins or bins < 1:
        raise DomainError(f"bins must be a positive integer, got {bins}")
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"need a finite range with lo < hi, got ({lo}, {hi})")
    x = np.asarray(samples, dtype=float).reshape(-1)
    if x.size == 0:
        raise DomainError("need at least one sample")
    counts, edges = np.histogram(x, bins=int(bins), range=(lo, hi))
    width = (hi - lo) / bins
    return edges, counts / (x.size * width)
