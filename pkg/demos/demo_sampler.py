"""
Sampling an anisotropic Gaussian with the no-U-turn sampler
===========================================================

The sampler needs nothing but a log-density and its gradient.  Here the
target is a 2D Gaussian with variances 0.25 and 4: a 16:1 scale split
that forces the step-size adaptation to compromise and the tree to grow
deeper along the wide direction.
"""

import numpy as np

from probkin.sampler import SamplerConfig, build_target_density, nuts_sample

variances = np.array([0.25, 4.0])

target = build_target_density(
    logpdf=lambda q: float(-0.5 * np.sum(q * q / variances)),
    grad=lambda q: -q / variances,
    dimension=2,
    check_points=[np.array([0.3, -1.2]), np.array([-2.0, 0.5])],
)

# build_target_density already cross-checked the gradient against a
# finite-difference probe at the two points above; a wrong gradient
# would have raised instead of returning.
config = SamplerConfig(warmup_steps=500, sample_steps=2000, seed=0)
result = nuts_sample(target, np.zeros(2), config)

print(f"sample variances: {result.samples.var(axis=0).round(3)} (target {variances})")
print(f"sample means:     {result.samples.mean(axis=0).round(3)} (target [0, 0])")
print(f"mean acceptance:  {result.accept_stats.mean():.3f} (adaptation aims at 0.8)")
print(f"adapted step size: {result.step_size_trace[-1]:.3f}")
print(f"divergences: {result.divergence_count}")

# The per-iteration leapfrog counts show the doubling tree at work:
# most iterations cost 2^depth - 1 gradient evaluations.
counts = np.bincount(result.leapfrog_counts)
print("\nleapfrogs per iteration (count: iterations)")
for n, c in enumerate(counts):
    if c:
        print(f"  {n:3d}: {c}")
