"""Planar unit-step random walks driven by turning-free heading angles.

A walk of N steps is determined by heading angles theta_1..theta_N: it
starts at the origin and step i advances by (cos theta_i, sin theta_i).
The coarse variable of interest is the resultant length d = |endpoint|,
which lives in [0, N].
"""

from __future__ import annotations

import numpy as np

from .distributions import VonMisesParams, vm_sample
from .errors import DomainError, SingularityError

# below this resultant length the direction of the endpoint (and hence the
# gradient of d) is numerically meaningless
SINGULAR_D = 1e-9


def _check_angles(theta) -> np.ndarray:
    arr = np.asarray(theta, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise DomainError("theta must be a 1-d array with at least one angle")
    if not np.all(np.isfinite(arr)):
        raise DomainError("theta must be finite")
    return arr


def coords_from_angles(theta) -> np.ndarray:
    """Vertex coordinates of the walk, shape (N + 1, 2), starting at the origin."""
    arr = _check_angles(theta)
    steps = np.stack([np.cos(arr), np.sin(arr)], axis=1)
    out = np.empty((arr.size + 1, 2))
    out[0] = 0.0
    np.cumsum(steps, axis=0, out=out[1:])
    return out


def resultant_vector(theta) -> np.ndarray:
    """Endpoint of the walk: (sum cos theta_i, sum sin theta_i)."""
    arr = _check_angles(theta)
    return np.array([np.cos(arr).sum(), np.sin(arr).sum()])


def resultant_length(theta) -> float:
    """d = |endpoint|, in [0, N]."""
    rx, ry = resultant_vector(theta)
    return float(np.hypot(rx, ry))


def resultant_length_grad(theta) -> np.ndarray:
    """Gradient of d with respect to each heading angle.

    d(theta) = |R| with R = (sum cos, sum sin), so
    dd/dtheta_i = (-sin theta_i * Rx + cos theta_i * Ry) / d.
    Singular at d ~ 0 where the endpoint direction is undefined.
    """
    d, grad = resultant_length_and_grad(theta)
    return grad


def resultant_length_and_grad(theta) -> tuple[float, np.ndarray]:
    """Resultant length and its gradient in one pass (shared trig)."""
    arr = _check_angles(theta)
    c = np.cos(arr)
    s = np.sin(arr)
    rx = c.sum()
    ry = s.sum()
    d = float(np.hypot(rx, ry))
    if d < SINGULAR_D:
        raise SingularityError(f"resultant length {d:.3e} below {SINGULAR_D:.0e}; gradient undefined")
    return d, (-s * rx + c * ry) / d


def vrw_sample(rng: np.random.Generator, params: VonMisesParams, n_steps: int):
    """One von Mises random walk: returns (theta, coords).

    theta has shape (n_steps,), coords shape (n_steps + 1, 2).
    """
    if int(n_steps) != n_steps or n_steps < 1:
        raise DomainError(f"n_steps must be a positive integer, got {n_steps}")
    theta = vm_sample(rng, params, size=int(n_steps))
    return theta, coords_from_angles(theta)


def vrw_resultant_sample(
    rng: np.random.Generator, params: VonMisesParams, n_steps: int, n_walks: int
) -> np.ndarray:
    """Resultant lengths of ``n_walks`` independent walks, vectorized."""
    if int(n_steps) != n_steps or n_steps < 1:
        raise DomainError(f"n_steps must be a positive integer, got {n_steps}")
    if int(n_walks) != n_walks or n_walks < 1:
        raise DomainError(f"n_walks must be a positive integer, got {n_walks}")
    theta = vm_sample(rng, params, size=(int(n_walks), int(n_steps)))
    return np.hypot(np.cos(theta).sum(axis=1), np.sin(theta).sum(axis=1))
