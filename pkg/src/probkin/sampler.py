"""No-U-Turn sampler (multinomial variant) with dual-averaging step size.

The implementation follows the standard recursive scheme: trajectories
are doubled in a random direction until the generalized U-turn
criterion fires (momentum sums against the trajectory-end momenta,
including the extra boundary checks between merged subtrees), a
divergence occurs (energy error beyond 1000), or the tree depth cap is
reached.  Within-trajectory selection is multinomial with a progressive
bias toward the newer subtree.  The mass matrix is the identity; all
randomness comes from one ``numpy.random.Generator`` seeded from the
config, so chains are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import AdaptationFailureError, DomainError, GradientError

_DIVERGENCE_ENERGY = 1000.0

# dual-averaging constants
_DA_GAMMA = 0.05
_DA_T0 = 10.0
_DA_KAPPA = 0.75


@dataclass(frozen=True)
class SamplerConfig:
    """Knobs of one NUTS run."""

    warmup_steps: int = 1000
    sample_steps: int = 1000
    max_tree_depth: int = 10
    target_accept: float = 0.8
    initial_step_size: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if int(self.warmup_steps) != self.warmup_steps or self.warmup_steps < 10:
            raise DomainError(f"warmup_steps must be an integer >= 10, got {self.warmup_steps}")
        if int(self.sample_steps) != self.sample_steps or self.sample_steps < 1:
            raise DomainError(f"sample_steps must be an integer >= 1, got {self.sample_steps}")
        if int(self.max_tree_depth) != self.max_tree_depth or not (1 <= self.max_tree_depth <= 12):
            raise DomainError(f"max_tree_depth must be an integer in [1, 12], got {self.max_tree_depth}")
        if not (0.0 < self.target_accept < 1.0):
            raise DomainError(f"target_accept must be in (0, 1), got {self.target_accept}")
        if not (math.isfinite(self.initial_step_size) and self.initial_step_size > 0.0):
            raise DomainError(f"initial_step_size must be > 0, got {self.initial_step_size}")
        object.__setattr__(self, "warmup_steps", int(self.warmup_steps))
        object.__setattr__(self, "sample_steps", int(self.sample_steps))
        object.__setattr__(self, "max_tree_depth", int(self.max_tree_depth))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class TargetDensity:
    """Differentiable unnormalized log-density on R^dimension."""

    logpdf: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    dimension: int

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.dimension}")
        object.__setattr__(self, "dimension", int(self.dimension))


def check_gradient(target: TargetDensity, point, h: float = 1e-5) -> float:
    """Worst relative mismatch between analytic and central-difference gradient.

    Componentwise |analytic - fd| / (|fd| + 1e-12), maximized over
    components.
    """
    x = np.asarray(point, dtype=float)
    if x.shape != (target.dimension,):
        raise DomainError(f"point must have shape ({target.dimension},), got {x.shape}")
    analytic = np.asarray(target.grad(x), dtype=float)
    fd = np.empty_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        fd[i] = (target.logpdf(x + step) - target.logpdf(x - step)) / (2.0 * h)
    return float(np.max(np.abs(analytic - fd) / (np.abs(fd) + 1e-12)))


def build_target_density(
    logpdf: Callable[[np.ndarray], float],
    grad: Callable[[np.ndarray], np.ndarray],
    dimension: int,
    check_points: Optional[Sequence[np.ndarray]] = None,
    h: float = 1e-5,
    tol: float = 1e-4,
) -> TargetDensity:
    """Construct a TargetDensity, validating the gradient at check points.

    Raises GradientError if any check point shows a relative mismatch
    above ``tol``; a silently wrong gradient would bias every chain, so
    this is a hard failure.
    """
    target = TargetDensity(logpdf=logpdf, grad=grad, dimension=dimension)
    for point in check_points or ():
        err = check_gradient(target, point, h=h)
        if not (err <= tol):
            raise GradientError(
                f"gradient mismatch {err:.3e} exceeds {tol:.1e} at check point"
            )
    return target


def leapfrog(target: TargetDensity, position, momentum, step_size: float):
    """One kick-drift-kick leapfrog step; returns (position, momentum)."""
    q = np.asarray(position, dtype=float)
    p = np.asarray(momentum, dtype=float)
    p_half = p + 0.5 * step_size * np.asarray(target.grad(q), dtype=float)
    q_new = q + step_size * p_half
    p_new = p_half + 0.5 * step_size * np.asarray(target.grad(q_new), dtype=float)
    return q_new, p_new


@dataclass
class ChainResult:
    """Output of one NUTS run."""

    samples: np.ndarray  # (sample_steps, dimension)
    accept_stats: np.ndarray  # mean acceptance statistic per sampling step
    step_size_trace: np.ndarray  # adapted step size per warmup step
    divergence_count: int  # divergences during the sampling phase
    leapfrog_counts: np.ndarray = field(default=None)  # leapfrogs per iteration


class _Node:
    __slots__ = ("q", "p", "grad", "logp")

    def __init__(self, q, p, grad, logp):
        self.q = q
        self.p = p
        self.grad = grad
        self.logp = logp


class _Tree:
    __slots__ = ("minus", "plus", "prop", "log_sum_w", "p_sum", "divergent", "turning")

    def __init__(self, minus, plus, prop, log_sum_w, p_sum, divergent, turning):
        self.minus = minus
        self.plus = plus
        self.prop = prop
        self.log_sum_w = log_sum_w
        self.p_sum = p_sum
        self.divergent = divergent
        self.turning = turning


class _Stats:
    __slots__ = ("alpha_sum", "n_alpha", "n_leapfrog")

    def __init__(self):
        self.alpha_sum = 0.0
        self.n_alpha = 0
        self.n_leapfrog = 0


def _log_uniform(rng: np.random.Generator) -> float:
    u = rng.random()
    return -math.inf if u <= 0.0 else math.log(u)


def _turning(p_minus, p_plus, p_sum) -> bool:
    """Generalized U-turn: momentum sum no longer aligned with both ends."""
    return bool(p_sum @ p_minus <= 0.0 or p_sum @ p_plus <= 0.0)


def _merged_turning(left: _Tree, right: _Tree) -> bool:
    """U-turn checks for the merge of two adjacent subtrees (left = minus side).

    Besides the joint criterion this includes the two boundary checks
    that share one momentum across the seam; without them the sum-based
    criterion can miss turns that happen at the subtree boundary.
    """
    p_sum = left.p_sum + right.p_sum
    if _turning(left.minus.p, right.plus.p, p_sum):
        return True
    if _turning(left.minus.p, right.minus.p, left.p_sum + right.minus.p):
        return True
    if _turning(left.plus.p, right.plus.p, right.p_sum + left.plus.p):
        return True
    return False


def _leapfrog_node(target: TargetDensity, node: _Node, step: float) -> _Node:
    p_half = node.p + 0.5 * step * node.grad
    q = node.q + step * p_half
    grad = np.asarray(target.grad(q), dtype=float)
    with np.errstate(invalid="ignore"):
        p = p_half + 0.5 * step * grad
    logp = float(target.logpdf(q))
    return _Node(q, p, grad, logp)


def _build_tree(
    target: TargetDensity,
    node: _Node,
    direction: float,
    depth: int,
    eps: float,
    w0: float,
    rng: np.random.Generator,
    stats: _Stats,
) -> _Tree:
    if depth == 0:
        new = _leapfrog_node(target, node, direction * eps)
        stats.n_leapfrog += 1
        if np.all(np.isfinite(new.p)) and math.isfinite(new.logp):
            w = new.logp - 0.5 * float(new.p @ new.p) - w0
        else:
            w = -math.inf
        divergent = not (w > -_DIVERGENCE_ENERGY)
        if math.isfinite(w):
            stats.alpha_sum += 1.0 if w >= 0.0 else math.exp(w)
        stats.n_alpha += 1
        return _Tree(new, new, new, w, new.p, divergent, False)
    inner = _build_tree(target, node, direction, depth - 1, eps, w0, rng, stats)
    if inner.divergent or inner.turning:
        return inner
    start = inner.plus if direction > 0 else inner.minus
    outer = _build_tree(target, start, direction, depth - 1, eps, w0, rng, stats)
    left, right = (inner, outer) if direction > 0 else (outer, inner)
    minus, plus = left.minus, right.plus
    if outer.divergent or outer.turning:
        return _Tree(minus, plus, inner.prop, inner.log_sum_w, inner.p_sum,
                     outer.divergent, outer.turning)
    total = np.logaddexp(inner.log_sum_w, outer.log_sum_w)
    prop = outer.prop if _log_uniform(rng) < outer.log_sum_w - total else inner.prop
    return _Tree(minus, plus, prop, float(total), left.p_sum + right.p_sum,
                 False, _merged_turning(left, right))


def nuts_sample(target: TargetDensity, initial_position, config: SamplerConfig) -> ChainResult:
    """Run one NUTS chain and return draws plus adaptation diagnostics.

    The initial position must have finite log-density and gradient.
    Step size adapts by dual averaging toward ``config.target_accept``
    during warmup and is then frozen at the averaged value.
    """
    rng = np.random.default_rng(config.seed)
    q = np.array(initial_position, dtype=float).reshape(-1)
    if q.shape != (target.dimension,):
        raise DomainError(f"initial position must have {target.dimension} components")
    logp = float(target.logpdf(q))
    grad = np.asarray(target.grad(q), dtype=float)
    if not (math.isfinite(logp) and np.all(np.isfinite(grad))):
        raise DomainError("initial position must have finite logpdf and gradient")
    current = _Node(q, np.zeros_like(q), grad, logp)

    eps = config.initial_step_size
    mu = math.log(10.0 * eps)
    log_eps_bar = 0.0
    h_bar = 0.0

    n_total = config.warmup_steps + config.sample_steps
    dim = target.dimension
    samples = np.empty((config.sample_steps, dim))
    accept_stats = np.empty(config.sample_steps)
    step_size_trace = np.empty(config.warmup_steps)
    leapfrog_counts = np.zeros(n_total, dtype=int)
    divergence_count = 0
    warmup_divergences = 0

    for m in range(1, n_total + 1):
        is_warmup = m <= config.warmup_steps
        p0 = rng.standard_normal(dim)
        w0 = current.logp - 0.5 * float(p0 @ p0)
        root = _Node(current.q, p0, current.grad, current.logp)
        tree = _Tree(root, root, root, 0.0, p0.copy(), False, False)
        stats = _Stats()
        iteration_divergent = False
        for depth in range(config.max_tree_depth):
            direction = 1.0 if rng.random() < 0.5 else -1.0
            start = tree.plus if direction > 0 else tree.minus
            sub = _build_tree(target, start, direction, depth, eps, w0, rng, stats)
            if sub.divergent:
                iteration_divergent = True
                break
            if sub.turning:
                break
            # progressive bias toward the newer half of the trajectory
            if _log_uniform(rng) < sub.log_sum_w - tree.log_sum_w:
                tree.prop = sub.prop
            left, right = (tree, sub) if direction > 0 else (sub, tree)
            merged_turning = _merged_turning(left, right)
            tree = _Tree(left.minus, right.plus, tree.prop,
                         float(np.logaddexp(tree.log_sum_w, sub.log_sum_w)),
                         left.p_sum + right.p_sum, False, merged_turning)
            if merged_turning:
                break
        current = tree.prop
        leapfrog_counts[m - 1] = stats.n_leapfrog
        alpha = stats.alpha_sum / stats.n_alpha if stats.n_alpha else 0.0

        if is_warmup:
            if iteration_divergent:
                warmup_divergences += 1
            frac = 1.0 / (m + _DA_T0)
            h_bar = (1.0 - frac) * h_bar + frac * (config.target_accept - alpha)
            log_eps = mu - math.sqrt(m) / _DA_GAMMA * h_bar
            w = m ** (-_DA_KAPPA)
            log_eps_bar = w * log_eps + (1.0 - w) * log_eps_bar
            eps = math.exp(log_eps)
            step_size_trace[m - 1] = eps
            if m == config.warmup_steps:
                if warmup_divergences == config.warmup_steps:
                    raise AdaptationFailureError(
                        "every warmup iteration diverged; no workable step size found"
                    )
                eps = math.exp(log_eps_bar)
        else:
            if iteration_divergent:
                divergence_count += 1
            idx = m - config.warmup_steps - 1
            samples[idx] = current.q
            accept_stats[idx] = alpha

    return ChainResult(
        samples=samples,
        accept_stats=accept_stats,
        step_size_trace=step_size_trace,
        divergence_count=divergence_count,
        leapfrog_counts=leapfrog_counts,
    )
