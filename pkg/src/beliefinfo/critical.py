"""Information-critical distributions and information-annealed inference.

The minimal-information distribution subject to ``E_r[f_i] = phi_i`` is the
exponential tilt ``r(z) ∝ q0(z) exp(sum_i lambda_i f_i(z))``. The multipliers
are found by minimizing the convex dual ``ln sum_z q0(z) exp(lambda . g(z))``
with centered kernels ``g_i = f_i - phi_i``, whose gradient is the constraint
residual and whose Hessian is the covariance of ``g`` under the tilt.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from . import gaussian as _g
from .errors import (
    DegenerateResult,
    Infeasible,
    InputError,
    NegativeLambda,
    NoConvergence,
    SupportMismatch,
    TargetOutOfRange,
    UndefinedKernel,
)
from .measures import BeliefWeights, Categorical, _probs, _weights, info

__all__ = [
    "ExpectationConstraint",
    "CriticalSolution",
    "min_info_distribution",
    "max_entropy_distribution",
    "constrained_info_distribution",
    "anneal",
    "solve_annealing_lambda",
    "anneal_gaussian",
    "annealing_info_curve",
]

logger = logging.getLogger(__name__)

MAX_ITER = 200
LAMBDA_LIMIT = 1e6


@dataclass(frozen=True, eq=False)
class ExpectationConstraint:
    """Require ``E_r[kernel] == target``."""

    kernel: np.ndarray
    target: float

    def __post_init__(self):
        k = np.array(self.kernel, dtype=float)
        if k.ndim != 1 or k.size == 0:
            raise InputError("constraint kernel must be a nonempty vector")
        if not math.isfinite(self.target):
            raise InputError("constraint target must be finite")
        k.setflags(write=False)
        object.__setattr__(self, "kernel", k)
        object.__setattr__(self, "target", float(self.target))

    @classmethod
    def from_json(cls, obj: dict) -> "ExpectationConstraint":
        try:
            return cls(obj["kernel"], obj["target"])
        except (KeyError, TypeError):
            raise InputError("constraint JSON requires 'kernel' and 'target'") from None


@dataclass(frozen=True, eq=False)
class CriticalSolution:
    distribution: Categorical
    multipliers: np.ndarray
    iterations: int
    residual: float

    def to_json(self) -> dict:
        return {
            "lambda": self.multipliers.tolist(),
            "probs": self.distribution.probs.tolist(),
            "residual": self.residual,
            "iterations": self.iterations,
        }


def _tilt(log_q0: np.ndarray, G: np.ndarray, lam: np.ndarray):
    """Log partition and normalized tilt on the support of ``q0``."""
    s = log_q0 + G @ lam
    logZ = logsumexp(s)
    return logZ, np.exp(s - logZ)


def _solve_dual(log_q0: np.ndarray, G: np.ndarray, tol: float):
    """Damped Newton on the dual. ``G`` is ``(support, m)`` and already centered."""
    m = G.shape[1]
    lam = np.zeros(m)
    logZ, r = _tilt(log_q0, G, lam)
    # A feasible problem has dual optimum -KL(r*|q0) + ln sum(q0) >= min(ln q0);
    # falling below that proves the dual is unbounded.
    floor = float(np.min(log_q0)) - 1.0
    for it in range(MAX_ITER + 1):
        grad = r @ G
        res = float(np.max(np.abs(grad)))
        if res <= tol:
            return lam, r, it, res
        if it == MAX_ITER:
            break
        Gc = G - grad
        H = (Gc * r[:, None]).T @ Gc
        step = -np.linalg.lstsq(H, grad, rcond=None)[0]
        slope = float(grad @ step)
        if not slope < 0:
            step, slope = -grad, -float(grad @ grad)
        t = 1.0
        while True:
            new_lam = lam + t * step
            new_logZ, new_r = _tilt(log_q0, G, new_lam)
            if new_logZ <= logZ + 1e-4 * t * slope:
                break
            t *= 0.5
            if t < 1e-12:
                # No descent available: the residual sits at rounding level
                # or the dual has no minimizer.
                if res <= 10 * tol:
                    return lam, r, it, res
                raise Infeasible(f"line search stalled with residual {res:.3g}; target likely outside the achievable range")
        lam, logZ, r = new_lam, new_logZ, new_r
        if logZ < floor or np.max(np.abs(lam)) > LAMBDA_LIMIT:
            raise Infeasible("multipliers diverged; constraint targets are not achievable")
    raise NoConvergence(f"residual {res:.3g} after {MAX_ITER} Newton iterations")


def min_info_distribution(
    q0, constraints: Sequence[ExpectationConstraint], tol: float = 1e-10
) -> CriticalSolution:
    """Distribution of least information relative to ``q0`` meeting every constraint."""
    w0 = _weights(q0)
    for c in constraints:
        if c.kernel.size != w0.size:
            raise SupportMismatch(f"kernel has size {c.kernel.size}, belief has {w0.size}")
    support = w0 > 0
    if not constraints:
        return CriticalSolution(Categorical(w0 / math.fsum(w0)), np.zeros(0), 0, 0.0)
    G = np.column_stack([c.kernel[support] - c.target for c in constraints])
    lam, r, iterations, res = _solve_dual(np.log(w0[support]), G, tol)
    p = np.zeros(w0.size)
    p[support] = r
    return CriticalSolution(Categorical.normalized(p), lam, iterations, res)


def max_entropy_distribution(
    support_size: int, constraints: Sequence[ExpectationConstraint], tol: float = 1e-10
) -> CriticalSolution:
    """Maximum-entropy distribution: the minimal-information case with unit reference weights."""
    return min_info_distribution(BeliefWeights.unit(support_size), constraints, tol)


def constrained_info_distribution(
    q0, states: Sequence, targets: Sequence[float], tol: float = 1e-10
) -> CriticalSolution:
    """Least-information belief with ``info(r, states[i], q0) == targets[i]`` for each state.

    The solution has the form ``r ∝ q0 * prod_i (states[i] / q0) ** lambda_i``.
    """
    if len(states) != len(targets):
        raise InputError("need exactly one target per state")
    w0 = _weights(q0)
    support = w0 > 0
    constraints = []
    for k, (state, target) in enumerate(zip(states, targets)):
        w = _weights(state)
        if w.size != w0.size:
            raise SupportMismatch(f"state {k} has size {w.size}, reference has {w0.size}")
        if np.any(w[support] == 0):
            raise UndefinedKernel(f"state {k} vanishes where the reference has mass")
        kernel = np.zeros(w0.size)
        kernel[support] = np.log(w[support]) - np.log(w0[support])
        constraints.append(ExpectationConstraint(kernel, target))
    return min_info_distribution(w0, constraints, tol)


def anneal(prior, likelihood, lam: float) -> Categorical:
    """Tempered posterior ``∝ prior * likelihood ** lam``."""
    p, L = _probs(prior), _weights(likelihood)
    if p.size != L.size:
        raise SupportMismatch(f"prior has size {p.size}, likelihood has {L.size}")
    if not math.isfinite(lam):
        raise InputError("lambda must be finite")
    if lam == 0:
        return prior if isinstance(prior, Categorical) else Categorical(p)
    live = p > 0
    if lam < 0 and np.any(L[live] == 0):
        raise DegenerateResult("negative lambda with a vanishing likelihood on the prior's support")
    with np.errstate(divide="ignore"):
        s = np.where(live, np.log(p) + lam * np.log(L), -np.inf)
    if not np.any(np.isfinite(s)):
        raise DegenerateResult("tempered likelihood annihilates all prior mass")
    s -= np.max(s)
    w = np.exp(s)
    return Categorical(w / math.fsum(w))


def _annealed_info(prior, likelihood, posterior, lam):
    return info(anneal(prior, likelihood, lam), posterior, prior)


def solve_annealing_lambda(
    prior, likelihood, target_info: float, tol: float = 1e-10
) -> tuple[float, Categorical]:
    """Find ``lam >= 0`` with ``info(anneal(lam), posterior, prior) == target_info``.

    ``info(anneal(lam), posterior, prior)`` is nondecreasing in ``lam`` (its
    derivative is the variance of the log likelihood under the tempered
    belief), running from ``-kl(prior, posterior)`` at ``lam = 0`` towards the
    largest log ratio ``ln(posterior / prior)`` as ``lam`` grows.
    """
    prior = prior if isinstance(prior, Categorical) else Categorical(prior)
    posterior = anneal(prior, likelihood, 1.0)
    L = _weights(likelihood)
    if np.any(L[prior.probs > 0] == 0):
        raise DegenerateResult("likelihood must be positive on the prior's support")

    def f(lam):
        return _annealed_info(prior, likelihood, posterior, lam) - target_info

    lo = f(0.0)
    if abs(lo) <= tol:
        return 0.0, prior
    if lo > 0:
        raise TargetOutOfRange(f"target {target_info} is below the lambda=0 value {target_info + lo}")
    one = f(1.0)
    if abs(one) <= tol:
        return 1.0, posterior
    if one > 0:
        hi = 1.0
    else:
        hi = 2.0
        while f(hi) < 0:
            hi *= 2.0
            if hi > LAMBDA_LIMIT:
                raise TargetOutOfRange(f"target {target_info} exceeds the achievable information")
    try:
        lam = brentq(f, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    except RuntimeError as exc:
        raise NoConvergence(str(exc)) from None
    if abs(f(lam)) > tol:
        raise NoConvergence(f"root finder stopped at residual {abs(f(lam)):.3g}")
    return lam, anneal(prior, likelihood, lam)


def anneal_gaussian(
    prior: _g.Gaussian, model: _g.LocationModel, n: float, sample_mean, lam: float
) -> _g.Gaussian:
    """Conjugate posterior under the tempered likelihood: effective count ``lam * n``."""
    if lam < 0:
        raise NegativeLambda(f"lambda must be >= 0, got {lam}")
    return _g.posterior(prior, model, lam * n, sample_mean)


def annealing_info_curve(prior, likelihood, lams) -> np.ndarray:
    """``info(anneal(lam), posterior, prior)`` over a grid of ``lams`` (nats)."""
    prior = prior if isinstance(prior, Categorical) else Categorical(prior)
    posterior = anneal(prior, likelihood, 1.0)
    return np.array([float(_annealed_info(prior, likelihood, posterior, x)) for x in lams])

