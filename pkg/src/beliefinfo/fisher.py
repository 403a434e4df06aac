"""Generalized Fisher score and matrix.

For a parametric family ``P(X | theta)`` the score is the gradient, and the
matrix the Hessian, of ``info(view, P(X | theta), q0)`` with respect to
``theta``. ``q0`` enters only through an additive theta-independent term, so
neither quantity depends on it.

Sign convention: the returned matrix is the Hessian itself. For a Gaussian
location family evaluated at the view's mean it is ``-Sigma^{-1}``, the
negative of the classical Fisher information.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import gaussian as _g
from . import measures as _m
from .errors import EvaluationFailure, InputError, NonFiniteInfo

__all__ = [
    "ParametricFamily",
    "family_from_json",
    "info_at",
    "fisher_score",
    "fisher_matrix",
]

logger = logging.getLogger(__name__)

Belief = Union[_m.Categorical, _g.Gaussian]

FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)
# Second differences balance truncation against rounding at eps^(1/4).
HESS_STEP = np.finfo(float).eps ** 0.25


@dataclass(frozen=True)
class ParametricFamily:
    """``evaluator(theta)`` returns the belief over X for parameter ``theta``.

    ``location_cov`` is set for Gaussian location families and enables the
    analytic score and matrix.
    """

    param_dim: int
    evaluator: Callable[[np.ndarray], Belief]
    location_cov: Optional[np.ndarray] = None

    def __call__(self, theta) -> Belief:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if theta.size != self.param_dim:
            raise InputError(f"theta has {theta.size} components, family expects {self.param_dim}")
        try:
            return self.evaluator(theta)
        except Exception as exc:
            raise EvaluationFailure(f"family evaluation failed at theta={theta.tolist()}: {exc}") from exc

    @classmethod
    def gaussian_location(cls, cov) -> "ParametricFamily":
        model = _g.LocationModel(cov)
        cov = model.noise_cov
        return cls(cov.shape[0], lambda theta: _g.Gaussian(theta, cov), location_cov=cov)

    @classmethod
    def categorical_softmax(cls, kernel) -> "ParametricFamily":
        """``P(x | theta) ∝ exp(theta . kernel[:, x])`` for a fixed ``(param_dim, k)`` kernel."""
        K = np.atleast_2d(np.asarray(kernel, dtype=float))

        def evaluate(theta):
            with np.errstate(over="ignore", invalid="ignore"):
                s = theta @ K
                w = np.exp(s - s.max())
            return _m.Categorical(w / math.fsum(w))

        return cls(K.shape[0], evaluate)


def family_from_json(obj: dict) -> ParametricFamily:
    """Build a family from ``{"family": "gaussian-location", "cov": ...}`` or
    ``{"family": "categorical-softmax", "kernel": ...}``."""
    kind = obj.get("family")
    if kind == "gaussian-location":
        return ParametricFamily.gaussian_location(obj["cov"])
    if kind == "categorical-softmax":
        return ParametricFamily.categorical_softmax(obj["kernel"])
    raise InputError(f"unknown family {kind!r}")


def info_at(view, family: ParametricFamily, q0, theta) -> float:
    """``info(view, family(theta), q0)`` in nats. ``q0=None`` means the flat unit density."""
    belief = family(theta)
    if isinstance(belief, _g.Gaussian):
        if not isinstance(view, _g.Gaussian):
            raise InputError("a Gaussian family needs a Gaussian view")
        value = _g.cross_term(view, belief)
        if q0 is not None:
            value -= _g.cross_term(view, q0)
    else:
        k = belief.support_size
        value = _m.info(view, belief, np.ones(k) if q0 is None else q0)
    if not math.isfinite(value):
        raise NonFiniteInfo(f"information is not finite at theta={np.ravel(theta).tolist()}")
    return float(value)


def _steps(theta: np.ndarray, base: float = FD_STEP) -> np.ndarray:
    return base * np.maximum(1.0, np.abs(theta))


def _fd_gradient(f, theta: np.ndarray, h: np.ndarray) -> np.ndarray:
    g = np.empty(theta.size)
    for i in range(theta.size):
        e = np.zeros(theta.size)
        e[i] = h[i]
        g[i] = (f(theta + e) - f(theta - e)) / (2.0 * h[i])
    return g


def _fd_hessian(f, theta: np.ndarray, h: np.ndarray) -> np.ndarray:
    # Central difference of the central-difference gradient, symmetrized.
    d = theta.size
    H = np.empty((d, d))
    for j in range(d):
        e = np.zeros(d)
        e[j] = h[j]
        H[:, j] = (_fd_gradient(f, theta + e, h) - _fd_gradient(f, theta - e, h)) / (2.0 * h[j])
    return 0.5 * (H + H.T)


def _analytic(view, family) -> bool:
    return family.location_cov is not None and isinstance(view, _g.Gaussian)


def fisher_score(view, family: ParametricFamily, q0, theta, method: str = "auto") -> np.ndarray:
    """Gradient of ``info(view, family(theta), q0)`` with respect to ``theta`` (nats per unit)."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if method not in ("auto", "analytic", "fd"):
        raise InputError(f"unknown method {method!r}")
    if method == "analytic" or (method == "auto" and _analytic(view, family)):
        if not _analytic(view, family):
            raise InputError("analytic score needs a Gaussian location family and Gaussian view")
        family(theta)
        # d/dtheta E_view[ln N(x | theta, Sigma)] = Sigma^{-1} (nu - theta)
        return _g.LocationModel(family.location_cov).solve(view.mean - theta)
    return _fd_gradient(lambda t: info_at(view, family, q0, t), theta, _steps(theta))


def fisher_matrix(view, family: ParametricFamily, q0, theta, method: str = "auto") -> np.ndarray:
    """Hessian of ``info(view, family(theta), q0)`` with respect to ``theta``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if method not in ("auto", "analytic", "fd"):
        raise InputError(f"unknown method {method!r}")
    if method == "analytic" or (method == "auto" and _analytic(view, family)):
        if not _analytic(view, family):
            raise InputError("analytic matrix needs a Gaussian location family and Gaussian view")
        family(theta)
        return -_g.LocationModel(family.location_cov).solve(np.eye(family.param_dim))

    def f(t):
        return info_at(view, family, q0, t)

    h = _steps(theta, HESS_STEP)
    H = _fd_hessian(f, theta, h)
    # Richardson check: the doubled step should agree to leading order.
    H2 = _fd_hessian(f, theta, 2.0 * h)
    scale = max(1.0, float(np.max(np.abs(H))))
    if np.max(np.abs(H - H2)) > 1e-3 * scale:
        logger.warning("finite-difference Hessian unstable under step doubling (max diff %.3g)",
                       float(np.max(np.abs(H - H2))))
    return H
