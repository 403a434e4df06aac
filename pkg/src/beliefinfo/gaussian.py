"""Multivariate Gaussian beliefs and closed-form information for the location model.

The model is ``y = theta + x`` with ``x ~ N(0, Sigma)``; ``n`` observations
enter only through their sample mean, ``ybar | theta ~ N(theta, Sigma / n)``.
Covariances are kept alongside their lower Cholesky factor, and every
log-determinant, trace and quadratic form is computed from the factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .errors import DimensionMismatch, InputError, NotSPD
from .measures import InfoValue

__all__ = [
    "Gaussian",
    "LocationModel",
    "posterior",
    "predictive",
    "mutual_info_gaussian",
    "info_gaussian_view",
    "kl_gaussian",
    "cross_term",
    "realization_limit_info",
]

SYM_TOL = 1e-10
LOG_2PI = math.log(2.0 * math.pi)


def _cholesky(cov: np.ndarray, name: str) -> np.ndarray:
    scale = max(np.max(np.abs(cov)), np.finfo(float).tiny)
    if np.max(np.abs(cov - cov.T)) > SYM_TOL * scale:
        raise NotSPD(f"{name} is not symmetric")
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise NotSPD(f"{name} is not positive definite") from None


def _square(values: Any, name: str) -> np.ndarray:
    a = np.array(values, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
        raise InputError(f"{name} must be a square matrix")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} must be finite")
    return a


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Gaussian:
    """Multivariate normal belief ``N(mean, cov)``. Scalars are promoted to 1-D."""

    mean: np.ndarray
    cov: np.ndarray
    chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        cov = _square(self.cov, "cov")
        mean = np.atleast_1d(np.array(self.mean, dtype=float))
        if mean.ndim != 1 or not np.all(np.isfinite(mean)):
            raise InputError("mean must be a finite vector")
        if mean.size != cov.shape[0]:
            raise DimensionMismatch(f"mean has dim {mean.size} but cov is {cov.shape}")
        object.__setattr__(self, "mean", _freeze(mean))
        object.__setattr__(self, "cov", _freeze(cov))
        object.__setattr__(self, "chol", _freeze(_cholesky(cov, "cov")))

    @property
    def dim(self) -> int:
        return self.mean.size

    @classmethod
    def standard(cls, dim: int) -> "Gaussian":
        return cls(np.zeros(dim), np.eye(dim))

    def logdet(self) -> float:
        return 2.0 * math.fsum(np.log(np.diag(self.chol)))

    def solve(self, b: np.ndarray) -> np.ndarray:
        """``cov^{-1} b`` via the Cholesky factor."""
        return cho_solve((self.chol, True), b, check_finite=False)

    def precision(self) -> np.ndarray:
        return self.solve(np.eye(self.dim))

    def mahalanobis2(self, x: np.ndarray) -> float:
        z = solve_triangular(self.chol, np.asarray(x, dtype=float) - self.mean, lower=True, check_finite=False)
        return float(z @ z)

    def logpdf(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != self.mean.shape:
            raise DimensionMismatch(f"point has shape {x.shape}, expected {self.mean.shape}")
        return -0.5 * (self.dim * LOG_2PI + self.logdet() + self.mahalanobis2(x))

    def to_json(self) -> dict:
        return {"mean": self.mean.tolist(), "cov": self.cov.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Gaussian":
        try:
            return cls(obj["mean"], obj["cov"])
        except (KeyError, TypeError):
            raise InputError("Gaussian JSON requires 'mean' and 'cov'") from None


@dataclass(frozen=True, eq=False)
class LocationModel:
    """Additive Gaussian noise ``y = theta + x``, ``x ~ N(0, noise_cov)``."""

    noise_cov: np.ndarray
    chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        cov = _square(self.noise_cov, "noise_cov")
        object.__setattr__(self, "noise_cov", _freeze(cov))
        object.__setattr__(self, "chol", _freeze(_cholesky(cov, "noise_cov")))

    @property
    def dim(self) -> int:
        return self.noise_cov.shape[0]

    @classmethod
    def isotropic(cls, dim: int, sigma: float) -> "LocationModel":
        return cls(sigma**2 * np.eye(dim))

    def solve(self, b: np.ndarray) -> np.ndarray:
        return cho_solve((self.chol, True), b, check_finite=False)


def _check_dims(*dims: int) -> None:
    if len(set(dims)) != 1:
        raise DimensionMismatch(f"dimensions disagree: {dims}")


def _check_count(n: float) -> None:
    if not (n >= 0 and math.isfinite(n)):
        raise InputError(f"observation count must be a finite number >= 0, got {n}")


def posterior(prior: Gaussian, model: LocationModel, n: float, sample_mean) -> Gaussian:
    """Conjugate update of ``prior`` after ``n`` observations with mean ``sample_mean``.

    Precision adds, ``B^{-1} = A^{-1} + n Sigma^{-1}``, and the mean is
    ``B (A^{-1} mu_A + n Sigma^{-1} ybar)``. ``n`` may be fractional (tempered
    likelihoods); ``n = 0`` returns the prior unchanged.
    """
    ybar = np.atleast_1d(np.asarray(sample_mean, dtype=float))
    _check_dims(prior.dim, model.dim, ybar.size)
    _check_count(n)
    if n == 0:
        return prior
    eye = np.eye(prior.dim)
    post_prec = prior.solve(eye) + n * model.solve(eye)
    post_prec = 0.5 * (post_prec + post_prec.T)
    L = _cholesky(post_prec, "posterior precision")
    cov = cho_solve((L, True), eye, check_finite=False)
    cov = 0.5 * (cov + cov.T)
    mean = cho_solve((L, True), prior.solve(prior.mean) + n * model.solve(ybar), check_finite=False)
    return Gaussian(mean, cov)


def predictive(prior: Gaussian, model: LocationModel, n: float) -> Gaussian:
    """Predictive belief in the mean of ``n`` fresh observations: ``N(mu_A, A + Sigma/n)``."""
    _check_dims(prior.dim, model.dim)
    if not n > 0:
        raise InputError(f"predictive requires n > 0, got {n}")
    return Gaussian(prior.mean, prior.cov + model.noise_cov / n)


def mutual_info_gaussian(prior: Gaussian, model: LocationModel, n: float) -> InfoValue:
    """Expected information about theta from ``n`` observations: ``0.5 ln det(n Sigma^{-1} A + I)``."""
    _check_dims(prior.dim, model.dim)
    _check_count(n)
    if n == 0:
        return InfoValue(0.0)
    # n Sigma^{-1} A is similar to the SPD matrix n L^{-1} A L^{-T} (Sigma = L L^T).
    M = solve_triangular(model.chol, prior.cov, lower=True, check_finite=False)
    M = solve_triangular(model.chol, M.T, lower=True, check_finite=False)
    M = n * 0.5 * (M + M.T) + np.eye(prior.dim)
    L = _cholesky(M, "n Sigma^-1 A + I")
    return InfoValue(math.fsum(np.log(np.diag(L))))


def _trace_inv_times(a: Gaussian, c: Gaussian) -> float:
    """``tr(a.cov^{-1} c.cov)`` as a squared Frobenius norm of ``L_a^{-1} L_c``."""
    X = solve_triangular(a.chol, c.chol, lower=True, check_finite=False)
    return float(np.sum(X * X))


def cross_term(view: Gaussian, q: Gaussian) -> float:
    """Expected log density ``E_view[ln q(z)]`` in nats."""
    _check_dims(view.dim, q.dim)
    return -0.5 * (
        q.dim * LOG_2PI + q.logdet() + _trace_inv_times(q, view) + q.mahalanobis2(view.mean)
    )


def info_gaussian_view(view: Gaussian, q1: Gaussian, q0: Gaussian) -> InfoValue:
    """Information from ``q0`` to ``q1`` in the view of ``view``, all Gaussian.

    With ``q1 = N(mu, B)``, ``q0 = N(mu_A, A)`` and ``view = N(nu, C)``::

        0.5 * (ln det(A B^{-1}) + tr((A^{-1} - B^{-1}) C)
               + (nu - mu_A)^T A^{-1} (nu - mu_A) - (nu - mu)^T B^{-1} (nu - mu))
    """
    _check_dims(view.dim, q1.dim, q0.dim)
    if q1 is q0:
        return InfoValue(0.0)
    return InfoValue(
        0.5
        * (
            (q0.logdet() - q1.logdet())
            + (_trace_inv_times(q0, view) - _trace_inv_times(q1, view))
            + (q0.mahalanobis2(view.mean) - q1.mahalanobis2(view.mean))
        )
    )


def kl_gaussian(q1: Gaussian, q0: Gaussian) -> InfoValue:
    return info_gaussian_view(q1, q1, q0)


def realization_limit_info(theta, q1: Gaussian, q0: Gaussian) -> InfoValue:
    """Pointwise information density ``ln(q1(theta) / q0(theta))``."""
    _check_dims(q1.dim, q0.dim)
    return InfoValue(q1.logpdf(theta) - q0.logpdf(theta))
