"""Information functionals over finite supports.

Everything here is built on one primitive, :func:`info`, which measures the
change of belief from ``q0`` to ``q1`` as an expectation in a chosen view::

    info(view, q1, q0) = sum_i view[i] * ln(q1[i] / q0[i])

Entropy, cross entropy, realization information, KL divergence and mutual
information are all special cases obtained by fixing one or more arguments.
Values are carried in nats; :class:`InfoValue` converts to bits on request.

Zero-probability conventions: terms where ``view[i] == 0`` contribute nothing.
Where the view has mass, ``q1 == 0`` yields ``-inf`` and ``q0 == 0`` yields
``+inf``; both at once is :class:`~beliefinfo.errors.UndefinedRatio`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import (
    ConflictingDivergence,
    InputError,
    InvalidOrder,
    NonFiniteInfo,
    SupportMismatch,
    UndefinedRatio,
    ZeroDenominator,
)

__all__ = [
    "InfoValue",
    "Categorical",
    "BeliefWeights",
    "JointCategorical",
    "info",
    "info_density",
    "pseudometric_lp",
    "info_variance",
    "entropy",
    "cross_entropy",
    "realization_info",
    "kl",
    "lindley",
    "mutual_information",
    "perturbation_derivative",
]

LN2 = math.log(2.0)
NORM_TOL = 1e-12


class InfoValue(float):
    """An amount of information in nats (possibly ``+inf`` or ``-inf``).

    Behaves as a plain float in arithmetic; use :attr:`bits` for display.
    """

    @property
    def nats(self) -> float:
        return float(self)

    @property
    def bits(self) -> float:
        return float(self) / LN2

    def to(self, units: str) -> float:
        if units == "nats":
            return self.nats
        if units == "bits":
            return self.bits
        raise InputError(f"unknown units {units!r}; expected 'bits' or 'nats'")

    def __repr__(self) -> str:
        return f"InfoValue({float(self)!r} nats)"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _vector(values: Any, name: str) -> np.ndarray:
    a = np.array(values, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise InputError(f"{name} must be a nonempty 1-D vector")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} must be finite")
    return a


@dataclass(frozen=True, eq=False)
class Categorical:
    """A normalized probability vector over ``support_size`` outcomes.

    Entries within ``[-1e-12, 0)`` are clamped to zero; the total must be
    within 1e-12 of one.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = _vector(self.probs, "probs")
        if np.any(p < -NORM_TOL):
            raise InputError("probabilities must be nonnegative")
        p[p < 0] = 0.0
        if abs(math.fsum(p) - 1.0) > NORM_TOL:
            raise InputError(f"probabilities sum to {math.fsum(p)!r}, not 1")
        object.__setattr__(self, "probs", _readonly(p))

    @property
    def support_size(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, n: int) -> "Categorical":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def delta(cls, n: int, outcome: int) -> "Categorical":
        p = np.zeros(n)
        p[outcome] = 1.0
        return cls(p)

    @classmethod
    def normalized(cls, weights: Any) -> "Categorical":
        """Normalize an arbitrary nonnegative weight vector."""
        w = BeliefWeights(weights).weights
        return cls(w / math.fsum(w))

    def to_json(self) -> dict:
        return {"probs": self.probs.tolist()}

    @classmethod
    def from_json(cls, obj: Any) -> "Categorical":
        if isinstance(obj, dict):
            if "probs" not in obj:
                raise InputError("Categorical JSON requires a 'probs' field")
            obj = obj["probs"]
        return cls(obj)


@dataclass(frozen=True, eq=False)
class BeliefWeights:
    """Nonnegative weights, not necessarily normalized (improper beliefs allowed)."""

    weights: np.ndarray

    def __post_init__(self):
        w = _vector(self.weights, "weights")
        if np.any(w < 0):
            raise InputError("weights must be nonnegative")
        if not np.any(w > 0):
            raise InputError("at least one weight must be positive")
        object.__setattr__(self, "weights", _readonly(w))

    @property
    def support_size(self) -> int:
        return self.weights.size

    @classmethod
    def unit(cls, n: int) -> "BeliefWeights":
        """The constant unit density, used to recover entropies."""
        return cls(np.ones(n))

    def normalized(self) -> Categorical:
        return Categorical(self.weights / math.fsum(self.weights))

    def to_json(self) -> dict:
        return {"weights": self.weights.tolist()}

    @classmethod
    def from_json(cls, obj: Any) -> "BeliefWeights":
        if isinstance(obj, dict):
            for key in ("weights", "probs"):
                if key in obj:
                    return cls(obj[key])
            raise InputError("BeliefWeights JSON requires a 'weights' field")
        return cls(obj)


@dataclass(frozen=True, eq=False)
class JointCategorical:
    """Normalized joint distribution over a ``rows x cols`` grid."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 2 or p.size == 0:
            raise InputError("joint probs must be a nonempty 2-D matrix")
        if not np.all(np.isfinite(p)) or np.any(p < -NORM_TOL):
            raise InputError("joint probabilities must be finite and nonnegative")
        p[p < 0] = 0.0
        if abs(math.fsum(p.ravel()) - 1.0) > NORM_TOL:
            raise InputError("joint probabilities must sum to 1")
        object.__setattr__(self, "probs", _readonly(p))

    @property
    def rows(self) -> int:
        return self.probs.shape[0]

    @property
    def cols(self) -> int:
        return self.probs.shape[1]

    def row_marginal(self) -> Categorical:
        return Categorical.normalized(self.probs.sum(axis=1))

    def col_marginal(self) -> Categorical:
        return Categorical.normalized(self.probs.sum(axis=0))

    def flat(self) -> Categorical:
        return Categorical(self.probs.ravel())

    def to_json(self) -> dict:
        return {"probs": self.probs.tolist()}

    @classmethod
    def from_json(cls, obj: Any) -> "JointCategorical":
        if isinstance(obj, dict):
            obj = obj["probs"]
        return cls(obj)


def _probs(x) -> np.ndarray:
    if isinstance(x, Categorical):
        return x.probs
    if isinstance(x, JointCategorical):
        return x.probs.ravel()
    return Categorical(x).probs


def _weights(x) -> np.ndarray:
    if isinstance(x, BeliefWeights):
        return x.weights
    if isinstance(x, Categorical):
        return x.probs
    if isinstance(x, JointCategorical):
        return x.probs.ravel()
    return BeliefWeights(x).weights


def _same_size(*arrays: np.ndarray) -> None:
    sizes = {a.size for a in arrays}
    if len(sizes) != 1:
        raise SupportMismatch(f"support sizes differ: {sorted(sizes)}")


def _log_ratio(q1: np.ndarray, q0: np.ndarray) -> np.ndarray:
    # ln q1 - ln q0 (rather than ln(q1/q0)) keeps swapping the arguments an exact negation.
    with np.errstate(divide="ignore"):
        return np.log(q1) - np.log(q0)


def _densities_on_view(v, w1, w0) -> np.ndarray:
    """Log ratios at view-supported indices, with the zero-support checks applied."""
    mask = v > 0
    a, b = w1[mask], w0[mask]
    both = (a == 0) & (b == 0)
    if np.any(both):
        i = int(np.flatnonzero(mask)[np.argmax(both)])
        raise UndefinedRatio(f"view has mass at outcome {i} where both beliefs vanish")
    return _log_ratio(a, b)


def info(view, q1, q0) -> InfoValue:
    """Information gained moving belief from ``q0`` to ``q1``, in the view ``view``."""
    v, w1, w0 = _probs(view), _weights(q1), _weights(q0)
    _same_size(v, w1, w0)
    d = _densities_on_view(v, w1, w0)
    pos, neg = np.isposinf(d), np.isneginf(d)
    if pos.any() and neg.any():
        raise ConflictingDivergence("both +inf and -inf contributions on the view's support")
    if pos.any():
        return InfoValue(math.inf)
    if neg.any():
        return InfoValue(-math.inf)
    return InfoValue(math.fsum(v[v > 0] * d))


def info_density(q1, q0, outcome: int) -> InfoValue:
    """Pointwise log ratio ``ln(q1[outcome] / q0[outcome])``."""
    w1, w0 = _weights(q1), _weights(q0)
    _same_size(w1, w0)
    if not 0 <= outcome < w1.size:
        raise InputError(f"outcome {outcome} out of range for support of size {w1.size}")
    a, b = w1[outcome], w0[outcome]
    if a == 0 and b == 0:
        raise UndefinedRatio(f"both beliefs vanish at outcome {outcome}")
    return InfoValue(_log_ratio(np.array([a]), np.array([b]))[0])


def pseudometric_lp(view, q1, q0, p: float = 1.0) -> InfoValue:
    """Weighted L^p norm of the information density; symmetric in ``q1, q0``."""
    if not p >= 1:
        raise InvalidOrder(f"order p must be >= 1, got {p}")
    v, w1, w0 = _probs(view), _weights(q1), _weights(q0)
    _same_size(v, w1, w0)
    d = np.abs(_densities_on_view(v, w1, w0))
    if np.isinf(d).any():
        return InfoValue(math.inf)
    total = math.fsum(v[v > 0] * d**p)
    return InfoValue(total ** (1.0 / p))


def info_variance(view, q1, q0) -> InfoValue:
    """Variance of the information density under the view (nats squared)."""
    phi = info(view, q1, q0)
    if not math.isfinite(phi):
        raise NonFiniteInfo("information variance requires finite information")
    v = _probs(view)
    d = _densities_on_view(v, _weights(q1), _weights(q0))
    return InfoValue(math.fsum(v[v > 0] * (d - phi) ** 2))


def entropy(q) -> InfoValue:
    p = _probs(q)
    return info(p, np.ones(p.size), p)


def cross_entropy(view, q) -> InfoValue:
    v = _probs(view)
    return info(v, np.ones(v.size), q)


def realization_info(q, outcome: int) -> InfoValue:
    """Information gained when ``outcome`` is realized under belief ``q``: ``ln(1/q[outcome])``."""
    w = _weights(q)
    if not 0 <= outcome < w.size:
        raise InputError(f"outcome {outcome} out of range for support of size {w.size}")
    return info(Categorical.delta(w.size, outcome), np.ones(w.size), w)


def kl(q1, q0) -> InfoValue:
    """Kullback-Leibler divergence, i.e. ``info(q1, q1, q0)``."""
    p = _probs(q1)
    return info(p, p, q0)


def lindley(q1, q0) -> InfoValue:
    """Entropy difference ``H(q1) - H(q0)`` (a change of uncertainty, sign unrestricted)."""
    return InfoValue(entropy(q1) - entropy(q0))


def mutual_information(joint) -> InfoValue:
    if not isinstance(joint, JointCategorical):
        joint = JointCategorical(joint)
    P = joint.probs
    product = np.outer(P.sum(axis=1), P.sum(axis=0))
    return info(P.ravel(), P.ravel(), product.ravel())


def perturbation_derivative(view, q1, q0, eta: Sequence[float]) -> float:
    """Directional derivative of ``info(view, q1 + t*eta, q0)`` at ``t = 0``.

    ``eta`` must sum to zero so the perturbed belief stays normalized. ``q0``
    does not enter the derivative but must leave the information finite.
    """
    v, w1 = _probs(view), _probs(q1)
    e = _vector(eta, "eta")
    _same_size(v, w1, e, _weights(q0))
    if abs(math.fsum(e)) > 1e-12:
        raise InputError("perturbation must sum to zero")
    if not math.isfinite(info(v, w1, q0)):
        raise NonFiniteInfo("perturbation response requires finite information")
    if np.any((w1 == 0) & (e != 0)):
        raise ZeroDenominator("perturbation touches an outcome with zero belief")
    live = (v > 0) & (e != 0)
    return math.fsum(v[live] * e[live] / w1[live])
