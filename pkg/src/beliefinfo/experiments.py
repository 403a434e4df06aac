"""Monte-Carlo study of first-inference information in the Gaussian location model.

Each experiment draws a true ``theta`` from the prior, observes batches of
``y = theta + x`` and updates a conjugate posterior after each batch. The
quantity of interest is the information gained by the *first* update, from
the prior to the first posterior, measured in the view of every later
posterior and finally in the realization limit (the true ``theta`` itself).

In the ``inconsistent`` scenario the first batch is generated around an
independent second draw ``alt_theta`` while later batches use ``theta``.

Randomness is keyed by ``(master_seed, experiment_index, stage)`` through
:class:`numpy.random.SeedSequence`, so any experiment can be replayed alone
and ensembles are identical whatever the worker count.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyInput, InputError
from .gaussian import (
    Gaussian,
    LocationModel,
    kl_gaussian,
    info_gaussian_view,
    mutual_info_gaussian,
    posterior,
    predictive,
    realization_limit_info,
)
from .measures import LN2

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "EnsembleTable",
    "StageSummary",
    "EnsembleSummary",
    "BoundsReport",
    "run_experiment",
    "ensemble_table",
    "summarize",
    "run_ensemble",
    "laplace_fit",
    "inference_bounds",
    "bounds_audit",
    "write_histogram_csv",
    "write_records_csv",
    "write_summary_json",
]

logger = logging.getLogger(__name__)

SCENARIOS = ("genuine", "inconsistent")
_THETA, _ALT, _BATCH = 0, 1, 2
BOUND_SLACK = 1e-9


def fmt(x: float) -> str:
    """17 significant digits: lossless for doubles."""
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _convert(nats: float, units: str) -> float:
    if units == "nats":
        return nats
    if units == "bits":
        return nats / LN2
    raise InputError(f"unknown units {units!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    dim: int = 2
    prior: Optional[Gaussian] = None
    noise_sigma: float = 0.5
    batch_sizes: tuple = (10, 10, 20, 40)
    num_experiments: int = 100_000
    master_seed: Optional[int] = None
    scenario: str = "genuine"
    histogram_bins: tuple = (-20.0, 20.0, 400)

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dim must be >= 1")
        prior = self.prior if self.prior is not None else Gaussian.standard(self.dim)
        if prior.dim != self.dim:
            raise InputError(f"prior has dim {prior.dim}, config dim is {self.dim}")
        object.__setattr__(self, "prior", prior)
        sizes = tuple(int(b) for b in self.batch_sizes)
        if not sizes or min(sizes) < 1:
            raise InputError("batch_sizes must be a nonempty list of positive integers")
        object.__setattr__(self, "batch_sizes", sizes)
        if not self.noise_sigma > 0:
            raise InputError("noise_sigma must be positive")
        if self.num_experiments < 1:
            raise InputError("num_experiments must be >= 1")
        if self.scenario not in SCENARIOS:
            raise InputError(f"scenario must be one of {SCENARIOS}")
        lo, hi, count = self.histogram_bins
        if not lo < hi or int(count) < 1:
            raise InputError("histogram_bins must be (lo, hi, count) with lo < hi and count >= 1")
        object.__setattr__(self, "histogram_bins", (float(lo), float(hi), int(count)))
        if self.master_seed is not None and not 0 <= self.master_seed < 2**64:
            raise InputError("master_seed must be a 64-bit unsigned integer")

    @property
    def model(self) -> LocationModel:
        return LocationModel.isotropic(self.dim, self.noise_sigma)

    @property
    def num_stages(self) -> int:
        return len(self.batch_sizes)

    def stage_names(self) -> list:
        return [f"view{k + 1}" for k in range(self.num_stages)] + ["realization"]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "prior": self.prior.to_json(),
            "noise_sigma": self.noise_sigma,
            "batch_sizes": list(self.batch_sizes),
            "num_experiments": self.num_experiments,
            "master_seed": self.master_seed,
            "scenario": self.scenario,
            "histogram_bins": list(self.histogram_bins),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(obj) - known
        if unknown:
            raise InputError(f"unknown config fields: {sorted(unknown)}")
        kwargs = dict(obj)
        if kwargs.get("prior") is not None:
            kwargs["prior"] = Gaussian.from_json(kwargs["prior"])
        for key in ("batch_sizes", "histogram_bins"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise InputError(str(exc)) from None


def _rng(config: ExperimentConfig, index: int, stage: int) -> np.random.Generator:
    if config.master_seed is None:
        raise InputError("master_seed must be set before running experiments")
    seq = np.random.SeedSequence(config.master_seed, spawn_key=(index, stage))
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True, eq=False)
class ExperimentRecord:
    experiment_id: int
    true_theta: np.ndarray
    alt_theta: Optional[np.ndarray]
    batch_sizes: tuple
    batch_means: list
    stage_posteriors: list
    first_inference_info_per_view: list  # nats
    realization_limit_info: float  # nats
    prior: Gaussian = field(repr=False)

    @property
    def first_posterior(self) -> Gaussian:
        return self.stage_posteriors[0]


def run_experiment(config: ExperimentConfig, experiment_index: int) -> ExperimentRecord:
    prior, model = config.prior, config.model
    theta = prior.mean + prior.chol @ _rng(config, experiment_index, _THETA).standard_normal(config.dim)
    alt = None
    if config.scenario == "inconsistent":
        alt = prior.mean + prior.chol @ _rng(config, experiment_index, _ALT).standard_normal(config.dim)

    belief, posts, means = prior, [], []
    for k, n in enumerate(config.batch_sizes):
        source = alt if (alt is not None and k == 0) else theta
        z = _rng(config, experiment_index, _BATCH + k).standard_normal((n, config.dim))
        ybar = source + (z @ model.chol.T).mean(axis=0)
        belief = posterior(belief, model, n, ybar)
        posts.append(belief)
        means.append(ybar)

    first = posts[0]
    infos = [float(info_gaussian_view(view, first, prior)) for view in posts]
    return ExperimentRecord(
        experiment_id=experiment_index,
        true_theta=theta,
        alt_theta=alt,
        batch_sizes=config.batch_sizes,
        batch_means=means,
        stage_posteriors=posts,
        first_inference_info_per_view=infos,
        realization_limit_info=float(realization_limit_info(theta, first, prior)),
        prior=prior,
    )


@dataclass(frozen=True, eq=False)
class EnsembleTable:
    """Per-experiment results in index order. ``infos`` has one column per stage
    plus a final realization-limit column (nats)."""

    infos: np.ndarray
    true_theta: np.ndarray
    alt_theta: Optional[np.ndarray]


def _run_chunk(config_json: dict, start: int, stop: int):
    config = ExperimentConfig.from_json(config_json)
    K = config.num_stages
    infos = np.empty((stop - start, K + 1))
    thetas = np.empty((stop - start, config.dim))
    alts = np.empty((stop - start, config.dim)) if config.scenario == "inconsistent" else None
    for row, i in enumerate(range(start, stop)):
        rec = run_experiment(config, i)
        infos[row, :K] = rec.first_inference_info_per_view
        infos[row, K] = rec.realization_limit_info
        thetas[row] = rec.true_theta
        if alts is not None:
            alts[row] = rec.alt_theta
    return infos, thetas, alts


def ensemble_table(config: ExperimentConfig, jobs: int = 1, chunk: int = 2000) -> EnsembleTable:
    N = config.num_experiments
    bounds = [(s, min(s + chunk, N)) for s in range(0, N, chunk)]
    payload = config.to_json()
    if jobs <= 1 or len(bounds) == 1:
        parts = [_run_chunk(payload, s, e) for s, e in bounds]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, [payload] * len(bounds),
                                  [s for s, _ in bounds], [e for _, e in bounds]))
    infos = np.concatenate([p[0] for p in parts])
    thetas = np.concatenate([p[1] for p in parts])
    alts = np.concatenate([p[2] for p in parts]) if config.scenario == "inconsistent" else None
    return EnsembleTable(infos, thetas, alts)


def laplace_fit(values: Sequence[float]) -> tuple:
    """Maximum-likelihood Laplace parameters: (median, mean absolute deviation from it)."""
    x = np.asarray(values, dtype=float).ravel()
    if x.size < 2:
        raise EmptyInput("laplace_fit needs at least two values")
    loc = float(np.median(x))
    return loc, math.fsum(np.abs(x - loc)) / x.size


@dataclass(frozen=True, eq=False)
class StageSummary:
    name: str
    counts: np.ndarray
    mean: float
    variance: float
    fraction_negative: float
    argmin: int
    min: float
    argmax: int
    max: float
    median: float


@dataclass(frozen=True, eq=False)
class EnsembleSummary:
    config: ExperimentConfig
    stages: list
    mutual_info: float  # nats
    laplace_location: float  # nats
    laplace_scale: float  # nats

    def stage(self, name: str) -> StageSummary:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def implied_fraction_negative(self) -> float:
        """Mass below zero of the fitted realization-limit Laplace law."""
        loc, scale = self.laplace_location, self.laplace_scale
        if scale == 0:
            return 1.0 if loc < 0 else (0.5 if loc == 0 else 0.0)
        if loc >= 0:
            return 0.5 * math.exp(-loc / scale)
        return 1.0 - 0.5 * math.exp(loc / scale)

    def bin_edges(self) -> np.ndarray:
        lo, hi, count = self.config.histogram_bins
        return np.linspace(lo, hi, count + 1)

    def to_json(self, units: str = "bits") -> dict:
        c = lambda x: _convert(x, units)  # noqa: E731
        c2 = lambda x: _convert(_convert(x, units), units)  # noqa: E731
        return {
            "units": units,
            "config": self.config.to_json(),
            f"mutual_info_{units}": c(self.mutual_info),
            "realization_laplace": {
                "location": c(self.laplace_location),
                "scale": c(self.laplace_scale),
                "implied_fraction_negative": self.implied_fraction_negative(),
            },
            "stages": [
                {
                    "name": s.name,
                    "mean": c(s.mean),
                    "variance": c2(s.variance),
                    "median": c(s.median),
                    "fraction_negative": s.fraction_negative,
                    "argmin": {"experiment_id": s.argmin, "value": c(s.min)},
                    "argmax": {"experiment_id": s.argmax, "value": c(s.max)},
                    "histogram_total": int(s.counts.sum()),
                }
                for s in self.stages
            ],
        }


def summarize(config: ExperimentConfig, table: EnsembleTable) -> EnsembleSummary:
    lo, hi, count = config.histogram_bins
    edges = np.linspace(lo, hi, count + 1)
    stages = []
    for j, name in enumerate(config.stage_names()):
        col = table.infos[:, j]
        bits = col / LN2
        # Out-of-range values land in the edge bins so each stage totals num_experiments.
        idx = np.clip(np.searchsorted(edges, bits, side="right") - 1, 0, count - 1)
        counts = np.bincount(idx, minlength=count)
        mean = math.fsum(col) / col.size
        stages.append(StageSummary(
            name=name,
            counts=counts,
            mean=mean,
            variance=math.fsum((col - mean) ** 2) / col.size,
            fraction_negative=float(np.count_nonzero(col < 0)) / col.size,
            argmin=int(np.argmin(col)),
            min=float(col.min()),
            argmax=int(np.argmax(col)),
            max=float(col.max()),
            median=float(np.median(col)),
        ))
    real = table.infos[:, -1]
    if real.size >= 2:
        loc, scale = laplace_fit(real)
    else:
        loc, scale = float(real[0]), 0.0
    mi = float(mutual_info_gaussian(config.prior, config.model, config.batch_sizes[0]))
    return EnsembleSummary(config, stages, mi, loc, scale)


def run_ensemble(config: ExperimentConfig, jobs: int = 1, records_path=None,
                 units: str = "bits") -> EnsembleSummary:
    """Run ``config.num_experiments`` experiments and aggregate them.

    When ``records_path`` is given, one CSV row per experiment is written there.
    """
    table = ensemble_table(config, jobs=jobs)
    if records_path is not None:
        write_records_csv(records_path, config, table, units)
    return summarize(config, table)


def write_histogram_csv(path, summary: EnsembleSummary, units: str = "bits") -> None:
    edges = summary.bin_edges() * (LN2 if units == "nats" else 1.0)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["stage", "bin_lo", "bin_hi", "count"])
        for s in summary.stages:
            for b, n in enumerate(s.counts):
                w.writerow([s.name, fmt(edges[b]), fmt(edges[b + 1]), int(n)])


def write_records_csv(path, config: ExperimentConfig, table: EnsembleTable, units: str = "bits") -> None:
    d = config.dim
    header = ["id"] + [f"theta{i}" for i in range(d)]
    if table.alt_theta is not None:
        header += [f"alt_theta{i}" for i in range(d)]
    header += [f"{name}_{units}" for name in config.stage_names()]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i in range(table.infos.shape[0]):
            row = [i] + [fmt(x) for x in table.true_theta[i]]
            if table.alt_theta is not None:
                row += [fmt(x) for x in table.alt_theta[i]]
            row += [fmt(_convert(x, units)) for x in table.infos[i]]
            w.writerow(row)


def write_summary_json(path, summary: EnsembleSummary, units: str = "bits") -> None:
    with open(path, "w") as fh:
        json.dump(summary.to_json(units), fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class BoundsReport:
    predictive_kl: float  # nats
    model_kl: float
    realized_predictive_info: float
    passed: bool

    def to_json(self, units: str = "bits") -> dict:
        return {
            "predictive_kl": _convert(self.predictive_kl, units),
            "model_kl": _convert(self.model_kl, units),
            "realized_predictive_info": _convert(self.realized_predictive_info, units),
            "passed": self.passed,
            "units": units,
        }


def inference_bounds(prior: Gaussian, model: LocationModel, n: float, sample_mean,
                     slack: float = BOUND_SLACK) -> BoundsReport:
    """Lower and upper bounds on the model information of one conjugate update.

    Checks ``kl(post-predictive, prior-predictive) <= kl(posterior, prior)
    <= ln(post-predictive(ybar) / prior-predictive(ybar))``, the predictive
    distributions being those of the mean of ``n`` fresh observations.
    """
    if n == 0:
        return BoundsReport(0.0, 0.0, 0.0, True)
    post = posterior(prior, model, n, sample_mean)
    pred_prior = predictive(prior, model, n)
    pred_post = predictive(post, model, n)
    lower = float(kl_gaussian(pred_post, pred_prior))
    middle = float(kl_gaussian(post, prior))
    upper = pred_post.logpdf(sample_mean) - pred_prior.logpdf(sample_mean)
    passed = lower <= middle + slack and middle <= upper + slack
    return BoundsReport(lower, middle, upper, passed)


def bounds_audit(record: ExperimentRecord, model: LocationModel) -> BoundsReport:
    """Inference bounds for the first update of ``record``."""
    return inference_bounds(record.prior, model, record.batch_sizes[0], record.batch_means[0])


def default_jobs() -> int:
    env = os.environ.get("BELIEF_INFO_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"BELIEF_INFO_JOBS must be an integer, got {env!r}") from None
    return 1
