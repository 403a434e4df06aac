"""Label information for classifier prediction logs.

For a record with predicted probabilities ``p``, claimed label ``y`` and an
uninformed baseline ``b`` (uniform unless given), in the view of the label:

* predictive information  ``log2(p[y] / b[y])``, from baseline to prediction;
* residual information    ``log2(1 / p[y])``, from prediction to the label;
* total                   ``log2(1 / b[y])``, their sum.

Strongly negative predictive information means the prediction moved belief
away from the claimed label, which flags likely mislabeled records.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InconsistentClassCount, InputError
from .measures import BeliefWeights, Categorical, info, kl

__all__ = [
    "PredictionRecord",
    "LabelInfoReport",
    "predictive_label_info",
    "residual_label_info",
    "total_label_info",
    "generative_predictive_info",
    "analyze",
    "generate_synthetic",
    "read_predictions_csv",
    "write_predictions_csv",
    "write_report_csv",
]

INGEST_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PredictionRecord:
    id: str
    probs: Categorical
    label: int
    baseline: Optional[BeliefWeights] = None

    def __post_init__(self):
        if not isinstance(self.probs, Categorical):
            object.__setattr__(self, "probs", Categorical(self.probs))
        if self.baseline is not None and not isinstance(self.baseline, BeliefWeights):
            object.__setattr__(self, "baseline", BeliefWeights(self.baseline))
        k = self.num_classes
        if not 0 <= self.label < k:
            raise InputError(f"record {self.id!r}: label {self.label} out of range for {k} classes")
        if self.baseline is not None and self.baseline.support_size != k:
            raise InputError(f"record {self.id!r}: baseline has {self.baseline.support_size} entries, expected {k}")

    @property
    def num_classes(self) -> int:
        return self.probs.support_size

    def baseline_probs(self) -> Categorical:
        if self.baseline is None:
            return Categorical.uniform(self.num_classes)
        return self.baseline.normalized()

    def label_view(self) -> Categorical:
        return Categorical.delta(self.num_classes, self.label)


def predictive_label_info(record: PredictionRecord) -> float:
    """Bits gained moving from the baseline to the prediction, in the label's view."""
    return info(record.label_view(), record.probs, record.baseline_probs()).bits


def residual_label_info(record: PredictionRecord) -> float:
    """Bits still missing between the prediction and the realized label."""
    view = record.label_view()
    return info(view, view, record.probs).bits


def total_label_info(record: PredictionRecord) -> float:
    view = record.label_view()
    return info(view, view, record.baseline_probs()).bits


def generative_predictive_info(q1, q0) -> float:
    """Predictive information when ``q1`` is taken as the view of new outcomes (bits)."""
    return kl(q1, q0).bits


@dataclass(frozen=True, eq=False)
class LabelInfoReport:
    """Per-record quantities (bits) sorted by record id, plus aggregates.

    ``mean`` and the histogram cover finite predictive values only; infinite
    values are counted in ``num_neg_inf``.
    """

    ids: list
    labels: np.ndarray
    predictive: np.ndarray
    residual: np.ndarray
    total: np.ndarray
    ranking: list
    mean: float
    fraction_negative: float
    num_neg_inf: int
    histogram: tuple
    conservation_max_error: float
    groups: dict = field(default_factory=dict)

    @property
    def negative(self) -> np.ndarray:
        return self.predictive < 0

    def to_json(self, units: str = "bits", ranking_limit: Optional[int] = None) -> dict:
        scale = _unit_scale(units)
        counts, edges = self.histogram

        def conv(stats):
            out = dict(stats)
            out["mean_predictive"] = stats["mean_predictive"] * scale
            return out

        ranking = self.ranking if ranking_limit is None else self.ranking[:ranking_limit]
        return {
            "units": units,
            "num_records": len(self.ids),
            "mean_predictive": self.mean * scale,
            "fraction_negative": self.fraction_negative,
            "num_neg_inf": self.num_neg_inf,
            "conservation_max_error": self.conservation_max_error * scale,
            "histogram": {"edges": (edges * scale).tolist(), "counts": counts.tolist()},
            "ranking": ranking,
            "groups": {name: conv(g) for name, g in self.groups.items()},
        }


def _unit_scale(units: str) -> float:
    if units == "bits":
        return 1.0
    if units == "nats":
        return math.log(2.0)
    raise InputError(f"unknown units {units!r}")


def _stats(values: np.ndarray) -> dict:
    finite = values[np.isfinite(values)]
    return {
        "count": int(values.size),
        "mean_predictive": math.fsum(finite) / finite.size if finite.size else float("nan"),
        "fraction_negative": float(np.count_nonzero(values < 0)) / values.size if values.size else float("nan"),
        "num_neg_inf": int(np.count_nonzero(np.isneginf(values))),
    }


def analyze(records: Sequence[PredictionRecord], mislabeled: Optional[Sequence[bool]] = None,
            bins: tuple = (-30.0, 5.0, 70)) -> LabelInfoReport:
    """Compute predictive, residual and total label information for every record.

    ``mislabeled`` (ground-truth flags, aligned with ``records``) adds
    per-group summaries under ``groups["genuine"]`` and ``groups["mislabeled"]``.
    The ranking lists record ids by ascending predictive information,
    ``-inf`` first, ties broken by id.
    """
    if not records:
        raise InputError("no records to analyze")
    k = records[0].num_classes
    if any(r.num_classes != k for r in records):
        raise InconsistentClassCount("records disagree on the number of classes")
    if mislabeled is not None and len(mislabeled) != len(records):
        raise InputError("mislabeled flags must align with records")
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        raise InputError("record ids must be unique")

    order = sorted(range(len(records)), key=lambda i: ids[i])
    recs = [records[i] for i in order]
    pred = np.array([predictive_label_info(r) for r in recs])
    resid = np.array([residual_label_info(r) for r in recs])
    total = np.array([total_label_info(r) for r in recs])
    finite = np.isfinite(pred)
    err = np.abs(pred[finite] + resid[finite] - total[finite])
    stats = _stats(pred)

    lo, hi, count = bins
    edges = np.linspace(lo, hi, int(count) + 1)
    counts = np.histogram(np.clip(pred[finite], lo, hi), bins=edges)[0]
    sorted_ids = [r.id for r in recs]
    ranking = [sorted_ids[i] for i in sorted(range(len(recs)), key=lambda i: (pred[i], sorted_ids[i]))]

    groups = {}
    if mislabeled is not None:
        flags = np.array([bool(mislabeled[i]) for i in order])
        groups = {"genuine": _stats(pred[~flags]), "mislabeled": _stats(pred[flags])}

    return LabelInfoReport(
        ids=sorted_ids,
        labels=np.array([r.label for r in recs]),
        predictive=pred,
        residual=resid,
        total=total,
        ranking=ranking,
        mean=stats["mean_predictive"],
        fraction_negative=stats["fraction_negative"],
        num_neg_inf=stats["num_neg_inf"],
        histogram=(counts, edges),
        conservation_max_error=float(err.max()) if err.size else 0.0,
        groups=groups,
    )


def generate_synthetic(num_records: int, k: int, confidence: float, mislabel_fraction: float,
                       seed: int) -> tuple:
    """Records from an idealized classifier, some with corrupted labels.

    Each record puts ``confidence`` on its true class and spreads the rest
    evenly. With probability ``mislabel_fraction`` the claimed label is
    replaced by a uniformly chosen wrong class. Returns ``(records, flags)``
    where ``flags[i]`` is True for mislabeled records.
    """
    if num_records < 1 or k < 2:
        raise InputError("need num_records >= 1 and k >= 2")
    if not 1.0 / k <= confidence <= 1.0:
        raise InputError(f"confidence must lie in [1/k, 1], got {confidence}")
    if not 0.0 <= mislabel_fraction <= 1.0:
        raise InputError("mislabel_fraction must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    true = rng.integers(0, k, size=num_records)
    flip = rng.random(num_records) < mislabel_fraction
    shift = rng.integers(1, k, size=num_records)
    claimed = np.where(flip, (true + shift) % k, true)

    rest = (1.0 - confidence) / (k - 1)
    width = len(str(num_records - 1))
    records = []
    for i in range(num_records):
        p = np.full(k, rest)
        p[true[i]] = confidence
        records.append(PredictionRecord(f"r{i:0{width}d}", Categorical(p), int(claimed[i])))
    return records, [bool(f) for f in flip]


def _parse_row_probs(row: dict, names: list, rid: str) -> np.ndarray:
    try:
        p = np.array([float(row[c]) for c in names])
    except (TypeError, ValueError):
        raise InputError(f"record {rid!r}: non-numeric probability") from None
    if np.any(~np.isfinite(p)) or np.any(p < 0):
        raise InputError(f"record {rid!r}: probabilities must be finite and nonnegative")
    total = math.fsum(p)
    if abs(total - 1.0) > INGEST_TOL:
        raise InputError(f"record {rid!r}: probabilities sum to {total}")
    return p / total


def read_predictions_csv(path) -> tuple:
    """Read ``id,label,p0..p{k-1}`` rows with optional ``baseline0..`` and ``mislabeled`` columns.

    Returns ``(records, flags)``; ``flags`` is None without a ``mislabeled`` column.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if "id" not in header or "label" not in header:
            raise InputError("prediction CSV needs 'id' and 'label' columns")
        pcols = [c for c in header if c.startswith("p") and c[1:].isdigit()]
        k = len(pcols)
        if k < 2 or pcols != [f"p{i}" for i in range(k)]:
            raise InputError("prediction CSV needs columns p0..p{k-1}")
        bcols = [f"baseline{i}" for i in range(k)]
        has_baseline = all(c in header for c in bcols)
        if not has_baseline and any(c.startswith("baseline") for c in header):
            raise InputError("baseline columns must be baseline0..baseline{k-1}")
        has_flags = "mislabeled" in header
        records, flags = [], []
        for row in reader:
            rid = row["id"]
            try:
                label = int(row["label"])
            except (TypeError, ValueError):
                raise InputError(f"record {rid!r}: label must be an integer") from None
            probs = _parse_row_probs(row, pcols, rid)
            baseline = None
            if has_baseline:
                try:
                    baseline = BeliefWeights([float(row[c]) for c in bcols])
                except (TypeError, ValueError):
                    raise InputError(f"record {rid!r}: non-numeric baseline") from None
            records.append(PredictionRecord(rid, Categorical(probs), label, baseline))
            if has_flags:
                flags.append(row["mislabeled"].strip().lower() in ("1", "true", "yes"))
    if not records:
        raise InputError("prediction CSV has no rows")
    return records, (flags if has_flags else None)


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return format(x, ".17g")


def write_predictions_csv(path, records: Sequence[PredictionRecord],
                          flags: Optional[Sequence[bool]] = None) -> None:
    k = records[0].num_classes
    baselines = any(r.baseline is not None for r in records)
    header = ["id", "label"] + [f"p{i}" for i in range(k)]
    if baselines:
        header += [f"baseline{i}" for i in range(k)]
    if flags is not None:
        header.append("mislabeled")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, r in enumerate(records):
            row = [r.id, r.label] + [_fmt(x) for x in r.probs.probs]
            if baselines:
                b = r.baseline.weights if r.baseline is not None else np.ones(k)
                row += [_fmt(x) for x in b]
            if flags is not None:
                row.append(int(bool(flags[i])))
            w.writerow(row)


def write_report_csv(path, report: LabelInfoReport, units: str = "bits") -> None:
    scale = _unit_scale(units)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "label", f"predictive_{units}", f"residual_{units}", f"total_{units}", "negative_flag"])
        for i, rid in enumerate(report.ids):
            w.writerow([
                rid,
                int(report.labels[i]),
                _fmt(report.predictive[i] * scale),
                _fmt(report.residual[i] * scale),
                _fmt(report.total[i] * scale),
                int(report.predictive[i] < 0),
            ])
