"""``belief-info`` command-line interface.

Results go to stdout as JSON (or CSV with ``--format csv``); logs go to
stderr. Exit codes: 0 success, 2 input error, 3 domain error, 4 infeasible,
5 no convergence. Failures print ``{"error": {"code": ..., "message": ...}}``.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import secrets
import sys
from pathlib import Path

import numpy as np

from . import critical, experiments, fisher, labelinfo, measures
from .errors import DomainError, Infeasible, InfoError, InputError, NoConvergence
from .gaussian import Gaussian
from .measures import LN2

logger = logging.getLogger("beliefinfo")

EXIT_INPUT, EXIT_DOMAIN, EXIT_INFEASIBLE, EXIT_NO_CONVERGENCE = 2, 3, 4, 5


class UsageError(InputError):
    code = "usage_error"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_json_arg(value: str, what: str):
    """Inline JSON, or the path of a JSON file."""
    if value is None:
        raise InputError(f"missing {what}")
    if os.path.isfile(value):
        try:
            with open(value) as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {what} from {value}: {exc}") from None
    try:
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is neither a file nor valid JSON: {exc}") from None


def _scale(units: str) -> float:
    return 1.0 / LN2 if units == "bits" else 1.0


def _value(x: float):
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def _emit(args, payload: dict, csv_rows=None) -> None:
    if args.format == "csv" and csv_rows is not None:
        sys.stdout.write("\n".join(",".join(str(c) for c in row) for row in csv_rows) + "\n")
    else:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


# -- measure -----------------------------------------------------------------

def _cat(args, name):
    return measures.Categorical.from_json(load_json_arg(getattr(args, name), f"--{name}"))


def _weights(args, name):
    return measures.BeliefWeights.from_json(load_json_arg(getattr(args, name), f"--{name}"))


def cmd_measure(args) -> None:
    kind = args.measure
    power = 1
    if kind == "info":
        v = measures.info(_cat(args, "view"), _weights(args, "q1"), _weights(args, "q0"))
    elif kind == "density":
        v = measures.info_density(_weights(args, "q1"), _weights(args, "q0"), args.outcome)
    elif kind == "pseudometric":
        v = measures.pseudometric_lp(_cat(args, "view"), _weights(args, "q1"), _weights(args, "q0"), args.p)
    elif kind == "variance":
        v = measures.info_variance(_cat(args, "view"), _weights(args, "q1"), _weights(args, "q0"))
        power = 2
    elif kind == "entropy":
        v = measures.entropy(_cat(args, "probs"))
    elif kind == "cross-entropy":
        v = measures.cross_entropy(_cat(args, "view"), _weights(args, "q"))
    elif kind == "realization":
        v = measures.realization_info(_weights(args, "q"), args.outcome)
    elif kind == "kl":
        v = measures.kl(_cat(args, "q1"), _weights(args, "q0"))
    elif kind == "lindley":
        v = measures.lindley(_cat(args, "q1"), _cat(args, "q0"))
    elif kind == "mutual":
        v = measures.mutual_information(
            measures.JointCategorical.from_json(load_json_arg(args.joint, "--joint")))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown measure {kind}")
    value = float(v) * _scale(args.units) ** power
    units = args.units if power == 1 else f"{args.units}^2"
    _emit(args, {"value": _value(value), "units": units},
          [["value", "units"], [experiments.fmt(value), units]])


# -- critical ----------------------------------------------------------------

def _constraints(cfg):
    return [critical.ExpectationConstraint.from_json(c) for c in cfg.get("constraints", [])]


def cmd_critical(args) -> None:
    cfg = load_json_arg(args.config, "--config")
    if not isinstance(cfg, dict):
        raise InputError("critical config must be a JSON object")
    tol = float(cfg.get("tol", 1e-10))
    to_nats = 1.0 / _scale(args.units)
    kind = args.critical
    try:
        if kind == "maxent":
            sol = critical.max_entropy_distribution(int(cfg["support_size"]), _constraints(cfg), tol)
            payload = sol.to_json()
        elif kind == "min-info":
            q0 = measures.BeliefWeights.from_json(cfg["q0"])
            payload = critical.min_info_distribution(q0, _constraints(cfg), tol).to_json()
        elif kind == "constrained":
            q0 = measures.BeliefWeights.from_json(cfg["q0"])
            states = [measures.BeliefWeights.from_json(s) for s in cfg["states"]]
            targets = [float(t) * to_nats for t in cfg["targets"]]
            payload = critical.constrained_info_distribution(q0, states, targets, tol).to_json()
        elif kind == "anneal":
            prior = measures.Categorical.from_json(cfg["prior"])
            lik = measures.BeliefWeights.from_json(cfg["likelihood"])
            lam = float(cfg["lambda"])
            payload = {"lambda": lam, "probs": critical.anneal(prior, lik, lam).probs.tolist()}
        else:
            prior = measures.Categorical.from_json(cfg["prior"])
            lik = measures.BeliefWeights.from_json(cfg["likelihood"])
            target = float(cfg["target_info"]) * to_nats
            lam, r = critical.solve_annealing_lambda(prior, lik, target, tol)
            post = critical.anneal(prior, lik, 1.0)
            achieved = float(measures.info(r, post, prior)) * _scale(args.units)
            payload = {"lambda": lam, "probs": r.probs.tolist(), "info": achieved, "units": args.units}
    except KeyError as exc:
        raise InputError(f"critical config is missing {exc}") from None
    _emit(args, payload)


# -- simulate ----------------------------------------------------------------

def _resolve_seed(cli_seed, config_seed):
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return config_seed
    seed = secrets.randbits(63)
    logger.warning("no seed given; using --seed %d", seed)
    return seed


def cmd_simulate(args) -> None:
    raw = load_json_arg(args.config, "--config") if args.config else {}
    if not isinstance(raw, dict):
        raise InputError("simulation config must be a JSON object")
    for key in ("num_experiments", "scenario"):
        if getattr(args, key) is not None:
            raw[key] = getattr(args, key)
    raw["master_seed"] = _resolve_seed(args.seed, raw.get("master_seed"))
    config = experiments.ExperimentConfig.from_json(raw)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs = args.jobs if args.jobs is not None else experiments.default_jobs()
    logger.info("running %d experiments (%s) with %d worker(s)", config.num_experiments, config.scenario, jobs)
    table = experiments.ensemble_table(config, jobs=jobs)
    summary = experiments.summarize(config, table)
    experiments.write_summary_json(out / "summary.json", summary, args.units)
    experiments.write_histogram_csv(out / "histogram.csv", summary, args.units)
    if args.records:
        experiments.write_records_csv(out / "records.csv", config, table, args.units)
    _emit(args, summary.to_json(args.units))


# -- labels ------------------------------------------------------------------

def cmd_labels(args) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.labels == "synth":
        seed = _resolve_seed(args.seed, None)
        records, flags = labelinfo.generate_synthetic(
            args.num_records, args.k, args.confidence, args.mislabel_fraction, seed)
        path = out / "predictions.csv"
        labelinfo.write_predictions_csv(path, records, flags)
        _emit(args, {"path": str(path), "num_records": len(records), "seed": seed,
                     "num_mislabeled": int(sum(flags))})
        return
    try:
        records, flags = labelinfo.read_predictions_csv(args.input)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from None
    report = labelinfo.analyze(records, flags)
    payload = report.to_json(args.units)
    with open(out / "report.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    labelinfo.write_report_csv(out / "records.csv", report, args.units)
    payload = report.to_json(args.units, ranking_limit=args.top)
    _emit(args, payload)


# -- fisher ------------------------------------------------------------------

def _belief(obj):
    if isinstance(obj, dict) and "mean" in obj:
        return Gaussian.from_json(obj)
    return measures.Categorical.from_json(obj)


def cmd_fisher(args) -> None:
    family = fisher.family_from_json(load_json_arg(args.family, "--family"))
    view = _belief(load_json_arg(args.view, "--view"))
    q0 = None
    if args.q0 is not None:
        raw = load_json_arg(args.q0, "--q0")
        q0 = Gaussian.from_json(raw) if isinstance(raw, dict) and "mean" in raw else \
            measures.BeliefWeights.from_json(raw)
    theta = np.atleast_1d(np.array(load_json_arg(args.theta, "--theta"), dtype=float))
    score = fisher.fisher_score(view, family, q0, theta, args.method) * _scale(args.units)
    matrix = fisher.fisher_matrix(view, family, q0, theta, args.method) * _scale(args.units)
    _emit(args, {"score": score.tolist(), "matrix": matrix.tolist(), "units": args.units})


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--units", choices=("bits", "nats"), default="bits")
    common.add_argument("--seed", type=int, default=None, help="64-bit seed for randomized commands")
    common.add_argument("--out", default=".", help="output directory for file artifacts")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $BELIEF_INFO_JOBS or 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="belief-info", description="Information as change of belief.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="discrete information measures")
    msub = m.add_subparsers(dest="measure", required=True, parser_class=_Parser)
    specs = {
        "info": ["view", "q1", "q0"],
        "density": ["q1", "q0"],
        "pseudometric": ["view", "q1", "q0"],
        "variance": ["view", "q1", "q0"],
        "entropy": ["probs"],
        "cross-entropy": ["view", "q"],
        "realization": ["q"],
        "kl": ["q1", "q0"],
        "lindley": ["q1", "q0"],
        "mutual": ["joint"],
    }
    for name, opts in specs.items():
        p = msub.add_parser(name, parents=[common])
        for opt in opts:
            p.add_argument(f"--{opt}", required=True, help="inline JSON or path to a JSON file")
        if name in ("density", "realization"):
            p.add_argument("--outcome", type=int, required=True)
        if name == "pseudometric":
            p.add_argument("--p", type=float, default=1.0)
    m.set_defaults(func=cmd_measure)

    c = sub.add_parser("critical", help="constrained information solvers")
    csub = c.add_subparsers(dest="critical", required=True, parser_class=_Parser)
    for name in ("maxent", "min-info", "constrained", "anneal", "anneal-solve"):
        p = csub.add_parser(name, parents=[common])
        p.add_argument("--config", required=True, help="inline JSON or path to a JSON file")
    c.set_defaults(func=cmd_critical)

    s = sub.add_parser("simulate", parents=[common], help="Gaussian negative-information ensemble")
    s.add_argument("--config", default=None, help="experiment config (inline JSON or path)")
    s.add_argument("--num-experiments", dest="num_experiments", type=int, default=None)
    s.add_argument("--scenario", choices=experiments.SCENARIOS, default=None)
    s.add_argument("--records", action="store_true", help="also write records.csv")
    s.set_defaults(func=cmd_simulate)

    lab = sub.add_parser("labels", help="label information for classifier predictions")
    lsub = lab.add_subparsers(dest="labels", required=True, parser_class=_Parser)
    a = lsub.add_parser("analyze", parents=[common])
    a.add_argument("--input", required=True, help="prediction CSV")
    a.add_argument("--top", type=int, default=20, help="ranking entries echoed on stdout")
    y = lsub.add_parser("synth", parents=[common])
    y.add_argument("--num-records", dest="num_records", type=int, default=10_000)
    y.add_argument("--k", type=int, default=10)
    y.add_argument("--confidence", type=float, default=0.9)
    y.add_argument("--mislabel-fraction", dest="mislabel_fraction", type=float, default=0.5)
    lab.set_defaults(func=cmd_labels)

    f = sub.add_parser("fisher", parents=[common], help="generalized Fisher score and matrix")
    f.add_argument("--family", required=True)
    f.add_argument("--view", required=True)
    f.add_argument("--theta", required=True)
    f.add_argument("--q0", default=None)
    f.add_argument("--method", choices=("auto", "analytic", "fd"), default="auto")
    f.set_defaults(func=cmd_fisher)
    return parser


def _fail(code: int, err_code: str, message: str) -> int:
    sys.stdout.write(json.dumps({"error": {"code": err_code, "message": message}}) + "\n")
    logger.error("%s: %s", err_code, message)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_INPUT, exc.code, str(exc))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)
    try:
        args.func(args)
    except Infeasible as exc:
        return _fail(EXIT_INFEASIBLE, exc.code, str(exc))
    except NoConvergence as exc:
        return _fail(EXIT_NO_CONVERGENCE, exc.code, str(exc))
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, exc.code, str(exc))
    except InfoError as exc:
        return _fail(EXIT_INPUT, exc.code, str(exc))
    except OSError as exc:
        return _fail(EXIT_INPUT, "io_error", str(exc))
    except (ValueError, TypeError) as exc:
        return _fail(EXIT_INPUT, "input_error", str(exc))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
