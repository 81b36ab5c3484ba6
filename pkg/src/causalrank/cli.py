"""Command line interface.

Exit codes: 0 success, 2 invalid input or usage, 3 algorithm failure,
4 file system error.
"""
import argparse
import json
import os
import sys
from dataclasses import fields

import numpy as np

from . import algorithms, csvio, datagen, evaluation, experiments
from ._util import DEFAULT_SEED, atomic_write_text, child_rng
from .errors import CausalRankError, InputError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ALGORITHM = 3
EXIT_IO = 4


class CommandError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parse_params(pairs):
    out = {}
    for pair in pairs or []:
        key, sep, val = pair.partition("=")
        if not sep or not key:
            raise CommandError(f"parameter {pair!r} is not of the form key=value", EXIT_INPUT)
        out[key.strip().replace("-", "_")] = _parse_value(val)
    return out


def _read_input_matrix(path, allow_inf=False):
    try:
        return csvio.read_matrix(path, allow_inf=allow_inf)
    except csvio.CSVParseError as exc:
        raise CommandError(f"{path}: {exc}", EXIT_INPUT) from exc
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from exc


def _write(path, text):
    try:
        atomic_write_text(path, text)
    except OSError as exc:
        raise CommandError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO) from exc


def zscore(X):
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0] = 1.0
    return (X - mu) / sd


def _log(args, msg):
    if not args.quiet:
        print(msg, file=sys.stderr)


def cmd_run(args):
    try:
        cfg = algorithms.make_config(args.algorithm, seed=args.seed, **_parse_params(args.param))
    except (InputError, TypeError) as exc:
        raise CommandError(str(exc), EXIT_INPUT) from exc
    X, names, _ = _read_input_matrix(args.input)
    T, d = X.shape
    names = names or csvio.default_names(d)
    if args.normalise:
        X = zscore(X)
    try:
        scores = algorithms.run_algorithm(args.algorithm, X, cfg, threads=args.threads)
    except (CausalRankError, np.linalg.LinAlgError) as exc:
        raise CommandError(f"{args.algorithm} failed: {exc}", EXIT_ALGORITHM) from exc
    _write(args.output, csvio.format_matrix(scores, names, names))
    _log(args, f"d={d} T={T} algorithm={args.algorithm} seed={cfg.seed}")
    return EXIT_OK


def _simulate_model(args, rng):
    if args.model:
        try:
            with open(args.model, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CommandError(f"cannot read {args.model}: {exc.strerror or exc}", EXIT_IO) from exc
        model = datagen.model_from_json(text)
        if (args.kind == "sem") != isinstance(model, datagen.SemModel):
            raise InputError(f"model file does not describe a {args.kind} model")
        return model
    if args.kind == "sem":
        model = datagen.random_sem(args.d, args.edge_prob, seed=rng)
        if args.regime == "equal_marginal":
            model = datagen.rescale_sem(model, np.ones(args.d))
        elif args.regime == "decreasing_marginal":
            model = datagen.rescale_sem(model, datagen.decreasing_targets(args.d, args.decreasing_ratio))
        return model
    return datagen.random_var(
        args.d,
        args.edge_prob,
        max_lag=args.max_lag,
        spectral_radius=args.spectral_radius,
        transition=args.transition,
        seed=rng,
    )


def cmd_simulate(args):
    # separate streams so a saved model replays to the same data under the same seed
    model_rng, sample_rng = child_rng(args.seed, 0), child_rng(args.seed, 1)
    try:
        model = _simulate_model(args, model_rng)
        model.seed = args.seed
        if args.kind == "sem":
            X = datagen.sample_sem(model, args.n, seed=sample_rng)
            truth = model.adjacency()
        else:
            X, truth = datagen.sample_var(model, args.T, args.burn_in, seed=sample_rng)
    except CausalRankError as exc:
        raise CommandError(str(exc), EXIT_INPUT) from exc
    except (KeyError, ValueError) as exc:
        raise CommandError(f"invalid simulation spec: {exc}", EXIT_INPUT) from exc
    names = csvio.default_names(X.shape[1])
    outputs = {
        "data.csv": csvio.format_matrix(X, names),
        "truth.csv": csvio.format_matrix(truth, names, names),
        "model.json": datagen.model_to_json(model),
    }
    if not os.path.isdir(args.out_dir):
        try:
            os.makedirs(args.out_dir)
        except OSError as exc:
            raise CommandError(f"cannot create {args.out_dir}: {exc.strerror or exc}", EXIT_IO) from exc
    for fname, text in outputs.items():
        _write(os.path.join(args.out_dir, fname), text)
    _log(args, f"simulated {args.kind}: rows={X.shape[0]} d={X.shape[1]} seed={args.seed}")
    return EXIT_OK


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CommandError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}", EXIT_INPUT) from exc
    if not isinstance(doc, dict):
        raise CommandError(f"{path}: config must be a JSON object", EXIT_INPUT)
    return doc


def _pick(doc, cls):
    known = {f.name for f in fields(cls) if f.init}
    return {k: v for k, v in doc.items() if k in known}


def _iid_scaling(doc, args):
    regimes = doc.get("regimes", list(experiments.REGIMES))
    base = _pick(doc, experiments.ScalingExperimentConfig)
    base.pop("regime", None)
    if args.seed_given:
        base["master_seed"] = args.seed
    cfgs = [experiments.ScalingExperimentConfig(regime=r, **base) for r in regimes]
    reports = [experiments.run_scaling_experiment(c, threads=args.threads) for c in cfgs]
    return reports, {
        "auc.csv": experiments.auc_csv(reports),
        "variance.csv": experiments.variance_csv(reports),
    }


def _var_benchmark(doc, args):
    gen_doc = doc.get("generator", {})
    generators = gen_doc if isinstance(gen_doc, list) else [gen_doc]
    algos = doc.get("algorithms") or [{"name": n} for n in algorithms.ALGORITHMS]
    pairs = [(a["name"], algorithms.make_config(a["name"], **a.get("params", {}))) for a in algos]
    reps = int(doc.get("repetitions", 20))
    seed = args.seed if args.seed_given else int(doc.get("master_seed", DEFAULT_SEED))
    reports = [
        experiments.run_algorithm_benchmark(
            experiments.VarGeneratorSpec(**_pick(g, experiments.VarGeneratorSpec)),
            pairs,
            reps,
            seed,
            threads=args.threads,
        )
        for g in generators
    ]
    return reports, {"auc.csv": experiments.auc_csv(reports, "generator", "algorithm")}


EXPERIMENTS = {"iid-scaling": _iid_scaling, "var-benchmark": _var_benchmark}


def cmd_experiment(args):
    doc = _load_config(args.config)
    try:
        reports, csvs = EXPERIMENTS[args.name](doc, args)
    except (CausalRankError, TypeError, KeyError) as exc:
        raise CommandError(f"experiment {args.name} failed: {exc}", EXIT_INPUT) from exc
    if not os.path.isdir(args.out_dir):
        try:
            os.makedirs(args.out_dir)
        except OSError as exc:
            raise CommandError(f"cannot create {args.out_dir}: {exc.strerror or exc}", EXIT_IO) from exc
    report_doc = {"experiment": args.name, "reports": [r.to_dict() for r in reports]}
    _write(os.path.join(args.out_dir, "report.json"), json.dumps(report_doc, indent=2, sort_keys=True) + "\n")
    for fname, text in csvs.items():
        _write(os.path.join(args.out_dir, fname), text)
    for r in reports:
        means = " ".join(f"{s}={r.summary[s]['mean']:.6f}" for s in r.scorers)
        _log(args, f"{args.name} [{r.group}] mean AUC: {means}")
    return EXIT_OK


def cmd_evaluate(args):
    scores, _, _ = _read_input_matrix(args.scores, allow_inf=True)
    truth, _, _ = _read_input_matrix(args.truth)
    try:
        auc = evaluation.roc_auc(scores, truth, include_diagonal=args.include_diagonal)
    except CausalRankError as exc:
        raise CommandError(str(exc), EXIT_INPUT) from exc
    print(f"{auc:.6f}")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads (results do not depend on it)")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="no progress output on stderr")

    parser = argparse.ArgumentParser(prog="causalrank", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="score edges of a CSV time series")
    p.add_argument("algorithm", choices=sorted(algorithms.ALGORITHMS))
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("-p", "--param", action="append", metavar="KEY=VALUE", help="algorithm hyperparameter override")
    p.add_argument("--normalise", action="store_true", help="z-score columns before scoring")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("simulate", parents=[common], help="generate synthetic data with ground truth")
    p.add_argument("kind", choices=["sem", "var"])
    p.add_argument("--out-dir", required=True)
    p.add_argument("--model", help="JSON model file to sample from instead of a random model")
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--edge-prob", type=float, default=0.25)
    p.add_argument("--n", type=int, default=200, help="iid sample size (sem)")
    p.add_argument("--regime", choices=experiments.REGIMES, default="equal_error")
    p.add_argument("--decreasing-ratio", type=float, default=0.9)
    p.add_argument("--T", type=int, default=500, help="series length (var)")
    p.add_argument("--max-lag", type=int, default=1)
    p.add_argument("--transition", choices=datagen.TRANSITIONS, default="identity")
    p.add_argument("--spectral-radius", type=float, default=None)
    p.add_argument("--burn-in", type=int, default=200)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("experiment", parents=[common], help="run a named experiment")
    p.add_argument("name", choices=sorted(EXPERIMENTS))
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("evaluate", parents=[common], help="ROC-AUC of a score matrix against truth")
    p.add_argument("scores")
    p.add_argument("truth")
    p.add_argument("--include-diagonal", action="store_true")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.seed_given = hasattr(args, "seed")
    args.seed = getattr(args, "seed", DEFAULT_SEED)
    args.threads = getattr(args, "threads", 1)
    args.quiet = getattr(args, "quiet", False)
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"causalrank: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
