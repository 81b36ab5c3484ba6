"""Experiment runners.

``run_scaling_experiment`` compares coefficient and T-statistic edge scoring
on iid samples from random acyclic SEMs under three variance regimes;
``run_algorithm_benchmark`` runs the time-series algorithms on simulated VAR
data. Repetition ``r`` draws everything from a generator seeded by
``(master_seed, r)``, so records do not depend on each other or on threads.
"""
import csv
import io
import json
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy.stats import spearmanr

from . import algorithms, datagen, evaluation
from ._util import DEFAULT_SEED, parallel_map
from .errors import InputError

REGIMES = ("equal_error", "equal_marginal", "decreasing_marginal")


@dataclass
class ScalingExperimentConfig:
    d: int = 50
    n: int = 200
    repetitions: int = 100
    edge_prob: float = 0.25
    regime: str = "equal_error"
    decreasing_ratio: float = 0.9
    master_seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.d < 2 or self.n <= self.d or self.repetitions < 1:
            raise InputError("need d >= 2, n > d and repetitions >= 1")
        if self.regime not in REGIMES:
            raise InputError(f"unknown regime {self.regime!r}; choose from {REGIMES}")
        if not 0.0 < self.decreasing_ratio:
            raise InputError("decreasing_ratio must be positive")


@dataclass
class VarGeneratorSpec:
    d: int = 5
    T: int = 500
    max_lag: int = 1
    edge_prob: float = 0.3
    coef_range: Tuple[float, float] = (0.4, 0.8)
    self_coef: float = 0.3
    spectral_radius: Optional[float] = None
    noise_sigma: float = 1.0
    transition: str = "identity"
    burn_in: int = 200

    def model(self, rng):
        return datagen.random_var(
            self.d,
            self.edge_prob,
            max_lag=self.max_lag,
            coef_range=tuple(self.coef_range),
            self_coef=self.self_coef,
            spectral_radius=self.spectral_radius,
            noise_sigma=self.noise_sigma,
            transition=self.transition,
            seed=rng,
        )


@dataclass
class ExperimentReport:
    name: str
    group: str
    config: dict
    scorers: List[str]
    records: List[dict]
    mean_variance: Optional[List[float]] = None
    summary: dict = field(default_factory=dict)

    def aucs(self, scorer):
        return np.array([r[f"auc_{scorer}"] for r in self.records])

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def auc_rows(self):
        return [
            (self.group, r["repetition"], s, r[f"auc_{s}"]) for r in self.records for s in self.scorers
        ]

    def variance_rows(self):
        if self.mean_variance is None:
            return []
        return [(self.group, k, v) for k, v in enumerate(self.mean_variance)]


def repetition_seed(master_seed, repetition):
    state = np.random.SeedSequence([int(master_seed), int(repetition)]).generate_state(1, np.uint64)
    return int(state[0])


def summarise(records, scorers, paired=None):
    out = {}
    for s in scorers:
        a = np.array([r[f"auc_{s}"] for r in records])
        out[s] = {"mean": float(a.mean()), "std": float(a.std(ddof=1)) if a.size > 1 else 0.0}
    if paired is not None:
        first, second = paired
        diff = np.array([r[f"auc_{first}"] - r[f"auc_{second}"] for r in records])
        mean = float(diff.mean())
        se = float(diff.std(ddof=1) / np.sqrt(diff.size)) if diff.size > 1 else float("nan")
        out["paired_difference"] = {
            "minuend": first,
            "subtrahend": second,
            "mean": mean,
            "se": se,
            "t_ratio": mean / se if se > 0 else float("nan"),
        }
    return out


def _regime_model(cfg, rng):
    model = datagen.random_sem(cfg.d, cfg.edge_prob, seed=rng)
    if cfg.regime == "equal_marginal":
        model = datagen.rescale_sem(model, np.ones(cfg.d))
    elif cfg.regime == "decreasing_marginal":
        model = datagen.rescale_sem(model, datagen.decreasing_targets(cfg.d, cfg.decreasing_ratio))
    return model


def _scaling_repetition(cfg, r):
    seed = repetition_seed(cfg.master_seed, r)
    rng = np.random.default_rng(seed)
    model = _regime_model(cfg, rng)
    X = datagen.sample_sem(model, cfg.n, seed=rng)
    truth = model.adjacency()
    record = {
        "repetition": r,
        "seed": seed,
        "auc_coef": evaluation.roc_auc(evaluation.coef_scores(X), truth),
        "auc_tstat": evaluation.roc_auc(evaluation.tstat_scores(X), truth),
    }
    return record, datagen.marginal_variances(model)


def run_scaling_experiment(cfg, *, threads=1):
    """Coefficient vs T-statistic AUC on random SEMs for one variance regime."""
    outcomes = parallel_map(lambda r: _scaling_repetition(cfg, r), range(cfg.repetitions), threads)
    records = [rec for rec, _ in outcomes]
    mean_var = np.mean([mv for _, mv in outcomes], axis=0)
    return ExperimentReport(
        name="iid-scaling",
        group=cfg.regime,
        config=asdict(cfg),
        scorers=["coef", "tstat"],
        records=records,
        mean_variance=mean_var.tolist(),
        summary=summarise(records, ["coef", "tstat"], paired=("coef", "tstat")),
    )


def variance_profile(cfg):
    """Marginal variance by causal index, averaged over the repetitions' models."""
    profiles = [
        datagen.marginal_variances(
            _regime_model(cfg, np.random.default_rng(repetition_seed(cfg.master_seed, r)))
        )
        for r in range(cfg.repetitions)
    ]
    return np.mean(profiles, axis=0)


def mean_spearman(cfg):
    """Average over repetitions of Spearman(causal index, marginal variance)."""
    idx = np.arange(cfg.d)
    vals = []
    for r in range(cfg.repetitions):
        model = _regime_model(cfg, np.random.default_rng(repetition_seed(cfg.master_seed, r)))
        vals.append(spearmanr(idx, datagen.marginal_variances(model))[0])
    return float(np.mean(vals))


def run_algorithm_benchmark(generator, algorithm_configs, repetitions, master_seed=DEFAULT_SEED, *, threads=1):
    """AUC of each ``(name, config)`` pair on ``repetitions`` simulated VARs.

    Each repetition reseeds every algorithm config with the repetition seed.
    """
    if repetitions < 1:
        raise InputError("repetitions must be positive")
    names = [name for name, _ in algorithm_configs]
    if len(set(names)) != len(names):
        raise InputError("algorithm names must be unique within a benchmark")

    def one(r):
        seed = repetition_seed(master_seed, r)
        rng = np.random.default_rng(seed)
        model = generator.model(rng)
        X, truth = datagen.sample_var(model, generator.T, generator.burn_in, seed=rng)
        record = {"repetition": r, "seed": seed}
        for name, cfg in algorithm_configs:
            cfg = replace(cfg, seed=seed) if cfg is not None else algorithms.make_config(name, seed=seed)
            scores = algorithms.run_algorithm(name, X, cfg)
            record[f"auc_{name}"] = evaluation.roc_auc(scores, truth)
        return record

    records = parallel_map(one, range(repetitions), threads)
    return ExperimentReport(
        name="var-benchmark",
        group=generator.transition,
        config={
            "generator": asdict(generator),
            "algorithms": [
                {"name": n, "config": asdict(c) if c is not None else None} for n, c in algorithm_configs
            ],
            "repetitions": repetitions,
            "master_seed": master_seed,
        },
        scorers=names,
        records=records,
        summary=summarise(records, names),
    )


def auc_csv(reports, group_header="regime", scorer_header="scorer"):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([group_header, "repetition", scorer_header, "auc"])
    for rep in reports:
        for g, r, s, a in rep.auc_rows():
            w.writerow([g, r, s, repr(float(a))])
    return buf.getvalue()


def variance_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["regime", "causal_index", "mean_variance"])
    for rep in reports:
        for g, k, v in rep.variance_rows():
            w.writerow([g, k, repr(float(v))])
    return buf.getvalue()
