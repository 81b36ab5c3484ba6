"""Edge-scoring algorithms for multivariate time series.

Each algorithm maps a ``T x d`` series to a ``d x d`` nonnegative score
matrix ``S`` where ``S[i, j]`` ranks the edge ``X_i -> X_j``. Internally the
regressions produce response-major coefficients (row = effect), so every
algorithm transposes at the end. Data are never normalised here.

Bootstrap ``b`` draws from its own generator seeded by ``(seed, b)`` and the
per-bootstrap results are combined in index order, so the output does not
depend on ``threads``.
"""
from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np

from . import regression
from ._util import DEFAULT_SEED, as_series, center, child_rng, ordered_sum, parallel_map
from .errors import (
    DegenerateLeverageError,
    InputError,
    InsufficientSamplesError,
    SingularityError,
)


@dataclass
class SlaracConfig:
    max_lag: int = 5
    n_bootstraps: int = 200
    sample_sizes: Optional[Sequence[int]] = None
    seed: int = DEFAULT_SEED
    #: ``False`` uses every admissible time index once instead of resampling
    resample: bool = True

    def validate(self, T):
        if self.max_lag < 1 or self.n_bootstraps < 1:
            raise InputError("max_lag and n_bootstraps must be positive")
        if T <= self.max_lag:
            raise InputError(f"need T > max_lag, got T={T}, max_lag={self.max_lag}")
        if self.sample_sizes is not None:
            if len(self.sample_sizes) != self.n_bootstraps:
                raise InputError("sample_sizes must have one entry per bootstrap")
            if min(self.sample_sizes) < 1:
                raise InputError("bootstrap sample sizes must be >= 1")


@dataclass
class QrbsConfig:
    n_bootstraps: int = 200
    sample_size: Optional[int] = None
    ridge_penalty: float = 1.0
    quantile: float = 0.75
    seed: int = DEFAULT_SEED

    def validate(self, T):
        if self.n_bootstraps < 1:
            raise InputError("n_bootstraps must be positive")
        if self.sample_size is not None and self.sample_size < 1:
            raise InputError("sample_size must be >= 1")
        if not 0.0 <= self.quantile <= 1.0:
            raise InputError(f"quantile must lie in [0, 1], got {self.quantile}")
        if self.ridge_penalty < 0:
            raise InputError("ridge_penalty must be >= 0")
        if T < 2:
            raise InputError("QRBS needs at least two time points")


@dataclass
class LasarConfig:
    max_lag: int = 5
    n_bootstraps: int = 50
    sample_size: Optional[int] = None
    #: explicit penalties; ``None`` uses ``n_lambdas`` log-spaced values below
    #: each regression's own zeroing penalty
    lasso_lambda_grid: Optional[Sequence[float]] = None
    n_lambdas: int = 10
    lambda_min_ratio: float = 1e-3
    seed: int = DEFAULT_SEED

    def validate(self, T):
        if self.max_lag < 1 or self.n_bootstraps < 1:
            raise InputError("max_lag and n_bootstraps must be positive")
        if T <= self.max_lag:
            raise InputError(f"need T > max_lag, got T={T}, max_lag={self.max_lag}")
        if self.sample_size is not None and self.sample_size < 1:
            raise InputError("sample_size must be >= 1")
        if self.lasso_lambda_grid is not None:
            grid = np.asarray(self.lasso_lambda_grid, dtype=float)
            if grid.size == 0 or np.any(grid < 0):
                raise InputError("lasso_lambda_grid must be non-empty and nonnegative")
        elif self.n_lambdas < 1:
            raise InputError("n_lambdas must be positive")


@dataclass
class SelvarConfig:
    max_lag: int = 5
    max_hill_climb_steps: Optional[int] = None
    #: seeds the candidate visiting order, which only matters for exact ties
    seed: int = DEFAULT_SEED

    def validate(self, T):
        if self.max_lag < 1:
            raise InputError("max_lag must be positive")
        if T <= self.max_lag + 1:
            raise InputError(f"need T > max_lag + 1, got T={T}, max_lag={self.max_lag}")
        if self.max_hill_climb_steps is not None and self.max_hill_climb_steps < 1:
            raise InputError("max_hill_climb_steps must be positive")


def _lagged(X, t, lag):
    """Rows ``X[t - 1], ..., X[t - lag]`` side by side (``len(t) x d*lag``)."""
    return np.hstack([X[t - ell] for ell in range(1, lag + 1)])


def _lag_blocks_to_scores(A, d, L):
    """``d x dL`` response-major coefficients -> ``d x d`` max-over-lag, i->j."""
    return A.reshape(d, L, d).max(axis=1).T.copy()


def slarac(data, cfg=None, *, threads=1):
    """Subsampled linear auto-regression absolute coefficients.

    Every bootstrap draws a lag order uniformly from ``1..max_lag``,
    resamples time points, fits a VAR of that order by OLS and adds the
    zero-padded absolute coefficients to a running ``d x d*max_lag`` total.
    The score of ``i -> j`` is the largest accumulated entry over lags.
    """
    cfg = cfg or SlaracConfig()
    X = as_series(data)
    T, d = X.shape
    cfg.validate(T)
    L = cfg.max_lag
    sizes = cfg.sample_sizes or [T - L] * cfg.n_bootstraps

    def one(b):
        rng = child_rng(cfg.seed, b)
        lags = int(rng.integers(1, L + 1))
        if cfg.resample:
            t = rng.integers(lags, T, size=int(sizes[b]))
        else:
            t = np.arange(lags, T)
        beta = regression.ols_fit(_lagged(X, t, lags), X[t])
        out = np.zeros((d, d * L))
        out[:, : d * lags] = np.abs(beta)
        return out

    A_full = ordered_sum(parallel_map(one, range(cfg.n_bootstraps), threads), (d, d * L))
    return _lag_blocks_to_scores(A_full, d, L)


def qrbs(data, cfg=None, *, threads=1):
    """Quantiles of ridge-regressed bootstrap samples.

    Ridge-regresses increments ``X(t) - X(t-1)`` on ``X(t-1)`` for each
    bootstrap sample and returns the elementwise ``quantile`` of the absolute
    coefficient matrices.
    """
    cfg = cfg or QrbsConfig()
    X = as_series(data)
    T, d = X.shape
    cfg.validate(T)
    v = cfg.sample_size or T - 1

    def one(b):
        rng = child_rng(cfg.seed, b)
        t = rng.integers(1, T, size=v)
        coef = regression.ridge_fit(X[t - 1], X[t] - X[t - 1], cfg.ridge_penalty)
        return np.abs(coef)

    stack = np.stack(parallel_map(one, range(cfg.n_bootstraps), threads))
    return np.quantile(stack, cfg.quantile, axis=0).T.copy()


def _bic_pick(Z, r, path):
    """Index of the path entry with the lowest BIC (first one on ties)."""
    n = Z.shape[0]
    resid = r[:, None] - Z @ path.T
    rss = np.maximum(np.einsum("ij,ij->j", resid, resid), np.finfo(float).tiny)
    df = np.count_nonzero(path, axis=1)
    bic = n * np.log(rss / n) + df * np.log(n)
    return int(np.argmin(bic))


def _lasso_stage(Z, r, cfg):
    if cfg.lasso_lambda_grid is not None:
        grid = np.asarray(cfg.lasso_lambda_grid, dtype=float)
    else:
        lam_max = regression.lasso_lambda_max(Z, r)
        if lam_max == 0.0:
            return np.zeros(Z.shape[1])
        grid = lam_max * np.logspace(0.0, np.log10(cfg.lambda_min_ratio), cfg.n_lambdas)
    path = regression.lasso_path(Z, r, grid)
    if path.shape[0] == 1:
        return path[0]
    return path[_bic_pick(Z, r, path)]


def lasar(data, cfg=None, *, threads=1):
    """LASSO auto-regression with lag-wise residual refitting.

    For each bootstrap sample and response, stage 1 LASSO-regresses the
    response on lag-1 values, and each later stage regresses the previous
    stage's residual on values one step further back. The union of selected
    ``(predictor, lag)`` pairs is refitted by OLS; absolute coefficients are
    averaged over bootstraps and maximised over lags.

    Without an explicit ``lasso_lambda_grid`` the penalty of each stage is
    picked by BIC from a log-spaced grid below that stage's zeroing penalty.
    """
    cfg = cfg or LasarConfig()
    X = as_series(data)
    T, d = X.shape
    cfg.validate(T)
    L = cfg.max_lag
    v = cfg.sample_size or T - L

    def one(b):
        rng = child_rng(cfg.seed, b)
        t = rng.integers(L, T, size=v)
        Y = center(X[t])
        lagged = [center(X[t - ell]) for ell in range(1, L + 1)]
        out = np.zeros((d, L, d))
        for j in range(d):
            r = Y[:, j]
            cols = []
            for ell in range(L):
                coef = _lasso_stage(lagged[ell], r, cfg)
                chosen = np.flatnonzero(coef)
                cols.extend((ell, int(i)) for i in chosen)
                r = r - lagged[ell] @ coef
            if not cols:
                continue
            Z = np.column_stack([lagged[ell][:, i] for ell, i in cols])
            beta = np.abs(regression.ols_fit(Z, Y[:, j]))
            for (ell, i), val in zip(cols, beta):
                out[j, ell, i] = val
        return out

    total = ordered_sum(parallel_map(one, range(cfg.n_bootstraps), threads), (d, L, d))
    return (total / cfg.n_bootstraps).max(axis=1).T.copy()


_SKIP = (DegenerateLeverageError, SingularityError, InsufficientSamplesError)


def _hill_climb(Z, y, budget, order):
    """Greedy add/remove search minimising leave-one-out RSS.

    Returns the sorted selected column indices.
    """
    selected = set()
    base = regression.loo_rss(Z[:, :0], y)
    current = base
    for _ in range(budget):
        best, best_val = None, current
        for c in order:
            trial = sorted(selected ^ {c})
            try:
                val = regression.loo_rss(Z[:, trial], y)
            except _SKIP:
                continue
            if val < best_val:
                best, best_val = c, val
        # ignore improvements at rounding level, e.g. after an exact fit
        if best is None or best_val >= current - max(1e-10 * current, 1e-12 * base):
            break
        selected ^= {best}
        current = best_val
    return sorted(selected)


def selvar(data, cfg=None, *, threads=1):
    """Selective VAR: hill-climbing lag selection scored by OLS magnitudes.

    For each response the search starts empty and repeatedly toggles the one
    ``(predictor, lag)`` pair that lowers the leave-one-out RSS the most.
    Selected pairs are refitted by OLS; the score of ``i -> j`` is the largest
    absolute coefficient of ``X_i`` over lags, zero if never selected.
    """
    cfg = cfg or SelvarConfig()
    X = as_series(data)
    T, d = X.shape
    cfg.validate(T)
    L = cfg.max_lag
    budget = cfg.max_hill_climb_steps or 2 * d * L
    t = np.arange(L, T)
    Z = center(_lagged(X, t, L))
    Y = center(X[t])

    def one(j):
        order = child_rng(cfg.seed, j).permutation(d * L)
        chosen = _hill_climb(Z, Y[:, j], budget, order)
        row = np.zeros(d * L)
        if chosen:
            row[chosen] = np.abs(regression.ols_fit(Z[:, chosen], Y[:, j]))
        return row

    A = np.vstack(parallel_map(one, range(d), threads))
    return _lag_blocks_to_scores(A, d, L)


ALGORITHMS = {
    "slarac": (slarac, SlaracConfig),
    "qrbs": (qrbs, QrbsConfig),
    "lasar": (lasar, LasarConfig),
    "selvar": (selvar, SelvarConfig),
}


def make_config(name, seed=None, **overrides):
    """Build the config for algorithm ``name``, rejecting unknown keys."""
    if name not in ALGORITHMS:
        raise InputError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}")
    cls = ALGORITHMS[name][1]
    known = {f.name for f in fields(cls)}
    bad = set(overrides) - known
    if bad:
        raise InputError(f"unknown {name} parameter(s): {', '.join(sorted(bad))}")
    if seed is not None:
        overrides["seed"] = seed
    return cls(**overrides)


def run_algorithm(name, data, cfg=None, *, threads=1):
    fn, cls = ALGORITHMS[name] if name in ALGORITHMS else (None, None)
    if fn is None:
        raise InputError(f"unknown algorithm {name!r}")
    return fn(data, cfg or cls(), threads=threads)
