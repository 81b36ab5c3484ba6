"""Edge-ranking evaluation and iid edge scorers.

:func:`roc_auc` compares a score matrix against a binary adjacency matrix.
:func:`coef_scores` and :func:`tstat_scores` score edges in iid data by the
absolute node-wise regression coefficient and by its T-statistic.
"""
import warnings

import numpy as np
from scipy.stats import rankdata

from ._util import center
from .errors import (
    DimensionError,
    InputError,
    InsufficientSamplesError,
    SingularityError,
    UndefinedAUCError,
)
from .regression import RCOND, residual_stats


class SingularDesignWarning(UserWarning):
    pass


def _edge_mask(d, include_diagonal):
    return np.ones((d, d), dtype=bool) if include_diagonal else ~np.eye(d, dtype=bool)


def roc_auc(scores, truth, include_diagonal=False):
    """Probability that a random true edge outscores a random non-edge.

    Ties count one half (midrank convention). ``+inf`` scores rank above
    every finite score. The diagonal is skipped unless ``include_diagonal``.
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth)
    if scores.shape != truth.shape or scores.ndim != 2 or scores.shape[0] != scores.shape[1]:
        raise DimensionError(f"score shape {scores.shape} and truth shape {truth.shape} must be equal and square")
    if np.any(np.isnan(scores)):
        raise InputError("scores contain NaN")
    if not np.all(np.isin(truth, (0, 1))):
        raise InputError("truth must be binary")
    mask = _edge_mask(scores.shape[0], include_diagonal)
    return auc_from_labels(scores[mask], truth[mask].astype(bool))


def auc_from_labels(values, labels):
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAUCError(
            f"AUC undefined with {n_pos} positive and {n_neg} negative edges"
        )
    ranks = rankdata(values, method="average")
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def _design(data):
    X = np.asarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionError("data must be an n x d matrix")
    n, d = X.shape
    if d < 2:
        raise InputError("edge scoring needs at least two variables")
    if n <= d:
        raise InsufficientSamplesError(f"need n > d, got n={n}, d={d}")
    if not np.all(np.isfinite(X)):
        raise InputError("data contain non-finite values")
    return center(X)


def _nodewise_coefficients(X):
    """``C[i, j]`` = coefficient of column ``i`` when column ``j`` is regressed on the rest."""
    n, d = X.shape
    C = np.zeros((d, d))
    singular = False
    for j in range(d):
        others = np.delete(np.arange(d), j)
        coef, _, rank, _ = np.linalg.lstsq(X[:, others], X[:, j], rcond=RCOND)
        singular |= rank < d - 1
        C[others, j] = coef
    return C, singular


def coef_scores(data, return_info=False):
    """``S[i, j] = |b_{i->j}|`` from regressing column ``j`` on all others.

    Columns are centred first (a no-op on centred data). Collinear designs
    use the minimum-norm solution and emit :class:`SingularDesignWarning`;
    with ``return_info=True`` the flag is also returned as
    ``(scores, {"singular": bool})``.
    """
    X = _design(data)
    C, singular = _nodewise_coefficients(X)
    if singular:
        warnings.warn("collinear design; using minimum-norm coefficients", SingularDesignWarning)
    S = np.abs(C)
    np.fill_diagonal(S, 0.0)
    if return_info:
        return S, {"singular": singular}
    return S


def tstat_scores(data, return_info=False):
    r"""Absolute T-statistics of the node-wise regression coefficients.

    .. math::

        |t_{i\to j}| = |b_{i\to j}|
            \sqrt{\frac{\widehat{var}(X_i|X_{-i})}{\widehat{var}(X_j|X_{-j})}}
            \sqrt{\frac{n-d}{1-\widehat{corr}^2(X_i, X_j | X_{-\{i,j\}})}}

    With centred columns ``n - d`` are the residual degrees of freedom of the
    regression of ``X_j`` on the other ``d - 1`` columns plus an intercept, so
    this equals ``b / se(b)`` of that regression exactly.

    Entries whose partial correlation is numerically +-1 are ``+inf``; those
    positions are reported in ``info["infinite"]`` when ``return_info``.
    """
    X = _design(data)
    n, d = X.shape
    try:
        resvar, pcorr = residual_stats(X)
        C, singular = _nodewise_coefficients(X)
    except SingularityError:
        return _tstat_singular(X, return_info)
    ratio = np.sqrt(np.outer(resvar, 1.0 / resvar))
    one_minus = 1.0 - pcorr**2
    infinite = one_minus <= 1e-12
    np.fill_diagonal(infinite, False)
    with np.errstate(divide="ignore", invalid="ignore"):
        T = np.abs(C) * ratio * np.sqrt((n - d) / one_minus)
    T[infinite] = np.inf
    np.fill_diagonal(T, 0.0)
    if return_info:
        return T, {"singular": singular, "infinite": infinite}
    return T


def _tstat_singular(X, return_info):
    """Collinear columns: pairs with unit partial correlation get ``+inf``, the rest 0."""
    n, d = X.shape
    warnings.warn("collinear design; T-statistics partly infinite", SingularDesignWarning)
    infinite = np.zeros((d, d), dtype=bool)
    for i in range(d):
        for j in range(i + 1, d):
            rest = [k for k in range(d) if k not in (i, j)]
            ri, rj = X[:, i], X[:, j]
            if rest:
                Z = X[:, rest]
                ri = ri - Z @ np.linalg.lstsq(Z, ri, rcond=RCOND)[0]
                rj = rj - Z @ np.linalg.lstsq(Z, rj, rcond=RCOND)[0]
            denom = np.sqrt((ri @ ri) * (rj @ rj))
            if denom > 0 and 1.0 - (ri @ rj / denom) ** 2 <= 1e-12:
                infinite[i, j] = infinite[j, i] = True
    T = np.where(infinite, np.inf, 0.0)
    if return_info:
        return T, {"singular": True, "infinite": infinite}
    return T
