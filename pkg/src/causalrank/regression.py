"""Dense linear regression kernels.

Conventions: design matrices are ``n x p`` (rows are samples), responses are
``n x m`` or length ``n``; coefficient matrices are ``m x p`` so that entry
``(j, i)`` is the weight of predictor ``i`` for response ``j``. No intercept
is ever fitted; callers centre columns when they want one.
"""
import numpy as np

from . import _kernels
from .errors import (
    ConvergenceError,
    DegenerateLeverageError,
    DimensionError,
    InputError,
    InsufficientSamplesError,
    SingularityError,
)

#: relative singular-value cutoff for minimum-norm solves
RCOND = 1e-12
LEVERAGE_LIMIT = 1.0 - 1e-12


def _as_design(X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DimensionError(f"design matrix must be 2-D and non-empty, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError("design matrix contains non-finite values")
    return X


def _as_response(Y, n):
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim not in (1, 2):
        raise DimensionError(f"response must be 1-D or 2-D, got {Y.ndim}-D")
    if Y.shape[0] != n:
        raise DimensionError(f"response has {Y.shape[0]} rows, design has {n}")
    if not np.all(np.isfinite(Y)):
        raise InputError("response contains non-finite values")
    return Y


def ols_fit(X, Y):
    """Least-squares coefficients of ``Y`` on ``X``.

    Rank-deficient designs get the minimum-norm solution (singular values
    below ``RCOND`` times the largest are dropped).

    Returns an ``m x p`` array, or a length-``p`` vector when ``Y`` is 1-D.
    """
    X = _as_design(X)
    Y = _as_response(Y, X.shape[0])
    coef = np.linalg.lstsq(X, Y, rcond=RCOND)[0]
    return coef.T.copy() if coef.ndim == 2 else coef


def ridge_fit(X, Y, kappa):
    """Minimise ``||Y - X A'||_F^2 + kappa ||A||_F^2`` in closed form.

    ``kappa == 0`` falls back to :func:`ols_fit` so that singular designs
    still get the minimum-norm answer.
    """
    if not np.isfinite(kappa) or kappa < 0:
        raise InputError(f"ridge penalty must be finite and >= 0, got {kappa}")
    X = _as_design(X)
    Y = _as_response(Y, X.shape[0])
    if kappa == 0:
        return ols_fit(X, Y)
    p = X.shape[1]
    lhs = X.T @ X + kappa * np.eye(p)
    coef = np.linalg.solve(lhs, X.T @ Y)
    return coef.T.copy() if coef.ndim == 2 else coef


def lasso_fit(X, y, lam, *, tol=1e-6, max_sweeps=10_000, warm_start=None):
    """LASSO by cyclic coordinate descent.

    Minimises ``(1/2n) ||y - X b||^2 + lam * ||b||_1``. Iteration stops once
    the largest coefficient change in a sweep drops below ``tol``.

    Raises
    ------
    ConvergenceError
        If ``max_sweeps`` sweeps pass without meeting ``tol``.
    """
    if not np.isfinite(lam) or lam < 0:
        raise InputError(f"lasso penalty must be finite and >= 0, got {lam}")
    X = _as_design(X)
    y = _as_response(y, X.shape[0])
    if y.ndim != 1:
        raise DimensionError("lasso_fit takes a single response vector")
    n, p = X.shape
    gram = (X.T @ X) / n
    xty = (X.T @ y) / n
    return _lasso_gram(gram, xty, lam, tol, max_sweeps, warm_start)


def _lasso_gram(gram, xty, lam, tol, max_sweeps, warm_start):
    p = gram.shape[0]
    beta = np.zeros(p) if warm_start is None else np.array(warm_start, dtype=np.float64)
    if beta.shape != (p,):
        raise DimensionError(f"warm start must have length {p}")
    sweeps, converged = _kernels.lasso_cd(gram, xty, float(lam), beta, float(tol), int(max_sweeps))
    if not converged:
        raise ConvergenceError(
            f"coordinate descent did not converge in {sweeps} sweeps (lambda={lam})", sweeps
        )
    return beta


def lasso_path(X, y, lambdas, *, tol=1e-6, max_sweeps=10_000):
    """Fit the LASSO along ``lambdas`` (sorted decreasing) with warm starts.

    Returns a ``len(lambdas) x p`` array in the order the penalties were given.
    """
    X = _as_design(X)
    y = _as_response(y, X.shape[0])
    lambdas = np.asarray(lambdas, dtype=np.float64)
    if lambdas.ndim != 1 or lambdas.size == 0:
        raise InputError("lambda grid must be a non-empty 1-D sequence")
    if np.any(lambdas < 0) or not np.all(np.isfinite(lambdas)):
        raise InputError("lambda grid entries must be finite and >= 0")
    n, p = X.shape
    gram = (X.T @ X) / n
    xty = (X.T @ y) / n
    out = np.empty((lambdas.size, p))
    beta = None
    for k in np.argsort(-lambdas, kind="stable"):
        beta = _lasso_gram(gram, xty, lambdas[k], tol, max_sweeps, beta)
        out[k] = beta
    return out


def lasso_lambda_max(X, y):
    """Smallest penalty at which the LASSO solution is identically zero."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return float(np.max(np.abs(X.T @ y)) / X.shape[0])


def loo_rss(X, y):
    """Leave-one-out residual sum of squares via the hat-matrix shortcut.

    Computes ``sum_k (e_k / (1 - h_k))**2`` with OLS residuals ``e`` and
    leverages ``h`` without refitting. An empty design (``p == 0``) predicts
    zero, so the result is ``sum(y**2)``.
    """
    y = np.asarray(y, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimensionError(f"design shape {X.shape} does not match response length {y.shape[0]}")
    n, p = X.shape
    if p == 0:
        return float(y @ y)
    if n <= p:
        raise InsufficientSamplesError(f"loo_rss needs n > p, got n={n}, p={p}")
    rss, max_lev, dmin, dmax = _kernels.loo_parts(np.ascontiguousarray(X), np.ascontiguousarray(y))
    if dmax == 0.0 or dmin <= RCOND * dmax:
        raise SingularityError("design is rank deficient")
    if max_lev >= LEVERAGE_LIMIT:
        raise DegenerateLeverageError(f"leverage {max_lev!r} is numerically 1")
    return float(rss)


def _precision(X):
    """Inverse Gram matrix via SVD; raises if the design is singular."""
    _, s, vt = np.linalg.svd(X, full_matrices=False)
    if s[0] == 0.0 or s[-1] <= RCOND * s[0]:
        raise SingularityError("columns are (numerically) collinear")
    return (vt.T / s**2) @ vt


def residual_stats(X):
    """Residual variances and partial correlations of the columns of ``X``.

    Returns
    -------
    resvar : ndarray of shape (d,)
        ``RSS_j / (n - d + 1)`` from regressing column ``j`` on all others.
    pcorr : ndarray of shape (d, d)
        Correlation between columns ``i`` and ``j`` after both are regressed
        on the remaining ``d - 2`` columns; unit diagonal.

    Both come from the inverse Gram matrix ``P``: ``RSS_j = 1 / P_jj`` and
    ``pcorr_ij = -P_ij / sqrt(P_ii P_jj)``.
    """
    X = _as_design(X)
    n, d = X.shape
    if n <= d:
        raise InsufficientSamplesError(f"residual_stats needs n > d, got n={n}, d={d}")
    prec = _precision(X)
    diag = np.diag(prec)
    rss = 1.0 / diag
    resvar = rss / (n - d + 1)
    scale = np.sqrt(diag)
    pcorr = -prec / np.outer(scale, scale)
    np.fill_diagonal(pcorr, 1.0)
    np.clip(pcorr, -1.0, 1.0, out=pcorr)
    return resvar, pcorr
