"""Inner loops with a numba and a pure-numpy implementation.

The numba path is used when numba imports and ``CAUSALRANK_DISABLE_NUMBA``
is unset or ``0``. Both paths perform the same arithmetic in the same order,
so they agree to rounding; each path on its own is bitwise deterministic.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("CAUSALRANK_DISABLE_NUMBA", "0") in ("", "0")


def _soft_threshold(z, lam):
    if z > lam:
        return z - lam
    if z < -lam:
        return z + lam
    return 0.0


def lasso_cd_numpy(gram, xty, lam, beta, tol, max_sweeps):
    """Cyclic coordinate descent on the covariance form of the LASSO.

    ``gram`` is X'X/n and ``xty`` is X'y/n. ``beta`` is updated in place.
    Returns ``(sweeps, converged)``.
    """
    p = gram.shape[0]
    for sweep in range(max_sweeps):
        max_delta = 0.0
        for j in range(p):
            gjj = gram[j, j]
            old = beta[j]
            if gjj <= 0.0:
                new = 0.0
            else:
                rho = xty[j] - gram[j] @ beta + gjj * old
                new = _soft_threshold(rho, lam) / gjj
            delta = abs(new - old)
            if delta > max_delta:
                max_delta = delta
            beta[j] = new
        if max_delta < tol:
            return sweep + 1, True
    return max_sweeps, False


def loo_parts_numpy(X, y):
    """Return ``(rss_loo, max_leverage, min_abs_rdiag, max_abs_rdiag)``."""
    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    fitted = q @ (q.T @ y)
    resid = y - fitted
    lev = np.einsum("ij,ij->i", q, q)
    max_lev = lev.max()
    if max_lev >= 1.0:
        return np.inf, max_lev, diag.min(), diag.max()
    rss = np.sum((resid / (1.0 - lev)) ** 2)
    return rss, max_lev, diag.min(), diag.max()


if NUMBA_AVAILABLE:

    @numba.njit(cache=True)
    def _soft_threshold_nb(z, lam):
        if z > lam:
            return z - lam
        if z < -lam:
            return z + lam
        return 0.0

    @numba.njit(cache=True)
    def lasso_cd_numba(gram, xty, lam, beta, tol, max_sweeps):
        p = gram.shape[0]
        for sweep in range(max_sweeps):
            max_delta = 0.0
            for j in range(p):
                gjj = gram[j, j]
                old = beta[j]
                if gjj <= 0.0:
                    new = 0.0
                else:
                    acc = 0.0
                    for k in range(p):
                        acc += gram[j, k] * beta[k]
                    rho = xty[j] - acc + gjj * old
                    new = _soft_threshold_nb(rho, lam) / gjj
                delta = abs(new - old)
                if delta > max_delta:
                    max_delta = delta
                beta[j] = new
            if max_delta < tol:
                return sweep + 1, True
        return max_sweeps, False

    @numba.njit(cache=True)
    def loo_parts_numba(X, y):
        n, p = X.shape
        q, r = np.linalg.qr(X)
        dmin = np.inf
        dmax = 0.0
        for k in range(p):
            a = abs(r[k, k])
            if a < dmin:
                dmin = a
            if a > dmax:
                dmax = a
        qty = np.zeros(p)
        for k in range(p):
            acc = 0.0
            for i in range(n):
                acc += q[i, k] * y[i]
            qty[k] = acc
        rss = 0.0
        max_lev = 0.0
        for i in range(n):
            fit = 0.0
            lev = 0.0
            for k in range(p):
                fit += q[i, k] * qty[k]
                lev += q[i, k] * q[i, k]
            if lev > max_lev:
                max_lev = lev
            if lev < 1.0:
                e = (y[i] - fit) / (1.0 - lev)
                rss += e * e
        if max_lev >= 1.0:
            rss = np.inf
        return rss, max_lev, dmin, dmax

else:  # pragma: no cover
    lasso_cd_numba = None
    loo_parts_numba = None


if USE_NUMBA:
    lasso_cd = lasso_cd_numba
    loo_parts = loo_parts_numba
else:
    lasso_cd = lasso_cd_numpy
    loo_parts = loo_parts_numpy
