import os
import subprocess
import sys

import numpy as np
import pytest

from causalrank import _kernels

needs_numba = pytest.mark.skipif(not _kernels.NUMBA_AVAILABLE, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("seed", range(5))
def test_lasso_paths_agree(seed):
    r = np.random.default_rng(seed)
    X = r.standard_normal((80, 7))
    y = X[:, 0] - 2 * X[:, 4] + r.standard_normal(80)
    gram, xty = X.T @ X / 80, X.T @ y / 80
    b1, b2 = np.zeros(7), np.zeros(7)
    s1 = _kernels.lasso_cd_numpy(gram, xty, 0.05, b1, 1e-10, 10_000)
    s2 = _kernels.lasso_cd_numba(gram, xty, 0.05, b2, 1e-10, 10_000)
    assert s1 == s2
    np.testing.assert_allclose(b1, b2, rtol=1e-12, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("seed", range(5))
def test_loo_paths_agree(seed):
    r = np.random.default_rng(seed)
    X = r.standard_normal((60, 5))
    y = r.standard_normal(60)
    a = _kernels.loo_parts_numpy(X, y)
    b = _kernels.loo_parts_numba(X, y)
    np.testing.assert_allclose(a, b, rtol=1e-10)


def test_env_flag_selects_numpy(tmp_path):
    code = "from causalrank import _kernels as k; print(k.USE_NUMBA, k.lasso_cd is k.lasso_cd_numpy)"
    env = dict(os.environ, CAUSALRANK_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]
