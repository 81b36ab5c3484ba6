import os
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DimensionError, InputError

DEFAULT_SEED = 20191208


def child_rng(seed, *index):
    """Independent generator for ``(seed, *index)``; order of use is irrelevant."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, index)]))


def as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def parallel_map(fn, items, threads=1):
    """``list(map(fn, items))`` with optional threads; output keeps input order."""
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def ordered_sum(arrays, shape):
    acc = np.zeros(shape)
    for a in arrays:
        acc += a
    return acc


def as_series(data, min_rows=2):
    X = np.asarray(data, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DimensionError(f"time series must be 2-D (T x d), got {X.ndim}-D")
    if X.shape[1] < 1 or X.shape[0] < min_rows:
        raise InputError(f"time series needs at least {min_rows} rows and 1 column, got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError("time series contains non-finite values")
    return X


def center(X):
    return X - X.mean(axis=0)


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` via a temp file in the same directory."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
