import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_force_loo(X, y):
    n = X.shape[0]
    total = 0.0
    for k in range(n):
        keep = np.arange(n) != k
        b = np.linalg.solve(X[keep].T @ X[keep], X[keep].T @ y[keep])
        total += (y[k] - X[k] @ b) ** 2
    return total


def pair_count_auc(values, labels):
    pos = values[labels]
    neg = values[~labels]
    wins = 0.0
    for p in pos:
        for q in neg:
            wins += 1.0 if p > q else 0.5 if p == q else 0.0
    return wins / (pos.size * neg.size)


def textbook_tstats(X):
    """|b / se(b)| for each column regressed on the others plus an intercept."""
    n, d = X.shape
    T = np.zeros((d, d))
    for j in range(d):
        others = [k for k in range(d) if k != j]
        Z = np.column_stack([np.ones(n), X[:, others]])
        beta = np.linalg.solve(Z.T @ Z, Z.T @ X[:, j])
        resid = X[:, j] - Z @ beta
        sigma2 = resid @ resid / (n - Z.shape[1])
        se = np.sqrt(sigma2 * np.diag(np.linalg.inv(Z.T @ Z)))
        T[others, j] = np.abs(beta[1:] / se[1:])
    return T


ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
