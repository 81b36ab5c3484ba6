"""Synthetic data with known summary graphs.

Two families:

* acyclic linear Gaussian SEMs ``X = B X + N`` with strictly lower-triangular
  ``B`` (iid samples), plus rescaling to prescribed marginal variances;
* stationary VAR(L) processes ``X(t) = g(sum_l A_l X(t-l)) + N(t)`` with an
  optional monotone elementwise transition ``g``.
"""
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from ._util import as_rng
from .errors import (
    DegenerateModelError,
    DimensionError,
    InputError,
    InstabilityError,
    StationarityError,
)

TRANSITIONS = ("identity", "tanh", "quadratic-saturating")
BLOWUP = 1e12
_QUAD_CLIP = 4.0


@dataclass
class SemModel:
    b_matrix: np.ndarray
    sigma: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        self.b_matrix = np.array(self.b_matrix, dtype=np.float64)
        self.sigma = np.array(self.sigma, dtype=np.float64).reshape(-1)
        B = self.b_matrix
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DimensionError(f"B must be square, got shape {B.shape}")
        if self.sigma.shape != (B.shape[0],):
            raise DimensionError("sigma must have one entry per variable")
        if np.any(np.triu(B) != 0):
            raise InputError("B must be strictly lower triangular")
        if not np.all(self.sigma > 0):
            raise InputError("noise standard deviations must be positive")

    @property
    def d(self):
        return self.b_matrix.shape[0]

    def adjacency(self):
        """``(i, j) = 1`` iff ``X_i`` enters the equation of ``X_j``."""
        return (self.b_matrix != 0).T.astype(np.int64)

    def to_dict(self):
        return {
            "kind": "sem",
            "b_matrix": self.b_matrix.tolist(),
            "sigma": self.sigma.tolist(),
            "seed": self.seed,
        }


def _transition_fn(name):
    if name == "identity":
        return lambda z: z
    if name == "tanh":
        return np.tanh
    if name == "quadratic-saturating":

        def quad(z):
            c = np.clip(z, -_QUAD_CLIP, _QUAD_CLIP)
            return c + 0.1 * c * c

        return quad
    raise InputError(f"unknown transition {name!r}; choose from {TRANSITIONS}")


def companion_spectral_radius(lag_coefficients):
    A = np.asarray(lag_coefficients, dtype=np.float64)
    L, d, _ = A.shape
    comp = np.zeros((d * L, d * L))
    comp[:d, :] = np.hstack(list(A))
    if L > 1:
        comp[d:, :-d] = np.eye(d * (L - 1))
    return float(np.max(np.abs(np.linalg.eigvals(comp))))


@dataclass
class VarModel:
    lag_coefficients: np.ndarray
    noise_sigma: np.ndarray
    transition: str = "identity"
    seed: Optional[int] = None
    spectral_radius: float = field(init=False)

    def __post_init__(self):
        A = np.array(self.lag_coefficients, dtype=np.float64)
        if A.ndim == 2:
            A = A[None]
        if A.ndim != 3 or A.shape[1] != A.shape[2] or A.shape[0] < 1:
            raise DimensionError(f"lag coefficients must be L x d x d, got shape {A.shape}")
        self.lag_coefficients = A
        self.noise_sigma = np.array(self.noise_sigma, dtype=np.float64).reshape(-1)
        if self.noise_sigma.shape != (A.shape[1],):
            raise DimensionError("noise_sigma must have one entry per variable")
        if not np.all(self.noise_sigma > 0):
            raise InputError("noise standard deviations must be positive")
        _transition_fn(self.transition)
        self.spectral_radius = companion_spectral_radius(A)
        if not self.spectral_radius < 1.0:
            raise StationarityError(
                f"companion spectral radius {self.spectral_radius:.6f} >= 1; process is not stationary"
            )

    @property
    def d(self):
        return self.lag_coefficients.shape[1]

    @property
    def max_lag(self):
        return self.lag_coefficients.shape[0]

    def adjacency(self):
        """``(i, j) = 1`` iff some ``A_l[j, i]`` is nonzero (diagonal included)."""
        return np.any(self.lag_coefficients != 0, axis=0).T.astype(np.int64)

    def to_dict(self):
        return {
            "kind": "var",
            "lag_coefficients": self.lag_coefficients.tolist(),
            "sigma": self.noise_sigma.tolist(),
            "transition": self.transition,
            "seed": self.seed,
        }


def model_to_json(model):
    return json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n"


def model_from_json(text):
    doc = json.loads(text)
    kind = doc.get("kind") or ("var" if "lag_coefficients" in doc else "sem")
    if kind == "sem":
        return SemModel(doc["b_matrix"], doc["sigma"], seed=doc.get("seed"))
    if kind == "var":
        return VarModel(
            doc["lag_coefficients"],
            doc["sigma"],
            transition=doc.get("transition", "identity"),
            seed=doc.get("seed"),
        )
    raise InputError(f"unknown model kind {kind!r}")


def random_sem(d, edge_prob=0.25, seed=None):
    """Strictly lower-triangular ``B`` with Bernoulli support and N(0, 1) weights.

    All noise standard deviations are 1.
    """
    if d < 1:
        raise InputError("d must be positive")
    if not 0.0 <= edge_prob <= 1.0:
        raise InputError(f"edge_prob must lie in [0, 1], got {edge_prob}")
    rng = as_rng(seed)
    mask = rng.random((d, d)) < edge_prob
    weights = rng.standard_normal((d, d))
    B = np.tril(np.where(mask, weights, 0.0), -1)
    return SemModel(B, np.ones(d), seed=seed if isinstance(seed, (int, np.integer)) else None)


def sample_sem(model, n, seed=None):
    """``n`` iid draws of ``(I - B)^{-1} N`` with column means removed."""
    if n < 1:
        raise InputError("n must be positive")
    rng = as_rng(seed)
    d = model.d
    noise = rng.standard_normal((n, d)) * model.sigma
    # rows x satisfy (I - B) x = noise_row
    X = solve_triangular(np.eye(d) - model.b_matrix, noise.T, lower=True).T
    return X - X.mean(axis=0)


def implied_covariance(model):
    d = model.d
    M = solve_triangular(np.eye(d) - model.b_matrix, np.eye(d), lower=True)
    return (M * model.sigma**2) @ M.T


def marginal_variances(model):
    """Diagonal of ``(I - B)^{-1} diag(sigma^2) (I - B)^{-T}``."""
    return np.diag(implied_covariance(model)).copy()


def rescale_sem(model, targets):
    """Rescale rows of ``B`` and ``sigma`` so marginal variances hit ``targets``.

    Variables are processed in causal order; row ``i`` is scaled by
    ``sqrt(target_i / v_i)`` where ``v_i`` is its variance implied by the
    already rescaled predecessors. Zero entries of ``B`` stay zero.
    """
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    d = model.d
    if targets.shape != (d,):
        raise DimensionError("targets must have one entry per variable")
    if not np.all(targets > 0):
        raise InputError("target variances must be positive")
    B = model.b_matrix.copy()
    sigma = model.sigma.copy()
    cov = np.zeros((d, d))
    for i in range(d):
        b = B[i, :i]
        cross = cov[:i, :i] @ b
        v = float(b @ cross + sigma[i] ** 2)
        if not v > 0:
            raise DegenerateModelError(f"variable {i} has zero implied variance")
        c = np.sqrt(targets[i] / v)
        B[i, :i] *= c
        sigma[i] *= c
        cov[i, :i] = cov[:i, i] = c * cross
        cov[i, i] = targets[i]
    return SemModel(B, sigma, seed=model.seed)


def decreasing_targets(d, ratio=0.9):
    return ratio ** np.arange(d, dtype=np.float64)


def random_var(
    d,
    edge_prob=0.3,
    *,
    max_lag=1,
    coef_range=(0.4, 0.8),
    self_coef=0.3,
    spectral_radius=None,
    noise_sigma=1.0,
    transition="identity",
    seed=None,
):
    """Random sparse VAR with signed off-diagonal weights.

    Off-diagonal entries of each lag matrix are nonzero with probability
    ``edge_prob`` and magnitude uniform on ``coef_range``; the lag-1 diagonal
    is ``self_coef``. If ``spectral_radius`` is given the coefficients are
    scaled so the companion matrix has exactly that radius; otherwise they are
    shrunk only when needed to reach 0.9. A requested radius >= 1 raises
    :class:`StationarityError`.
    """
    if spectral_radius is not None and not spectral_radius < 1.0:
        raise StationarityError(f"requested spectral radius {spectral_radius} >= 1")
    if not 0.0 <= edge_prob <= 1.0:
        raise InputError(f"edge_prob must lie in [0, 1], got {edge_prob}")
    rng = as_rng(seed)
    lo, hi = coef_range
    A = np.zeros((max_lag, d, d))
    offdiag = ~np.eye(d, dtype=bool)
    for ell in range(max_lag):
        mask = (rng.random((d, d)) < edge_prob) & offdiag
        mag = rng.uniform(lo, hi, (d, d))
        sign = rng.choice([-1.0, 1.0], size=(d, d))
        A[ell] = np.where(mask, mag * sign, 0.0)
    A[0][np.diag_indices(d)] = self_coef
    rho = companion_spectral_radius(A)
    target = spectral_radius
    if target is None and rho > 0.9:
        target = 0.9
    if target is not None and rho > 0:
        # companion radius scales with c only for L=1; iterate for higher lags
        for _ in range(100):
            A *= target / rho
            rho = companion_spectral_radius(A)
            if abs(rho - target) < 1e-12:
                break
    sig = np.broadcast_to(np.asarray(noise_sigma, dtype=float), (d,))
    return VarModel(
        A, sig, transition=transition, seed=seed if isinstance(seed, (int, np.integer)) else None
    )


def sample_var(model, T, burn_in=200, seed=None):
    """Simulate ``T`` observations after discarding ``burn_in`` warm-up steps.

    Returns ``(series, adjacency)``.
    """
    if T < 1 or burn_in < 0:
        raise InputError("T must be positive and burn_in nonnegative")
    rng = as_rng(seed)
    g = _transition_fn(model.transition)
    A = model.lag_coefficients
    L, d, _ = A.shape
    total = T + burn_in
    noise = rng.standard_normal((total, d)) * model.noise_sigma
    X = np.zeros((total + L, d))
    for t in range(L, total + L):
        drive = np.zeros(d)
        for ell in range(L):
            drive += A[ell] @ X[t - ell - 1]
        X[t] = g(drive) + noise[t - L]
        if np.max(np.abs(X[t])) > BLOWUP:
            raise InstabilityError(f"simulation diverged at step {t - L}")
    return X[L + burn_in:].copy(), model.adjacency()
