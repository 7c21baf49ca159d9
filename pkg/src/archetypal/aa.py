"""Classical archetype analysis by alternating convex least squares."""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from archetypal.core import (
    DEFAULT_PENALTY,
    DegenerateDataWarning,
    InvalidInputError,
    check_data,
    pnnls_rows,
    rss,
)

__all__ = ["FitOptions", "ArchetypalModel", "fit_aa", "rss_curve", "initial_indices"]


@dataclass(frozen=True)
class FitOptions:
    """Knobs shared by the iterative fitters.

    ``tolerance`` is the relative objective improvement below which a run
    is considered converged.
    """

    tolerance: float = 1e-6
    max_iterations: int = 100
    restarts: int = 10
    seed: int = 0
    penalty_weight: float = DEFAULT_PENALTY

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidInputError("tolerance must be positive")
        if self.restarts < 1:
            raise InvalidInputError("restarts must be at least 1")
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be at least 1")
        if not self.penalty_weight > 0:
            raise InvalidInputError("penalty_weight must be positive")


@dataclass(frozen=True)
class ArchetypalModel:
    """Fitted archetypes ``Z = beta @ X`` and mixtures ``alpha``.

    ``rss_trace`` holds the objective after initialization and after every
    alternation; it is non-increasing.
    """

    k: int
    Z: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    rss: float
    iterations: int
    converged: bool
    rss_trace: tuple = field(default=(), repr=False)

    method = "aa"

    @property
    def profiles(self):
        return self.Z


def _check_k(k, n):
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise InvalidInputError(f"k must be an integer, got {k!r}")
    if k < 1 or k > n:
        raise InvalidInputError(f"k must be in [1, {n}], got {k}")
    return int(k)


def initial_indices(X, k, rng):
    """Draw ``k`` distinct observation indices, preferring distinct rows."""
    n = X.shape[0]
    _, first = np.unique(X, axis=0, return_index=True)
    first = np.sort(first)
    if first.size >= k:
        return np.sort(rng.choice(first, size=k, replace=False))
    rest = np.setdiff1d(np.arange(n), first)
    extra = rng.choice(rest, size=k - first.size, replace=False)
    return np.sort(np.concatenate([first, extra]))


def _alpha_step(X, Z, penalty):
    return pnnls_rows(Z @ Z.T, X @ Z.T, penalty)


def _run(X, K, beta, alpha, opts):
    Z = beta @ X
    if alpha is None:
        alpha = _alpha_step(X, Z, opts.penalty_weight)
    current = rss(X, alpha, Z)
    trace = [current]
    converged = False
    it = 0
    for it in range(1, opts.max_iterations + 1):
        previous = current

        a_new = _alpha_step(X, Z, opts.penalty_weight)
        r_new = rss(X, a_new, Z)
        if r_new <= current:
            alpha, current = a_new, r_new

        # least-squares archetypes for fixed alpha, then pull them back into
        # the convex hull of the data
        Z_free = scipy.linalg.lstsq(alpha, X, lapack_driver="gelsy")[0]
        b_new = pnnls_rows(K, Z_free @ X.T, opts.penalty_weight)
        Z_new = b_new @ X
        r_new = rss(X, alpha, Z_new)
        if r_new <= current:
            beta, Z, current = b_new, Z_new, r_new

        trace.append(current)
        if previous - current <= opts.tolerance * previous:
            converged = True
            break
    return ArchetypalModel(
        k=beta.shape[0],
        Z=Z,
        alpha=alpha,
        beta=beta,
        rss=current,
        iterations=it,
        converged=converged,
        rss_trace=tuple(trace),
    )


def _indicator(indices, n):
    beta = np.zeros((len(indices), n))
    beta[np.arange(len(indices)), indices] = 1.0
    return beta


def fit_aa(X, k, opts=None, init_indices=None, init_beta=None, init_alpha=None,
           gram=None):
    """Fit ``k`` archetypes to the rows of ``X``.

    Each restart starts from ``k`` distinct observations (``beta`` rows are
    indicators). Supplying ``init_indices`` or ``init_beta`` adds one extra
    run from that starting point; ``init_alpha`` seeds its mixtures.

    Returns the lowest-RSS run.
    """
    opts = opts or FitOptions()
    X = check_data(X)
    n = X.shape[0]
    k = _check_k(k, n)
    if k > 1 and np.all(X == X[0]):
        warnings.warn(
            "all observations are identical; archetypes will coincide",
            DegenerateDataWarning,
            stacklevel=2,
        )
    K = X @ X.T if gram is None else gram

    starts = []
    if init_beta is not None:
        init_beta = np.asarray(init_beta, dtype=np.float64)
        if init_beta.shape != (k, n):
            raise InvalidInputError(f"init_beta must have shape {(k, n)}")
        starts.append((init_beta, init_alpha))
    if init_indices is not None:
        idx = np.asarray(init_indices, dtype=np.int64)
        if idx.shape != (k,) or len(set(idx.tolist())) != k or idx.min() < 0 or idx.max() >= n:
            raise InvalidInputError("init_indices must be k distinct row indices")
        starts.append((_indicator(idx, n), None))
    rng = np.random.default_rng(opts.seed)
    n_random = opts.restarts if not starts else opts.restarts - 1
    for _ in range(max(n_random, 0)):
        starts.append((_indicator(initial_indices(X, k, rng), n), None))

    best = None
    for beta0, alpha0 in starts:
        model = _run(X, K, beta0, alpha0, opts)
        if best is None or model.rss < best.rss:
            best = model
    return best


def rss_curve(X, k_values, opts=None):
    """Best RSS for each ``k``, for choosing ``k`` at the elbow.

    Every ``k`` after the smallest one is also warm-started from the
    previous solution plus its worst-reconstructed observation(s), which
    makes the curve non-increasing.

    Returns a list of ``(k, rss)`` pairs sorted by ``k``.
    """
    opts = opts or FitOptions()
    X = check_data(X)
    n = X.shape[0]
    ks = sorted({_check_k(k, n) for k in k_values}) if len(k_values) else []
    if not ks:
        raise InvalidInputError("k_values is empty")
    K = X @ X.T
    curve = []
    previous = None
    for k in ks:
        if previous is None:
            model = fit_aa(X, k, opts, gram=K)
        else:
            beta0, alpha0 = _grow(X, previous, k)
            model = fit_aa(X, k, replace(opts, restarts=opts.restarts + 1),
                           init_beta=beta0, init_alpha=alpha0, gram=K)
        curve.append((k, model.rss))
        previous = model
    return curve


def _grow(X, model, k):
    """Pad a fitted model with its worst-reconstructed observations."""
    n = X.shape[0]
    resid = X - model.alpha @ model.Z
    order = np.argsort(-np.einsum("ij,ij->i", resid, resid), kind="stable")
    extra = order[: k - model.k]
    beta = np.vstack([model.beta, _indicator(extra, n)])
    alpha = np.hstack([model.alpha, np.zeros((n, k - model.k))])
    return beta, alpha
