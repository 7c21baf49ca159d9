"""Probabilistic archetype analysis for binary observations.

Archetypal profiles live in the Bernoulli parameter space: ``Zp = beta @ X``
gives a success probability per archetype and variable, and observation
``i`` responds positively to variable ``h`` with probability
``(alpha @ Zp)[i, h]``. Both mixture matrices are fitted by alternating
projected-gradient ascent on the log-likelihood.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from archetypal.aa import FitOptions, _check_k, _indicator, initial_indices
from archetypal.core import check_data

__all__ = ["PAAModel", "bernoulli_loglik", "fit_paa", "paa_options", "project_simplex_rows"]

CLAMP = 1e-6
ARMIJO = 1e-4
MAX_HALVINGS = 60


@dataclass(frozen=True)
class PAAModel:
    Zp: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    loglik: float
    iterations: int
    loglik_trace: tuple = field(default=(), repr=False)

    method = "paa"

    @property
    def k(self):
        return self.Zp.shape[0]

    @property
    def profiles(self):
        return self.Zp


def project_simplex_rows(V):
    """Euclidean projection of each row of ``V`` onto the probability simplex.

    Sort-based algorithm (Held, Wolfe and Crowder; Duchi et al.).
    """
    V = np.atleast_2d(np.asarray(V, dtype=np.float64))
    p = V.shape[1]
    U = -np.sort(-V, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    ind = np.arange(1, p + 1)
    cond = U - css / ind > 0
    rho = p - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(V.shape[0]), rho] / (rho + 1)
    return np.maximum(V - theta[:, None], 0.0)


def _probabilities(alpha, Zp):
    return np.clip(alpha @ Zp, CLAMP, 1.0 - CLAMP)


def _loglik(X, P):
    return float(np.sum(X * np.log(P) + (1.0 - X) * np.log1p(-P)))


def bernoulli_loglik(X, alpha, Zp):
    """Bernoulli log-likelihood of binary ``X`` under ``alpha @ Zp``.

    Probabilities are clamped to ``[1e-6, 1 - 1e-6]``.
    """
    X = check_data(X, binary=True)
    return _loglik(X, _probabilities(np.asarray(alpha, float), np.asarray(Zp, float)))


def _ascent_step(value_of, grad, W, current, step):
    """Backtracking projected-gradient step from ``W``.

    Returns (W_new, value_new, step_used); ``W_new is W`` when no step
    satisfies the Armijo condition.
    """
    for _ in range(MAX_HALVINGS):
        W_new = project_simplex_rows(W + step * grad)
        delta = W_new - W
        value = value_of(W_new)
        if value >= current + ARMIJO * float(np.sum(grad * delta)) and value >= current:
            return W_new, value, step
        step *= 0.5
    return W, current, step


def _run(X, beta, opts):
    n, m = X.shape
    k = beta.shape[0]
    alpha = np.full((n, k), 1.0 / k)
    Zp = beta @ X
    current = _loglik(X, _probabilities(alpha, Zp))
    trace = [current]
    step_a = step_b = 1.0
    it = 0
    for it in range(1, opts.max_iterations + 1):
        previous = current

        P = _probabilities(alpha, Zp)
        D = X / P - (1.0 - X) / (1.0 - P)
        alpha, current, step_a = _ascent_step(
            lambda A: _loglik(X, _probabilities(A, Zp)), D @ Zp.T, alpha, current, step_a
        )
        step_a = min(1.0, 2.0 * step_a)

        P = _probabilities(alpha, Zp)
        D = X / P - (1.0 - X) / (1.0 - P)
        beta, current, step_b = _ascent_step(
            lambda B: _loglik(X, _probabilities(alpha, B @ X)),
            alpha.T @ D @ X.T,
            beta,
            current,
            step_b,
        )
        step_b = min(1.0, 2.0 * step_b)
        Zp = beta @ X

        trace.append(current)
        if current - previous <= opts.tolerance * abs(previous):
            break
    return PAAModel(
        Zp=Zp, alpha=alpha, beta=beta, loglik=current, iterations=it,
        loglik_trace=tuple(trace),
    )


def fit_paa(X, k, opts=None):
    """Fit ``k`` probabilistic archetypes to binary ``X``.

    Each restart starts ``beta`` at ``k`` distinct observations and
    ``alpha`` at uniform weights. Returns the highest-likelihood run.
    """
    opts = opts or paa_options()
    X = check_data(X, binary=True)
    n = X.shape[0]
    k = _check_k(k, n)
    rng = np.random.default_rng(opts.seed)
    best = None
    for _ in range(opts.restarts):
        beta0 = _indicator(initial_indices(X, k, rng), n)
        model = _run(X, beta0, opts)
        if best is None or model.loglik > best.loglik:
            best = model
    return best


def paa_options(opts=None):
    """PAA defaults (200 iterations, relative tolerance 1e-10), keeping the
    seed and restart count of ``opts`` when given.

    Projected gradient creeps towards the optimum, so the AA default
    tolerance would stop it well short.
    """
    base = FitOptions(max_iterations=200, tolerance=1e-10)
    if opts is None:
        return base
    return replace(base, seed=opts.seed, restarts=opts.restarts)
