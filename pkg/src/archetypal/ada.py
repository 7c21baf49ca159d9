"""Archetypoid analysis: archetypes restricted to actual observations.

The BUILD step derives three candidate sets from a classical AA fit; the
SWAP step improves each by exhaustive best-improvement exchanges. On binary
data the resulting archetypal profiles are binary by construction.
"""

from dataclasses import dataclass, field

import numpy as np

from archetypal import _kernels
from archetypal.aa import FitOptions, _check_k, fit_aa
from archetypal.core import (
    DEFAULT_PENALTY,
    InvalidInputError,
    SolverError,
    nnls_tolerance,
    check_data,
)

__all__ = [
    "CandidateSet",
    "ArchetypoidModel",
    "candidate_sets",
    "swap_optimize",
    "fit_ada",
    "assign_by_max_alpha",
    "subset_rss",
]

INIT_LABELS = ("ns", "alpha", "beta", "user")

# exchanges must beat the incumbent by more than this
SWAP_TOL = 1e-9


@dataclass(frozen=True)
class CandidateSet:
    label: str
    indices: tuple

    def __post_init__(self):
        if self.label not in INIT_LABELS:
            raise InvalidInputError(f"unknown candidate label {self.label!r}")
        if len(set(self.indices)) != len(self.indices):
            raise InvalidInputError("candidate indices must be distinct")


@dataclass(frozen=True)
class ArchetypoidModel:
    """Archetypoids ``X[indices]`` with mixtures ``alpha`` (n x k)."""

    indices: tuple
    alpha: np.ndarray
    rss: float
    init_label: str
    profiles: np.ndarray = field(repr=False)
    rss_trace: tuple = field(default=(), repr=False)

    method = "ada"

    @property
    def k(self):
        return len(self.indices)


def _distinct_argmax(scores, n):
    """Per row of ``scores``, the best column not already taken.

    Rows are served in order; ties go to the lowest column index.
    """
    taken = set()
    chosen = []
    for row in scores:
        for c in np.argsort(-row, kind="stable"):
            c = int(c)
            if c not in taken:
                taken.add(c)
                chosen.append(c)
                break
    return tuple(chosen)


def candidate_sets(X, aa):
    """The three BUILD starting sets derived from an AA fit.

    ``ns``: nearest observation (Euclidean) to each archetype; ``alpha``:
    observation with the largest mixture weight on each archetype; ``beta``:
    observation with the largest weight in each archetype's definition.
    """
    X = check_data(X)
    n = X.shape[0]
    if aa.Z.shape[1] != X.shape[1] or aa.alpha.shape[0] != n or aa.beta.shape[1] != n:
        raise InvalidInputError("archetypal model does not match X")
    d2 = (
        np.einsum("ij,ij->i", aa.Z, aa.Z)[:, None]
        - 2.0 * aa.Z @ X.T
        + np.einsum("ij,ij->i", X, X)[None, :]
    )
    return (
        CandidateSet("ns", _distinct_argmax(-d2, n)),
        CandidateSet("alpha", _distinct_argmax(aa.alpha.T, n)),
        CandidateSet("beta", _distinct_argmax(aa.beta, n)),
    )


def _status_check(status):
    if status == _kernels.MAX_ITER:
        raise SolverError("penalized NNLS hit its iteration cap during SWAP")
    if status == _kernels.ZERO_SUM:
        raise SolverError("penalized NNLS returned the zero vector; increase penalty_weight")


def subset_rss(X, indices, penalty_weight=DEFAULT_PENALTY, gram=None):
    """Alphas and RSS of ``X`` reconstructed from the observations ``indices``."""
    X = check_data(X)
    K = np.ascontiguousarray(X @ X.T if gram is None else gram)
    sel = np.asarray(indices, dtype=np.int64)
    pen2 = float(penalty_weight) ** 2
    alpha = np.empty((X.shape[0], sel.size))
    tol = nnls_tolerance(sel.size, np.abs(K).max() + pen2)
    value, status = _kernels.subset_alpha_rss(K, sel, pen2, tol, 10 * sel.size, alpha)
    _status_check(status)
    return alpha, value


def swap_optimize(X, init, penalty_weight=DEFAULT_PENALTY, gram=None, max_passes=None):
    """Best-improvement SWAP from the starting set ``init``.

    Each pass evaluates every (selected, unselected) exchange by re-solving
    all alphas, applies the best one, and stops once no exchange lowers the
    RSS by more than ``SWAP_TOL``.
    """
    X = check_data(X)
    n = X.shape[0]
    label = init.label if isinstance(init, CandidateSet) else "user"
    indices = init.indices if isinstance(init, CandidateSet) else tuple(init)
    sel = np.asarray(indices, dtype=np.int64)
    if sel.ndim != 1 or sel.size < 1 or sel.min() < 0 or sel.max() >= n:
        raise InvalidInputError("initial indices out of range")
    if len(set(sel.tolist())) != sel.size:
        raise InvalidInputError("initial indices must be distinct")
    K = np.ascontiguousarray(X @ X.T if gram is None else gram)
    pen2 = float(penalty_weight) ** 2
    tol = nnls_tolerance(sel.size, np.abs(K).max() + pen2)
    cap = 10 * sel.size

    alpha, current = subset_rss(X, sel, penalty_weight, gram=K)
    trace = [current]
    passes = 0
    while sel.size < n and (max_passes is None or passes < max_passes):
        passes += 1
        value, pos, cand, status = _kernels.best_swap(K, sel, pen2, tol, cap)
        _status_check(status)
        if pos < 0 or not value < current - SWAP_TOL:
            break
        sel[pos] = cand
        alpha, current = subset_rss(X, sel, penalty_weight, gram=K)
        trace.append(current)
    return ArchetypoidModel(
        indices=tuple(int(i) for i in sel),
        alpha=alpha,
        rss=current,
        init_label=label,
        profiles=X[sel].copy(),
        rss_trace=tuple(trace),
    )


def fit_ada(X, k, opts=None, aa=None, gram=None):
    """Archetypoid analysis with the three-way BUILD and SWAP.

    Parameters
    ----------
    X : (n, m) array_like
    k : int
        Number of archetypoids.
    opts : FitOptions, optional
        Controls the internal AA fit and the penalty weight.
    aa : ArchetypalModel, optional
        Precomputed AA fit with the same ``k``; fitted when omitted.

    Returns
    -------
    ArchetypoidModel
        The lowest-RSS result over the three starting sets; ties keep the
        earlier label in the order ns, alpha, beta.
    """
    opts = opts or FitOptions()
    X = check_data(X)
    n = X.shape[0]
    k = _check_k(k, n)
    K = np.ascontiguousarray(X @ X.T if gram is None else gram)
    if aa is None:
        aa = fit_aa(X, k, opts, gram=K)
    elif aa.k != k:
        raise InvalidInputError("supplied AA model has a different k")
    best = None
    for cand in candidate_sets(X, aa):
        model = swap_optimize(X, cand, opts.penalty_weight, gram=K)
        if best is None or model.rss < best.rss:
            best = model
    return best


def assign_by_max_alpha(model):
    """Group label per observation: the archetype with the largest alpha.

    Ties go to the lowest archetype position. Labels are 0-based.
    """
    alpha = model.alpha if hasattr(model, "alpha") else np.asarray(model)
    return np.argmax(alpha, axis=1)
