"""Clustering baselines: simple-matching dissimilarity, PAM, k-means and
silhouette widths."""

from dataclasses import dataclass, field

import numpy as np
from sklearn.cluster import KMeans
from sklearn.metrics import silhouette_samples

from archetypal.aa import FitOptions, _check_k
from archetypal.core import InvalidInputError, check_data

__all__ = [
    "PamModel",
    "KMeansModel",
    "gower_binary",
    "fit_pam",
    "fit_kmeans",
    "silhouette",
]


@dataclass(frozen=True)
class PamModel:
    medoid_indices: tuple
    labels: np.ndarray
    total_cost: float
    cost_trace: tuple = field(default=(), repr=False)

    method = "pam"

    @property
    def k(self):
        return len(self.medoid_indices)


@dataclass(frozen=True)
class KMeansModel:
    centroids: np.ndarray
    labels: np.ndarray
    wcss: float

    method = "kmeans"

    @property
    def k(self):
        return self.centroids.shape[0]

    @property
    def profiles(self):
        return self.centroids


def gower_binary(X):
    """Gower dissimilarity for symmetric binary variables.

    Both states count as informative, so this is the simple-matching
    dissimilarity: mismatching coordinates divided by ``m``.
    """
    X = check_data(X, binary=True)
    m = X.shape[1]
    matches = X @ X.T + (1.0 - X) @ (1.0 - X).T
    return (m - matches) / m


def _check_dissimilarity(D):
    D = np.asarray(D, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise InvalidInputError("dissimilarity matrix must be square")
    if not np.all(np.isfinite(D)) or np.any(D < 0):
        raise InvalidInputError("dissimilarities must be finite and non-negative")
    if np.max(np.abs(D - D.T)) > 1e-12 or np.any(np.diag(D) != 0):
        raise InvalidInputError("dissimilarity matrix must be symmetric with zero diagonal")
    return D


def _cost(D, medoids):
    return float(D[:, medoids].min(axis=1).sum())


def fit_pam(D, k):
    """Partitioning around medoids: greedy BUILD, then best-improvement SWAP.

    Returns medoids in BUILD order (as updated by swaps), 0-based labels
    pointing into ``medoid_indices`` and the total dissimilarity of every
    point to its nearest medoid.
    """
    D = _check_dissimilarity(D)
    n = D.shape[0]
    k = _check_k(k, n)

    medoids = [int(np.argmin(D.sum(axis=0)))]
    nearest = D[:, medoids[0]].copy()
    while len(medoids) < k:
        gain = np.maximum(nearest[:, None] - D, 0.0).sum(axis=0)
        gain[medoids] = -np.inf
        j = int(np.argmax(gain))
        medoids.append(j)
        nearest = np.minimum(nearest, D[:, j])

    medoids = np.array(medoids)
    current = _cost(D, medoids)
    trace = [current]
    while k < n:
        best, best_pos, best_cand = current, -1, -1
        others = np.setdiff1d(np.arange(n), medoids)
        for pos in range(k):
            rest = np.delete(medoids, pos)
            keep = D[:, rest].min(axis=1) if rest.size else np.full(n, np.inf)
            costs = np.minimum(keep[:, None], D[:, others]).sum(axis=0)
            c = int(np.argmin(costs))
            if costs[c] < best:
                best, best_pos, best_cand = float(costs[c]), pos, int(others[c])
        if best_pos < 0 or not best < current - 1e-12 * max(1.0, current):
            break
        medoids[best_pos] = best_cand
        current = _cost(D, medoids)
        trace.append(current)

    labels = np.argmin(D[:, medoids], axis=1)
    return PamModel(
        medoid_indices=tuple(int(i) for i in medoids),
        labels=labels,
        total_cost=current,
        cost_trace=tuple(trace),
    )


def fit_kmeans(X, k, opts=None):
    """Lloyd's k-means with k-means++ seeding, best of ``opts.restarts``."""
    opts = opts or FitOptions()
    X = check_data(X)
    k = _check_k(k, X.shape[0])
    km = KMeans(
        n_clusters=k,
        init="k-means++",
        n_init=opts.restarts,
        max_iter=opts.max_iterations,
        tol=0.0,
        algorithm="lloyd",
        random_state=opts.seed % (2**32),
    ).fit(X)
    return KMeansModel(
        centroids=km.cluster_centers_, labels=km.labels_.astype(np.int64),
        wcss=float(km.inertia_),
    )


def silhouette(D, labels):
    """Silhouette widths from a precomputed dissimilarity matrix.

    Singleton clusters get width 0, as do points whose within- and
    between-cluster dissimilarities are both zero.

    Returns ``(widths, mean_width)``.
    """
    D = _check_dissimilarity(D)
    labels = np.asarray(labels)
    if labels.shape != (D.shape[0],):
        raise InvalidInputError("one label per observation is required")
    clusters = np.unique(labels)
    if clusters.size < 2:
        raise InvalidInputError("silhouette needs at least two clusters")
    if clusters.size == D.shape[0]:
        widths = np.zeros(D.shape[0])
    else:
        widths = silhouette_samples(D, labels, metric="precomputed")
    return widths, float(widths.mean())
