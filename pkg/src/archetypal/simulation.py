"""Synthetic binary benchmark: recover known binary archetypes with PAA,
AA and ADA and count misclassified bits after optimal matching.

Seeding: replication ``r`` draws its data from
``SeedSequence(seed, spawn_key=(r, 0))`` and seeds its fitters from
``SeedSequence(seed, spawn_key=(r, 1))``, so replications are independent
of each other and of execution order.
"""

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from archetypal.aa import FitOptions, fit_aa
from archetypal.ada import fit_ada
from archetypal.core import InvalidInputError
from archetypal.paa import fit_paa, paa_options

__all__ = [
    "SimulationConfig",
    "SimulationReport",
    "generate_dataset",
    "salt_pepper",
    "binarize",
    "hamming",
    "match_error",
    "run_benchmark",
    "METHODS",
    "WORKERS_ENV",
]

METHODS = ("PAA", "AA", "ADA")
WORKERS_ENV = "ARCHETYPAL_WORKERS"
EXHAUSTIVE_MAX_K = 8


@dataclass(frozen=True)
class SimulationConfig:
    """Design of the benchmark.

    ``dirichlet_conc = 0`` is the vertex limit of the Dirichlet: every
    observation is a single (noisy) archetype. With
    ``per_observation_noise`` each observation gets its own salt-and-pepper
    copy of the archetypes; by default one corrupted copy generates all of
    them.
    """

    k: int = 6
    m: int = 10
    n: int = 100
    bernoulli_p: float = 0.7
    dirichlet_conc: float = 0.8
    noise_density: float = 0.05
    gauss_sd: float = 0.1
    binarize_threshold: float = 0.5
    replications: int = 100
    seed: int = 0
    per_observation_noise: bool = False

    def __post_init__(self):
        for name in ("k", "m", "n", "replications"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be at least 1")
        for name in ("bernoulli_p", "noise_density"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidInputError(f"{name} must lie in [0, 1]")
        if self.dirichlet_conc < 0 or self.gauss_sd < 0:
            raise InvalidInputError("dirichlet_conc and gauss_sd must be non-negative")
        if self.k > self.n:
            raise InvalidInputError("k cannot exceed n")


@dataclass
class SimulationReport:
    config: SimulationConfig
    errors: dict
    winners: list
    failures: list = field(default_factory=list)
    profiles: list = field(default_factory=list, repr=False)

    def mean(self, method):
        e = self.errors[method]
        return float(np.nanmean(e))

    def sd(self, method):
        e = self.errors[method]
        e = e[~np.isnan(e)]
        return float(np.std(e, ddof=1)) if e.size > 1 else 0.0

    def summary(self):
        return {
            "config": asdict(self.config),
            "methods": {
                name: {
                    "mean": round(self.mean(name), 6),
                    "sd": round(self.sd(name), 6),
                    "n": int(np.sum(~np.isnan(self.errors[name]))),
                }
                for name in METHODS
            },
            "wins": {
                name: sum(1 for w in self.winners if name in w) for name in METHODS
            },
            "failures": [list(f) for f in self.failures],
        }


def salt_pepper(M, density, rng):
    """Set a ``density`` fraction of entries to 0 or 1 with equal odds.

    Each entry is hit independently; half the hits land on the value the
    entry already had, so about ``density / 2`` of the entries flip.
    """
    if not 0.0 <= density <= 1.0:
        raise InvalidInputError("density must lie in [0, 1]")
    M = np.asarray(M, dtype=np.float64)
    hit = rng.random(M.shape) < density
    value = (rng.random(M.shape) < 0.5).astype(np.float64)
    return np.where(hit, value, M)


def binarize(M, threshold=0.5):
    """1 where the entry is strictly above ``threshold``, else 0."""
    M = np.asarray(M, dtype=np.float64)
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("cannot binarize non-finite values")
    return (M > threshold).astype(np.float64)


def hamming(u, v):
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise InvalidInputError(f"length mismatch: {u.shape} vs {v.shape}")
    return int(np.count_nonzero(u != v))


def _dirichlet(conc, k, size, rng):
    if conc == 0:
        return np.eye(k)[rng.integers(0, k, size=size)]
    return rng.dirichlet(np.full(k, conc), size=size)


def generate_dataset(cfg, rng):
    """True archetypes ``A`` (k x m) and binary observations ``X`` (n x m).

    Observation ``i`` is the binarized ``h_i' A~ + e_i`` where ``A~`` is a
    salt-and-pepper corruption of ``A`` (redrawn per observation when
    ``cfg.per_observation_noise``), ``h_i`` is Dirichlet and ``e_i``
    Gaussian.
    """
    A = (rng.random((cfg.k, cfg.m)) < cfg.bernoulli_p).astype(np.float64)
    H = _dirichlet(cfg.dirichlet_conc, cfg.k, cfg.n, rng)
    if cfg.per_observation_noise:
        X = np.empty((cfg.n, cfg.m))
        for i in range(cfg.n):
            X[i] = H[i] @ salt_pepper(A, cfg.noise_density, rng)
    else:
        X = H @ salt_pepper(A, cfg.noise_density, rng)
    X = X + rng.normal(0.0, cfg.gauss_sd, size=(cfg.n, cfg.m))
    return A, binarize(X, cfg.binarize_threshold)


def match_error(Z_est, A_true):
    """Smallest total Hamming distance over row matchings.

    Returns ``(error, perm)`` with ``Z_est[perm]`` row-aligned to
    ``A_true``. Exhaustive over permutations for k <= 8, Hungarian
    assignment otherwise.
    """
    Z = np.asarray(Z_est)
    A = np.asarray(A_true)
    if Z.shape != A.shape or Z.ndim != 2:
        raise InvalidInputError(f"shape mismatch: {Z.shape} vs {A.shape}")
    k = A.shape[0]
    # cost[j, l]: bits wrong if estimated row l plays true archetype j
    cost = np.count_nonzero(A[:, None, :] != Z[None, :, :], axis=2)
    if k <= EXHAUSTIVE_MAX_K:
        perms = np.array(list(itertools.permutations(range(k))), dtype=np.int64)
        totals = cost[np.arange(k), perms].sum(axis=1)
        best = int(np.argmin(totals))
        return int(totals[best]), perms[best].copy()
    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum()), cols.astype(np.int64)


def _replication(args):
    cfg, r = args
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(r, 0)))
    fit_seed = int(np.random.SeedSequence(cfg.seed, spawn_key=(r, 1)).generate_state(1)[0])
    A, X = generate_dataset(cfg, rng)
    opts = FitOptions(seed=fit_seed)
    errors = {}
    failures = []
    profiles = {"TRUE": A}
    aa = None
    for method in METHODS:
        try:
            if method == "PAA":
                est = binarize(fit_paa(X, cfg.k, paa_options(opts)).Zp)
            elif method == "AA":
                aa = fit_aa(X, cfg.k, opts)
                est = binarize(aa.Z)
            else:
                est = fit_ada(X, cfg.k, opts, aa=aa).profiles
            err, perm = match_error(est, A)
            errors[method] = err
            profiles[method] = est[perm]
        except Exception as exc:  # recorded, not fatal
            errors[method] = math.nan
            failures.append((r, method, f"{type(exc).__name__}: {exc}"))
    return r, errors, failures, profiles


def _workers():
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InvalidInputError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def run_benchmark(cfg, workers=None, progress=None):
    """Run every replication and collect per-method misclassification errors.

    Fit failures are recorded in ``failures`` and leave NaN in the error
    vector. ``workers`` defaults to the ``ARCHETYPAL_WORKERS`` environment
    variable (1 when unset).
    """
    jobs = [(cfg, r) for r in range(cfg.replications)]
    workers = workers or _workers()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replication, jobs))
    else:
        results = []
        for job in jobs:
            results.append(_replication(job))
            if progress is not None:
                progress(job[1] + 1, cfg.replications)
    results.sort(key=lambda res: res[0])

    errors = {name: np.full(cfg.replications, math.nan) for name in METHODS}
    winners = []
    failures = []
    profiles = []
    for r, errs, fails, profs in results:
        for name in METHODS:
            errors[name][r] = errs[name]
        valid = {name: e for name, e in errs.items() if not math.isnan(e)}
        low = min(valid.values()) if valid else math.nan
        winners.append(tuple(name for name in METHODS if valid.get(name) == low))
        failures.extend(fails)
        profiles.append(profs)
    return SimulationReport(cfg, errors, winners, failures, profiles)
