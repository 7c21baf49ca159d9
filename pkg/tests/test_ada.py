import itertools

import numpy as np
import pytest

from archetypal.aa import FitOptions, fit_aa
from archetypal.ada import (
    CandidateSet,
    assign_by_max_alpha,
    candidate_sets,
    fit_ada,
    subset_rss,
    swap_optimize,
)
from archetypal.core import InvalidInputError
from oracles import binary_data, exhaustive_ada, sq_medoid
from oracles import subset_rss as oracle_subset_rss


def test_candidate_sets_match_brute_force_scans():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(20, 5))
    aa = fit_aa(X, 3, FitOptions(seed=0))
    sets = {c.label: c.indices for c in candidate_sets(X, aa)}

    def scan(score):
        taken, out = set(), []
        for j in range(3):
            order = sorted(range(20), key=lambda i: (-score(j, i), i))
            pick = next(i for i in order if i not in taken)
            taken.add(pick)
            out.append(pick)
        return tuple(out)

    assert sets["ns"] == scan(lambda j, i: -np.sum((X[i] - aa.Z[j]) ** 2))
    assert sets["alpha"] == scan(lambda j, i: aa.alpha[i, j])
    assert sets["beta"] == scan(lambda j, i: aa.beta[j, i])
    for idx in sets.values():
        assert len(set(idx)) == 3


def test_candidate_sets_trivial_cases():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(12, 3))
    aa = fit_aa(X, 3, FitOptions(seed=0))
    # put the archetypes into the data and rebuild the AA model around them
    X2 = np.vstack([X, aa.Z])
    beta = np.zeros((3, 15))
    beta[[0, 1, 2], [12, 13, 14]] = 1.0
    alpha = np.vstack([aa.alpha, np.eye(3)])
    model = type(aa)(k=3, Z=aa.Z, alpha=alpha, beta=beta, rss=0.0, iterations=0,
                     converged=True)
    sets = {c.label: c.indices for c in candidate_sets(X2, model)}
    assert sets["ns"] == (12, 13, 14)
    assert sets["beta"] == (12, 13, 14)


def test_benchmark_data_gives_rows_of_x():
    from archetypal.simulation import SimulationConfig, generate_dataset
    from archetypal.core import rss

    _, X = generate_dataset(SimulationConfig(), np.random.default_rng(0))
    model = fit_ada(X, 6, FitOptions(seed=0))
    assert len(set(model.indices)) == 6 and all(0 <= i < 100 for i in model.indices)
    np.testing.assert_array_equal(model.profiles, X[list(model.indices)])
    assert np.all((model.profiles == 0) | (model.profiles == 1))
    assert model.rss == pytest.approx(rss(X, model.alpha, model.profiles), abs=1e-8)
    np.testing.assert_allclose(model.alpha.sum(axis=1), 1, atol=1e-6)
    assert np.all(model.alpha >= 0)


def test_subset_rss_matches_scipy_oracle():
    X = np.random.default_rng(2).normal(size=(12, 4))
    alpha, value = subset_rss(X, (0, 5, 9))
    assert value == pytest.approx(oracle_subset_rss(X, (0, 5, 9)), abs=1e-8)
    assert np.all(alpha >= 0)
    np.testing.assert_allclose(alpha.sum(axis=1), 1.0, atol=1e-12)


def test_optimal_start_is_kept():
    X = binary_data(np.random.default_rng(3), 10, 4)
    _, best = exhaustive_ada(X, 2)
    model = swap_optimize(X, best)
    assert set(model.indices) == set(best)
    assert model.init_label == "user"
    assert len(model.rss_trace) == 1


def test_two_distinct_rows_repeated():
    u, v = np.array([1.0, 0, 1, 0]), np.array([0.0, 1, 1, 1])
    X = np.array([u, v] * 5)
    model = fit_ada(X, 2)
    assert model.rss < 1e-10
    assert {tuple(p) for p in model.profiles} == {tuple(u), tuple(v)}


def test_k2_matches_all_66_pairs():
    X = np.random.default_rng(4).normal(size=(12, 3))
    assert len(list(itertools.combinations(range(12), 2))) == 66
    best, _ = exhaustive_ada(X, 2)
    model = fit_ada(X, 2, FitOptions(seed=0))
    assert model.rss == pytest.approx(best, abs=1e-8)


def test_swap_trace_never_increases():
    X = binary_data(np.random.default_rng(5), 30, 6)
    model = swap_optimize(X, CandidateSet("ns", (0, 1, 2)))
    tr = model.rss_trace
    assert all(b <= a + 1e-9 for a, b in zip(tr, tr[1:]))
    assert model.init_label == "ns"


def test_k1_is_squared_distance_medoid():
    X = np.random.default_rng(6).normal(size=(15, 3))
    assert fit_ada(X, 1).indices == (sq_medoid(X),)


def test_binary_input_gives_binary_profiles():
    X = binary_data(np.random.default_rng(7), 25, 7)
    P = fit_ada(X, 3).profiles
    assert np.all((P == 0) | (P == 1))


def test_assign_ties_go_to_lowest_index():
    alpha = np.array([[0.5, 0.5, 0.0], [0.2, 0.4, 0.4], [0.0, 0.0, 1.0]])
    assert assign_by_max_alpha(alpha).tolist() == [0, 1, 2]


def test_input_validation():
    X = np.eye(5)
    with pytest.raises(InvalidInputError):
        swap_optimize(X, (0, 0))
    with pytest.raises(InvalidInputError):
        swap_optimize(X, (0, 9))
    with pytest.raises(InvalidInputError):
        CandidateSet("bogus", (0,))
    with pytest.raises(InvalidInputError):
        fit_ada(X, 2, aa=fit_aa(X, 3))


def test_assign_examples_and_counts():
    assert assign_by_max_alpha(np.array([[0.1, 0.8, 0.1]])).tolist() == [1]
    X = binary_data(np.random.default_rng(9), 30, 6)
    model = fit_ada(X, 3, FitOptions(seed=0))
    labels = assign_by_max_alpha(model)
    naive = [max(range(3), key=lambda j: (row[j], -j)) for row in model.alpha]
    assert labels.tolist() == naive


def test_ada_never_beats_aa_and_is_deterministic():
    for seed in range(5):
        X = binary_data(np.random.default_rng(100 + seed), 25, 6)
        opts = FitOptions(seed=seed)
        aa = fit_aa(X, 3, opts)
        a = fit_ada(X, 3, opts, aa=aa)
        assert a.rss >= aa.rss - 1e-9
        assert fit_ada(X, 3, opts).indices == fit_ada(X, 3, opts).indices
