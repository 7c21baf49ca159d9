import itertools
from pathlib import Path

import numpy as np
import pytest

from archetypal.aa import FitOptions
from archetypal.ada import fit_ada
from archetypal.core import InvalidInputError
from archetypal.functional import (
    BasisRepresentation,
    bspline_knots,
    explained_variability,
    fit_faa,
    fit_fada,
    functional_rss,
    gram_bspline,
    whiten,
)
from oracles import simplex_weights, trapezoid_gram

FIXTURES = Path(__file__).parent / "fixtures"
CURVES = FIXTURES / "item_curves_60.csv"


def random_spd(rng, m):
    A = rng.normal(size=(m, m))
    return A @ A.T + m * np.eye(m)


def test_order_one_gram_is_identity_for_unit_knots():
    W = gram_bspline(1, np.arange(6.0))
    np.testing.assert_allclose(W, np.eye(5), atol=1e-14)


def test_cubic_gram_is_banded():
    W = gram_bspline(4, bspline_knots(-3, 3, 11))
    i, j = np.indices(W.shape)
    assert np.all(np.abs(W[np.abs(i - j) > 3]) <= 1e-12)
    assert np.all(np.diag(W) > 0)


def test_cubic_gram_matches_trapezoid_rule():
    t = bspline_knots(-3, 3, 11)
    np.testing.assert_allclose(gram_bspline(4, t), trapezoid_gram(4, t), atol=1e-8, rtol=0)


@pytest.mark.parametrize("knots", [[0, 1], [2.0, 1.0, 0.0, 3.0, 4.0, 5.0, 6.0, 7.0]])
def test_bad_knots(knots):
    with pytest.raises(InvalidInputError):
        gram_bspline(4, knots)


def test_whiten_identity_and_scalar():
    B = np.random.default_rng(0).normal(size=(5, 3))
    np.testing.assert_array_equal(whiten(BasisRepresentation(B, np.eye(3))), B)
    np.testing.assert_allclose(whiten(BasisRepresentation(B, 4 * np.eye(3))), 2 * B, atol=1e-15)


def test_whitened_norm_equals_quadratic_form():
    rng = np.random.default_rng(1)
    W = random_spd(rng, 5)
    L = BasisRepresentation(np.zeros((1, 5)), W).cholesky()
    for _ in range(100):
        a = rng.normal(size=5)
        assert a @ W @ a == pytest.approx(np.sum((L.T @ a) ** 2), rel=1e-10)


def test_non_pd_gram_rejected():
    W = np.diag([1.0, -1.0])
    with pytest.raises(InvalidInputError):
        whiten(BasisRepresentation(np.ones((2, 2)), W))
    with pytest.raises(InvalidInputError):
        BasisRepresentation(np.ones((2, 2)), np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_identity_gram_reduces_to_ada():
    B = np.random.default_rng(2).normal(size=(20, 4))
    opts = FitOptions(seed=3)
    f = fit_fada(BasisRepresentation(B, np.eye(4)), 3, opts)
    a = fit_ada(B, 3, opts)
    assert f.indices == a.indices
    assert f.rss == a.rss


def test_pairs_oracle_with_spd_gram():
    rng = np.random.default_rng(4)
    B = rng.normal(size=(10, 4))
    W = random_spd(rng, 4)
    rep = BasisRepresentation(B, W)
    L = rep.cholesky()
    best = np.inf
    for pair in itertools.combinations(range(10), 2):
        Z = B[list(pair)]
        total = 0.0
        for b in B:
            a = simplex_weights((Z @ L).T, b @ L)
            r = b - a @ Z
            total += r @ W @ r
        best = min(best, total)
    model = fit_fada(rep, 2, FitOptions(seed=0))
    assert model.rss == pytest.approx(best, abs=1e-8)
    assert functional_rss(rep, model.alpha, model.profiles) == pytest.approx(model.rss, abs=1e-8)
    np.testing.assert_array_equal(model.profiles, B[list(model.indices)])


def test_archetypoids_never_beat_archetypes():
    rng = np.random.default_rng(5)
    rep = BasisRepresentation(rng.normal(size=(25, 5)), random_spd(rng, 5))
    fada = fit_fada(rep, 3, FitOptions(seed=0))
    faa = fit_faa(rep, 3, FitOptions(seed=0))
    assert fada.rss >= faa.rss - 1e-9
    assert functional_rss(rep, faa.alpha, faa.Z) == pytest.approx(faa.rss, rel=1e-9)


def test_explained_variability_k1_is_zero():
    rng = np.random.default_rng(6)
    rep = BasisRepresentation(rng.normal(size=(12, 3)), random_spd(rng, 3))
    faa = fit_faa(rep, 1)
    assert explained_variability(rep, faa.rss) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.skipif(not CURVES.exists(), reason="item curve fixture not present")
def test_item_curves_four_archetypoids_explain_most_variability():
    B = np.loadtxt(CURVES, delimiter=",")
    rep = BasisRepresentation(B, gram_bspline(4, bspline_knots(-3, 3, B.shape[1])))
    model = fit_fada(rep, 4, FitOptions(seed=0))
    assert explained_variability(rep, model.rss) >= 0.90
    assert model.alpha.shape == (60, 4)
