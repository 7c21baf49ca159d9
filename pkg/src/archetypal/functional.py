"""Functional archetypal analysis on basis-coefficient representations.

For curves ``x_i(t) = sum_h b_ih B_h(t)`` the L2 residual of a mixture is
``a' W a`` with ``W`` the Gram matrix of the basis. Factoring
``W = L L'`` turns that into a Euclidean norm of ``a' L``, so the
multivariate fitters run unchanged on the whitened coefficients ``B L``.
"""

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg
from scipy.interpolate import BSpline

from archetypal.aa import FitOptions, fit_aa
from archetypal.ada import fit_ada
from archetypal.core import InvalidInputError, check_data

__all__ = [
    "BasisRepresentation",
    "bspline_knots",
    "gram_bspline",
    "whiten",
    "functional_rss",
    "fit_fada",
    "fit_faa",
    "explained_variability",
]


@dataclass(frozen=True)
class BasisRepresentation:
    """Coefficient rows plus the Gram matrix of the basis they refer to.

    ``basis`` is a free-form descriptor, e.g.
    ``{"kind": "bspline", "order": 4, "knots": [...]}``.
    """

    coefficients: np.ndarray
    gram: np.ndarray
    basis: dict = field(default_factory=lambda: {"kind": "custom"})

    def __post_init__(self):
        B = check_data(self.coefficients, name="coefficients")
        W = np.asarray(self.gram, dtype=np.float64)
        if W.shape != (B.shape[1], B.shape[1]):
            raise InvalidInputError(
                f"gram must be {B.shape[1]}x{B.shape[1]}, got {W.shape}"
            )
        if not np.all(np.isfinite(W)):
            raise InvalidInputError("gram contains non-finite entries")
        if np.max(np.abs(W - W.T)) > 1e-10 * max(1.0, np.max(np.abs(W))):
            raise InvalidInputError("gram is not symmetric")
        object.__setattr__(self, "coefficients", B)
        object.__setattr__(self, "gram", W)

    def cholesky(self):
        """Lower Cholesky factor of the Gram matrix."""
        try:
            L = np.linalg.cholesky(self.gram)
        except np.linalg.LinAlgError:
            raise InvalidInputError("gram is not positive definite") from None
        if np.min(np.diag(L)) <= 1e-12:
            raise InvalidInputError("gram is numerically singular")
        return L


def bspline_knots(a, b, nbasis, order=4):
    """Clamped knot vector with equally spaced breakpoints on ``[a, b]``."""
    if nbasis < order:
        raise InvalidInputError("nbasis must be at least the order")
    if not b > a:
        raise InvalidInputError("need a < b")
    interior = np.linspace(a, b, nbasis - order + 2)
    return np.concatenate([np.full(order - 1, a), interior, np.full(order - 1, b)])


def gram_bspline(order, knots):
    """Gram matrix of the B-spline basis of the given order and knots.

    Integrates over the span where the basis is complete,
    ``[knots[order-1], knots[-order]]``, with ``order``-point
    Gauss-Legendre rules on every knot interval. Products of two splines
    are piecewise polynomials of degree ``2 order - 2``, which that rule
    integrates exactly.
    """
    t = np.asarray(knots, dtype=np.float64)
    if order < 1:
        raise InvalidInputError("order must be at least 1")
    if t.ndim != 1 or not np.all(np.isfinite(t)):
        raise InvalidInputError("knots must be a finite 1-D sequence")
    if np.any(np.diff(t) < 0):
        raise InvalidInputError("knots must be non-decreasing")
    nbasis = t.size - order
    if nbasis < 1 or t.size < 2 * order:
        raise InvalidInputError(f"need at least {2 * order} knots for order {order}")
    lo, hi = t[order - 1], t[nbasis]
    if not hi > lo:
        raise InvalidInputError("empty integration domain")

    nodes, weights = np.polynomial.legendre.leggauss(order)
    breaks = np.unique(t[(t >= lo) & (t <= hi)])
    left, right = breaks[:-1], breaks[1:]
    half = 0.5 * (right - left)
    x = (0.5 * (left + right))[:, None] + half[:, None] * nodes[None, :]
    w = half[:, None] * weights[None, :]
    D = BSpline.design_matrix(x.ravel(), t, order - 1).toarray()
    G = D.T @ (w.ravel()[:, None] * D)
    return 0.5 * (G + G.T)


def whiten(rep):
    """Coefficients mapped so Euclidean norms equal functional L2 norms."""
    return rep.coefficients @ rep.cholesky()


def functional_rss(rep, alpha, Z):
    """``sum_i a_i' W a_i`` for residual coefficient rows ``a_i``."""
    A = rep.coefficients - np.asarray(alpha) @ np.asarray(Z)
    return float(np.einsum("ij,jk,ik->", A, rep.gram, A))


def fit_fada(rep, k, opts=None):
    """Functional archetypoids: ADA on whitened coefficients.

    Indices refer to the original curves; ``profiles`` holds their
    coefficients in the original basis and ``rss`` is the functional RSS.
    """
    model = fit_ada(whiten(rep), k, opts)
    return replace(model, profiles=rep.coefficients[list(model.indices)].copy())


def fit_faa(rep, k, opts=None):
    """Functional archetypes: AA on whitened coefficients, archetypes
    reported in the original basis."""
    model = fit_aa(whiten(rep), k, opts or FitOptions())
    return replace(model, Z=model.beta @ rep.coefficients)


def explained_variability(rep, rss_value):
    """``1 - RSS / TSS`` with TSS the functional RSS about the mean curve."""
    centred = rep.coefficients - rep.coefficients.mean(axis=0)
    tss = float(np.einsum("ij,jk,ik->", centred, rep.gram, centred))
    if tss <= 0:
        return 1.0
    return 1.0 - rss_value / tss
