"""Dense matrix primitives and the penalized NNLS solver.

Every alpha/beta update in the package reduces to the same convex least
squares problem: express a target vector as a convex combination of the
columns of a design matrix. The simplex constraint is enforced softly by
appending a heavily weighted row of ones to the design (and the weight to
the target), then solving non-negative least squares.
"""

import numpy as np

from archetypal import _kernels

__all__ = [
    "DEFAULT_PENALTY",
    "InvalidInputError",
    "SolverError",
    "DegenerateDataWarning",
    "check_data",
    "check_simplex_rows",
    "pnnls_solve",
    "pnnls_rows",
    "rss",
]

DEFAULT_PENALTY = 200.0

_FLOAT_EPS = np.finfo(np.float64).eps


class InvalidInputError(ValueError):
    """Raised when inputs violate a documented precondition."""


class SolverError(RuntimeError):
    """Raised when an iterative solver fails to converge.

    ``residual`` carries the residual norm of the last iterate when known.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateDataWarning(UserWarning):
    """Data cannot support the requested number of distinct archetypes."""


def check_data(X, binary=False, name="X"):
    """Validate and return ``X`` as a 2-D float array.

    With ``binary=True`` every entry must be exactly 0 or 1.
    """
    try:
        X = np.asarray(X, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name} is not numeric: {exc}") from None
    if X.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise InvalidInputError(f"{name} must have at least one row and column")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    if binary and not np.all((X == 0.0) | (X == 1.0)):
        bad = np.argwhere((X != 0.0) & (X != 1.0))[0]
        raise InvalidInputError(
            f"{name} is not binary: entry ({bad[0]}, {bad[1]}) = {X[tuple(bad)]!r}"
        )
    return X


def check_simplex_rows(W, atol=1e-6, name="weights"):
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D")
    if np.any(W < 0):
        raise InvalidInputError(f"{name} has negative entries")
    if not np.allclose(W.sum(axis=1), 1.0, rtol=0, atol=atol):
        raise InvalidInputError(f"{name} rows do not sum to one")
    return W


def nnls_tolerance(p, scale):
    """Stopping threshold on the reduced gradient of a p-column problem.

    The floor is 1e-10; for large Gram entries rounding in the gradient
    itself dominates, so the threshold grows with ``p * scale``.
    """
    return max(1e-10, 16.0 * _FLOAT_EPS * p * scale)


def _check_penalty(penalty_weight):
    if not np.isfinite(penalty_weight) or penalty_weight <= 0:
        raise InvalidInputError("penalty_weight must be a positive finite number")


def pnnls_solve(design, target, penalty_weight=DEFAULT_PENALTY, normalize=True):
    """Convex-combination least squares via penalized NNLS.

    Minimizes ``||[design; w 1'] x - [target; w]||^2`` over ``x >= 0``
    with a Lawson-Hanson active-set iteration.

    Parameters
    ----------
    design : (m, p) array_like
        Columns are the points to combine.
    target : (m,) array_like
        Point to approximate.
    penalty_weight : float
        Weight ``w`` of the sum-to-one row.
    normalize : bool
        Rescale the penalized minimizer onto the simplex. The raw
        minimizer sums to one only up to roughly ``residual / w**2``.

    Returns
    -------
    x : (p,) ndarray
    """
    A = np.asarray(design, dtype=np.float64)
    b = np.asarray(target, dtype=np.float64)
    if A.ndim != 2 or A.shape[1] < 1:
        raise InvalidInputError("design must be a 2-D array with at least one column")
    if b.ndim != 1 or b.shape[0] != A.shape[0]:
        raise InvalidInputError("target length must match design rows")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise InvalidInputError("non-finite values in design or target")
    _check_penalty(penalty_weight)
    return pnnls_rows(A.T @ A, (A.T @ b)[None, :], penalty_weight, normalize,
                      design=A, targets=b[None, :])[0]


def pnnls_rows(gram, cross, penalty_weight=DEFAULT_PENALTY, normalize=True,
               design=None, targets=None):
    """Solve many penalized NNLS problems sharing one design.

    ``gram`` is ``D'D`` for the (unpenalized) design ``D`` and row ``i`` of
    ``cross`` is ``D' b_i``. The penalty row is folded in here.
    """
    pen2 = float(penalty_weight) ** 2
    G = np.ascontiguousarray(gram + pen2, dtype=np.float64)
    R = np.ascontiguousarray(cross + pen2, dtype=np.float64)
    p = G.shape[0]
    out = np.empty_like(R)
    status = _kernels.solve_rows(G, R, nnls_tolerance(p, np.abs(G).max()), 10 * p,
                                 normalize, out)
    if status != _kernels.OK:
        residual = None
        if design is not None and targets is not None:
            residual = float(np.linalg.norm(targets - out @ design.T))
        if status == _kernels.MAX_ITER:
            raise SolverError(
                f"penalized NNLS did not converge within {10 * p} iterations",
                residual=residual,
            )
        raise SolverError(
            "penalized NNLS returned the zero vector; increase penalty_weight",
            residual=residual,
        )
    return out


def rss(X, alpha, Z):
    """Residual sum of squares of the mixture reconstruction ``alpha @ Z``."""
    X = np.asarray(X, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    if X.ndim != 2 or alpha.ndim != 2 or Z.ndim != 2:
        raise InvalidInputError("X, alpha and Z must be 2-D")
    if alpha.shape[0] != X.shape[0] or alpha.shape[1] != Z.shape[0] or Z.shape[1] != X.shape[1]:
        raise InvalidInputError(
            f"dimension mismatch: X {X.shape}, alpha {alpha.shape}, Z {Z.shape}"
        )
    resid = X - alpha @ Z
    return float(np.einsum("ij,ij->", resid, resid))
