"""Compiled inner loops: penalized NNLS in normal-equation form and the
archetypoid SWAP pass.

All routines take the Gram matrix ``G = A'A`` and right-hand sides
``r = A'b`` of the augmented (penalized) system, so callers form them once
and reuse them across many targets.
"""

import numpy as np
from numba import njit

_EPS = np.finfo(np.float64).eps

OK = 0
MAX_ITER = 1
ZERO_SUM = 2


@njit(cache=True)
def _solve_passive(G, r, idx, q):
    """Solve G[idx, idx] s = r[idx] for the first ``q`` entries of idx."""
    A = np.empty((q, q))
    b = np.empty(q)
    dmax = 0.0
    for a in range(q):
        b[a] = r[idx[a]]
        for c in range(q):
            A[a, c] = G[idx[a], idx[c]]
        if A[a, a] > dmax:
            dmax = A[a, a]
    # Cholesky; fall back to minimum-norm least squares on a bad pivot
    L = np.zeros((q, q))
    ok = True
    for a in range(q):
        s = A[a, a]
        for c in range(a):
            s -= L[a, c] * L[a, c]
        if s <= 1e-13 * dmax:
            ok = False
            break
        L[a, a] = np.sqrt(s)
        for e in range(a + 1, q):
            t = A[e, a]
            for c in range(a):
                t -= L[e, c] * L[a, c]
            L[e, a] = t / L[a, a]
    if not ok:
        return np.linalg.lstsq(A, b, -1.0)[0]
    y = np.empty(q)
    for a in range(q):
        t = b[a]
        for c in range(a):
            t -= L[a, c] * y[c]
        y[a] = t / L[a, a]
    s_out = np.empty(q)
    for a in range(q - 1, -1, -1):
        t = y[a]
        for c in range(a + 1, q):
            t -= L[c, a] * s_out[c]
        s_out[a] = t / L[a, a]
    return s_out


@njit(cache=True)
def nnls_gram(G, r, x, tol, max_iter):
    """Lawson-Hanson active-set NNLS on the normal equations.

    Writes the minimizer into ``x`` and returns a status code.
    """
    p = r.shape[0]
    passive = np.zeros(p, dtype=np.bool_)
    blocked = np.zeros(p, dtype=np.bool_)
    idx = np.empty(p, dtype=np.int64)
    w = np.empty(p)
    for j in range(p):
        x[j] = 0.0
        w[j] = r[j]
    it = 0
    while True:
        jmax = -1
        wmax = tol
        for j in range(p):
            if not passive[j] and not blocked[j] and w[j] > wmax:
                wmax = w[j]
                jmax = j
        if jmax < 0:
            return OK
        passive[jmax] = True
        first = True
        changed = False
        while True:
            it += 1
            if it > max_iter:
                return MAX_ITER
            q = 0
            for j in range(p):
                if passive[j]:
                    idx[q] = j
                    q += 1
            s = _solve_passive(G, r, idx, q)
            if first:
                first = False
                for a in range(q):
                    if idx[a] == jmax and s[a] <= 0.0:
                        # rounding made the entering variable non-positive
                        passive[jmax] = False
                        blocked[jmax] = True
                if not passive[jmax]:
                    break
            smin = np.inf
            for a in range(q):
                if s[a] < smin:
                    smin = s[a]
            changed = True
            if smin > 0.0:
                for j in range(p):
                    x[j] = 0.0
                for a in range(q):
                    x[idx[a]] = s[a]
                break
            step = 1.0
            amin = -1
            for a in range(q):
                if s[a] <= 0.0:
                    xa = x[idx[a]]
                    t = xa / (xa - s[a])
                    if t < step:
                        step = t
                        amin = a
            for a in range(q):
                j = idx[a]
                x[j] = x[j] + step * (s[a] - x[j])
                if a == amin or x[j] <= 0.0:
                    x[j] = 0.0
                    passive[j] = False
        if changed:
            for j in range(p):
                blocked[j] = False
        q = 0
        for j in range(p):
            if x[j] != 0.0:
                idx[q] = j
                q += 1
        for j in range(p):
            t = r[j]
            for a in range(q):
                t -= G[j, idx[a]] * x[idx[a]]
            w[j] = t


@njit(cache=True)
def solve_rows(G, R, tol, max_iter, normalize, out):
    """Solve one penalized NNLS per row of ``R`` sharing the Gram ``G``.

    Returns the worst status over all rows.
    """
    n, p = R.shape
    worst = OK
    x = np.empty(p)
    for i in range(n):
        status = nnls_gram(G, R[i], x, tol, max_iter)
        if status > worst:
            worst = status
        total = 0.0
        for j in range(p):
            total += x[j]
        if normalize:
            if total <= 0.0:
                worst = ZERO_SUM if worst < ZERO_SUM else worst
                for j in range(p):
                    out[i, j] = 0.0
                continue
            for j in range(p):
                out[i, j] = x[j] / total
        else:
            for j in range(p):
                out[i, j] = x[j]
    return worst


@njit(cache=True)
def subset_alpha_rss(K, sel, pen2, tol, max_iter, alpha):
    """Alphas and RSS of every observation against the archetypoid set ``sel``.

    ``K`` is the data Gram ``X X'``; ``pen2`` the squared penalty weight.
    Fills ``alpha`` (n x k) and returns (rss, status).
    """
    n = K.shape[0]
    k = sel.shape[0]
    Ks = np.empty((k, k))
    G = np.empty((k, k))
    for a in range(k):
        for c in range(k):
            Ks[a, c] = K[sel[a], sel[c]]
            G[a, c] = Ks[a, c] + pen2
    r = np.empty(k)
    x = np.empty(k)
    total_rss = 0.0
    worst = OK
    for i in range(n):
        for a in range(k):
            r[a] = K[i, sel[a]] + pen2
        status = nnls_gram(G, r, x, tol, max_iter)
        if status > worst:
            worst = status
        total = 0.0
        for a in range(k):
            total += x[a]
        if total <= 0.0:
            worst = ZERO_SUM if worst < ZERO_SUM else worst
            total = 1.0
        for a in range(k):
            alpha[i, a] = x[a] / total
        res = K[i, i]
        for a in range(k):
            res -= 2.0 * alpha[i, a] * K[i, sel[a]]
            for c in range(k):
                res += alpha[i, a] * Ks[a, c] * alpha[i, c]
        if res < 0.0:
            res = 0.0
        total_rss += res
    return total_rss, worst


@njit(cache=True)
def best_swap(K, sel, pen2, tol, max_iter):
    """Evaluate every (selected, unselected) exchange exactly.

    Returns (best_rss, position, candidate, status); position is -1 when
    no exchange was evaluated.
    """
    n = K.shape[0]
    k = sel.shape[0]
    chosen = np.zeros(n, dtype=np.bool_)
    for a in range(k):
        chosen[sel[a]] = True
    trial = sel.copy()
    alpha = np.empty((n, k))
    best = np.inf
    best_pos = -1
    best_cand = -1
    worst = OK
    for pos in range(k):
        for cand in range(n):
            if chosen[cand]:
                continue
            trial[pos] = cand
            value, status = subset_alpha_rss(K, trial, pen2, tol, max_iter, alpha)
            if status > worst:
                worst = status
            if value < best:
                best = value
                best_pos = pos
                best_cand = cand
        trial[pos] = sel[pos]
    return best, best_pos, best_cand, worst
