"""Exact integer linear algebra on dense arrays.

All results are exact over the rationals.  Matrices are numpy arrays, either
int64 (fast path, promoted to Python-int object arrays before any overflow
can occur) or dtype=object holding arbitrary-precision Python integers.
Everything here is a pure function on immutable inputs; callers may
parallelize freely.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DegenerateVectorError

# Entries above this trigger promotion from int64 to object arithmetic.
_INT64_SAFE = 1 << 30


def as_int_matrix(data, columns=None):
    """Coerce to a 2-d object array of Python ints; (0, columns) if empty."""
    arr = np.array(data, dtype=object)
    if arr.size == 0:
        if columns is None:
            raise ValueError("empty matrix needs an explicit column count")
        return np.zeros((0, columns), dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return np.vectorize(int, otypes=[object])(arr)


def as_int_vector(data):
    arr = np.array(data, dtype=object)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr


def vector_gcd(v):
    """gcd of the absolute values of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
        if g == 1:
            break
    return g


def primitive_normalize(v, keep_orientation=False):
    """Divide by the gcd of the entries and canonicalize the sign.

    By default the sign is fixed so the first nonzero entry is positive.
    With keep_orientation=True the given orientation is preserved, which is
    what rays and valid-inequality normals need.
    """
    v = as_int_vector(v)
    g = vector_gcd(v)
    if g == 0:
        raise DegenerateVectorError("cannot normalize the zero vector")
    if g > 1:
        v = v // g
    if not keep_orientation:
        for x in v:
            if x != 0:
                if x < 0:
                    v = -v
                break
    return v


def _row_reduce_gcd(rows):
    """Divide each row of a 2-d array by its gcd, in place where possible."""
    if rows.dtype == object:
        for i in range(rows.shape[0]):
            g = vector_gcd(rows[i])
            if g > 1:
                rows[i] = rows[i] // g
        return rows
    g = np.gcd.reduce(np.abs(rows), axis=1)
    g[g == 0] = 1
    return rows // g[:, None]


def _eliminate(mat, stop_at=None):
    """Fraction-free Gaussian elimination; returns the rank.

    Rows are rescaled by their gcd after every update, which keeps int64
    intermediates small in practice; if entries still threaten to overflow
    the whole matrix is promoted to exact object arithmetic.
    """
    m = np.array(mat)
    if m.size == 0:
        return 0
    if m.dtype != object:
        m = m.astype(np.int64, copy=False).copy()
    else:
        m = m.copy()
    rows, cols = m.shape
    rank = 0
    col = 0
    while col < cols and rank < rows:
        block = m[rank:, col]
        nz = np.nonzero(block)[0] if m.dtype != object else np.nonzero(block != 0)[0]
        if nz.size == 0:
            col += 1
            continue
        # smallest pivot keeps coefficient growth down
        pick = nz[np.argmin([abs(int(block[i])) for i in nz])]
        if pick != 0:
            m[[rank, rank + pick]] = m[[rank + pick, rank]]
        pivot = int(m[rank, col])
        sub = m[rank + 1:]
        if sub.shape[0]:
            tgt = np.nonzero(sub[:, col])[0] if m.dtype != object else np.nonzero(sub[:, col] != 0)[0]
            if tgt.size:
                if m.dtype != object:
                    hi = max(abs(pivot), int(np.abs(sub[tgt]).max()), int(np.abs(m[rank]).max()))
                    if hi > _INT64_SAFE:
                        # row ops preserve rank, so resume exactly on the current state
                        return _eliminate(np.vectorize(int, otypes=[object])(m), stop_at=stop_at)
                upd = sub[tgt] * pivot - np.outer(sub[tgt, col], m[rank])
                sub[tgt] = _row_reduce_gcd(upd)
        rank += 1
        if stop_at is not None and rank >= stop_at:
            return rank
        col += 1
    return rank


def rank(mat, stop_at=None):
    """Exact rank over the rationals via fraction-free elimination."""
    arr = np.asarray(mat)
    if arr.size == 0:
        return 0
    return _eliminate(arr, stop_at=stop_at)


def _xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def integer_kernel_basis(mat, columns=None):
    """Integer basis of the rational kernel of ``mat``.

    Returns a (N x K) object matrix T with mat @ T = 0 exactly, K = N - rank.
    The columns form a basis of the saturated kernel lattice (each column is
    primitive) because only unimodular row operations are used: we reduce
    [mat.T | I] and read the kernel off the rows whose mat.T part vanished.
    An empty result (K = 0) is returned as an (N x 0) matrix.
    """
    g = as_int_matrix(mat, columns=columns)
    nrows, n = g.shape
    if n == 0:
        return np.zeros((0, 0), dtype=object)
    aug = np.hstack([g.T, np.eye(n, dtype=object)])
    pr = 0
    for col in range(nrows):
        live = [i for i in range(pr, n) if aug[i, col] != 0]
        if not live:
            continue
        i0 = min(live, key=lambda i: abs(int(aug[i, col])))
        for j in live:
            if j == i0:
                continue
            a, b = int(aug[i0, col]), int(aug[j, col])
            if b % a == 0:
                aug[j] = aug[j] - (b // a) * aug[i0]
            else:
                gg, x, y = _xgcd(a, b)
                new_i0 = x * aug[i0] + y * aug[j]
                aug[j] = (a // gg) * aug[j] - (b // gg) * aug[i0]
                aug[i0] = new_i0
        if i0 != pr:
            aug[[pr, i0]] = aug[[i0, pr]]
        pr += 1
    kernel_rows = aug[pr:, nrows:]
    t = kernel_rows.T.copy()
    for k in range(t.shape[1]):
        gk = vector_gcd(t[:, k])
        assert gk == 1, "unimodular reduction must produce primitive columns"
    return t


def integer_inverse_scaled(mat):
    """Return (X, det) with mat @ X = det * I, all entries exact integers.

    mat must be square and nonsingular.  Works over Fractions internally;
    the scaled inverse is the adjugate, which is integral.
    """
    a = as_int_matrix(mat)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix must be square")
    work = [[Fraction(int(a[i, j])) for j in range(n)] for i in range(n)]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            det = -det
        p = work[col][col]
        det *= p
        work[col] = [x / p for x in work[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    assert det.denominator == 1
    det_int = int(det)
    x = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            v = inv[i][j] * det_int
            assert v.denominator == 1
            x[i, j] = int(v)
    return x, det_int
