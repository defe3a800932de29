"""Dense exact linear algebra over a FiniteField.

Matrices are 2-D numpy int64 arrays of element codes; vectors are 1-D.
Row reduction is full Gauss-Jordan so kernels and solutions come out in
a canonical (deterministic) form.
"""

from __future__ import annotations

import numpy as np

from .field import FiniteField


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat(rows) -> np.ndarray:
    return np.array(rows, dtype=np.int64)


def madd(F: FiniteField, a, b):
    return F.add(a, b)


def msub(F: FiniteField, a, b):
    return F.sub(a, b)


def mmul(F: FiniteField, a, b) -> np.ndarray:
    """Matrix product over F.  Accumulates column-by-column; exact."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a2 = a if a.ndim == 2 else a.reshape(1, a.shape[0])
    vec_in = b.ndim == 1
    b2 = b.reshape(b.shape[0], 1) if vec_in else b
    if a2.shape[1] != b2.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    out = np.zeros((a2.shape[0], b2.shape[1]), dtype=np.int64)
    for k in range(a2.shape[1]):
        out = F.add(out, F.mul(a2[:, k:k + 1], b2[k:k + 1, :]))
    if a.ndim == 1 and vec_in:
        return out[0, 0]
    if a.ndim == 1:
        return out[0]
    if vec_in:
        return out[:, 0]
    return out


def mat_pow(F: FiniteField, a: np.ndarray, n: int) -> np.ndarray:
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix power needs a square matrix")
    out = identity(a.shape[0])
    base = a
    while n:
        if n & 1:
            out = mmul(F, out, base)
        base = mmul(F, base, base)
        n >>= 1
    return out


def entrywise_power(F: FiniteField, a, t: int):
    return F.power(a, t)


def rref(F: FiniteField, a) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form; returns (R, pivot_columns)."""
    r = np.array(a, dtype=np.int64)
    nrows, ncols = r.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if len(nz) == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = F.mul(r[row], F.inv(r[row, col]))
        others = np.nonzero(r[:, col])[0]
        for i in others:
            if i != row:
                r[i] = F.sub(r[i], F.mul(r[i, col], r[row]))
        pivots.append(col)
        row += 1
    return r, tuple(pivots)


def rank(F: FiniteField, a) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return len(rref(F, a)[1])


def kernel(F: FiniteField, a) -> np.ndarray:
    """Basis of the right kernel of `a`, as columns (canonical form)."""
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    if a.shape[0] == 0 or a.size == 0:
        return identity(ncols)
    r, pivots = rref(F, a)
    free = [c for c in range(ncols) if c not in pivots]
    out = zeros(ncols, len(free))
    for k, fc in enumerate(free):
        out[fc, k] = 1
        for i, pc in enumerate(pivots):
            out[pc, k] = F.neg(r[i, fc])
    return out


def solve_full(F: FiniteField, a, b):
    """Solve a @ X = b in one reduction.

    Returns (X, unique) with free variables zeroed, or (None, False) when
    inconsistent; `unique` reports whether the solution was forced."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec_in = b.ndim == 1
    b2 = b.reshape(b.shape[0], 1) if vec_in else b
    if a.shape[0] != b2.shape[0]:
        raise ValueError("solve: row mismatch")
    aug = np.hstack([a, b2])
    r, pivots = rref(F, aug)
    for p in pivots:
        if p >= a.shape[1]:
            return None, False
    x = zeros(a.shape[1], b2.shape[1])
    for i, p in enumerate(pivots):
        x[p] = r[i, a.shape[1]:]
    return (x[:, 0] if vec_in else x), len(pivots) == a.shape[1]


def solve(F: FiniteField, a, b):
    """One solution X of a @ X = b, or None if inconsistent.

    Free variables are set to zero, so the answer is deterministic; when
    the columns of `a` are independent the solution is the unique one.
    """
    return solve_full(F, a, b)[0]


def inverse(F: FiniteField, a):
    """Inverse matrix, or None if singular."""
    a = np.asarray(a, dtype=np.int64)
    if a.shape[0] != a.shape[1]:
        return None
    x = solve(F, a, identity(a.shape[0]))
    if x is None or not np.array_equal(mmul(F, a, x), identity(a.shape[0])):
        return None
    return x


def kron(F: FiniteField, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = F.mul(a[:, np.newaxis, :, np.newaxis], b[np.newaxis, :, np.newaxis, :])
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def vec(a) -> np.ndarray:
    """Column-stacking vectorization (Fortran order)."""
    return np.asarray(a, dtype=np.int64).reshape(-1, order="F")


def unvec(v, r: int, c: int) -> np.ndarray:
    return np.asarray(v, dtype=np.int64).reshape(r, c, order="F")


def column_space(F: FiniteField, a) -> np.ndarray:
    """Canonical basis (columns) of the column space of `a`."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return zeros(a.shape[0], 0)
    r, pivots = rref(F, a.T)
    return r[: len(pivots)].T


def in_span(F: FiniteField, basis: np.ndarray, v) -> bool:
    return solve(F, basis, v) is not None
