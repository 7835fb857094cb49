"""Exact linear algebra over GF(p).

Everything here works with integer arrays whose entries live in ``0..p-1``.
Row reduction runs in compiled loops: GF(2) uses bit-packed rows, odd primes
use dense ``int64`` rows.  Matrices are fed to the eliminator row by row in
CSR form, which keeps memory proportional to the rank rather than to the
number of input rows.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
import scipy.sparse as sp

__all__ = [
    "Echelon",
    "echelon",
    "echelon_dense",
    "rank",
    "nullspace",
    "row_space",
    "matmul_mod",
    "in_span",
]


@numba.njit(cache=True)
def _rref_gf2(n_cols, indptr, indices, cap):
    n_words = (n_cols + 63) // 64
    basis = np.zeros((cap, n_words), dtype=np.uint64)
    pivots = np.empty(cap, dtype=np.int64)
    where = np.full(n_cols, -1, dtype=np.int64)
    row = np.zeros(n_words, dtype=np.uint64)
    one = np.uint64(1)
    r = 0
    for i in range(indptr.shape[0] - 1):
        if r == cap:
            break
        lo = indptr[i]
        hi = indptr[i + 1]
        if lo == hi:
            continue
        for w in range(n_words):
            row[w] = 0
        for k in range(lo, hi):
            c = indices[k]
            row[c >> 6] ^= one << np.uint64(c & 63)
        for k in range(lo, hi):
            c = indices[k]
            j = where[c]
            if j >= 0 and (row[c >> 6] >> np.uint64(c & 63)) & one:
                for w in range(n_words):
                    row[w] ^= basis[j, w]
        c0 = -1
        for w in range(n_words):
            x = row[w]
            if x != 0:
                b = 0
                while not ((x >> np.uint64(b)) & one):
                    b += 1
                c0 = w * 64 + b
                break
        if c0 < 0:
            continue
        w0 = c0 >> 6
        m0 = one << np.uint64(c0 & 63)
        for j in range(r):
            if basis[j, w0] & m0:
                for w in range(n_words):
                    basis[j, w] ^= row[w]
        for w in range(n_words):
            basis[r, w] = row[w]
        pivots[r] = c0
        where[c0] = r
        r += 1
    return basis[:r].copy(), pivots[:r].copy()


@numba.njit(cache=True)
def _rref_gfp(n_cols, indptr, indices, data, p, inv, cap):
    basis = np.zeros((cap, n_cols), dtype=np.int64)
    pivots = np.empty(cap, dtype=np.int64)
    where = np.full(n_cols, -1, dtype=np.int64)
    row = np.zeros(n_cols, dtype=np.int64)
    r = 0
    for i in range(indptr.shape[0] - 1):
        if r == cap:
            break
        lo = indptr[i]
        hi = indptr[i + 1]
        if lo == hi:
            continue
        for c in range(n_cols):
            row[c] = 0
        for k in range(lo, hi):
            c = indices[k]
            row[c] = (row[c] + data[k]) % p
        for k in range(lo, hi):
            c = indices[k]
            j = where[c]
            if j >= 0:
                f = row[c]
                if f != 0:
                    for cc in range(n_cols):
                        row[cc] = (row[cc] - f * basis[j, cc]) % p
        c0 = -1
        for c in range(n_cols):
            if row[c] != 0:
                c0 = c
                break
        if c0 < 0:
            continue
        s = inv[row[c0]]
        for c in range(n_cols):
            row[c] = (row[c] * s) % p
        for j in range(r):
            f = basis[j, c0]
            if f != 0:
                for cc in range(n_cols):
                    basis[j, cc] = (basis[j, cc] - f * row[cc]) % p
        for c in range(n_cols):
            basis[r, c] = row[c]
        pivots[r] = c0
        where[c0] = r
        r += 1
    return basis[:r].copy(), pivots[:r].copy()


def _unpack(packed: np.ndarray, n_cols: int) -> np.ndarray:
    if packed.shape[0] == 0:
        return np.zeros((0, n_cols), dtype=np.int64)
    bits = np.unpackbits(packed.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :n_cols].astype(np.int64)


@dataclass(frozen=True)
class Echelon:
    """Reduced row echelon basis of a row space.

    ``rows`` is fully reduced: column ``pivots[i]`` is 1 in row ``i`` and 0 in
    every other row.  Rows are kept in discovery order, not sorted by pivot.
    """

    p: int
    n_cols: int
    pivots: np.ndarray
    _rows: np.ndarray
    packed: bool

    @property
    def rank(self) -> int:
        return int(self.pivots.shape[0])

    @property
    def rows(self) -> np.ndarray:
        if self.packed:
            return _unpack(self._rows, self.n_cols)
        return self._rows

    def column(self, c: int) -> np.ndarray:
        if self.packed:
            word = self._rows[:, c >> 6]
            return ((word >> np.uint64(c & 63)) & np.uint64(1)).astype(np.int64)
        return self._rows[:, c]

    def free_columns(self) -> np.ndarray:
        mask = np.ones(self.n_cols, dtype=bool)
        mask[self.pivots] = False
        return np.flatnonzero(mask)

    def kernel(self) -> np.ndarray:
        """Basis (as rows) of ``{v : M v = 0}`` for the reduced matrix ``M``."""
        free = self.free_columns()
        out = np.zeros((free.shape[0], self.n_cols), dtype=np.int64)
        for k, c in enumerate(free):
            out[k, c] = 1
            out[k, self.pivots] = (-self.column(int(c))) % self.p
        return out

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Remainders of ``vectors`` (rows) modulo the row space."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64)) % self.p
        if self.rank == 0:
            return vectors
        coeff = vectors[:, self.pivots]
        return (vectors - matmul_mod(coeff, self.rows, self.p)) % self.p


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def echelon(matrix: sp.spmatrix | np.ndarray, p: int) -> Echelon:
    """Row-reduce ``matrix`` over GF(p)."""
    if sp.issparse(matrix):
        csr = sp.csr_matrix(matrix, dtype=np.int64)
    else:
        csr = sp.csr_matrix(np.atleast_2d(np.asarray(matrix, dtype=np.int64)))
    csr.sum_duplicates()
    csr.data %= p
    csr.eliminate_zeros()
    n_rows, n_cols = csr.shape
    cap = max(min(n_rows, n_cols), 0)
    indptr = csr.indptr.astype(np.int64)
    indices = csr.indices.astype(np.int64)
    if n_cols == 0 or cap == 0:
        if p == 2:
            empty = np.zeros((0, (n_cols + 63) // 64), dtype=np.uint64)
            return Echelon(p, n_cols, np.zeros(0, dtype=np.int64), empty, True)
        return Echelon(p, n_cols, np.zeros(0, dtype=np.int64),
                       np.zeros((0, n_cols), dtype=np.int64), False)
    if p == 2:
        rows, piv = _rref_gf2(n_cols, indptr, indices, cap)
        return Echelon(p, n_cols, piv, rows, True)
    data = csr.data.astype(np.int64)
    rows, piv = _rref_gfp(n_cols, indptr, indices, data, p, _inverse_table(p), cap)
    return Echelon(p, n_cols, piv, rows, False)


def echelon_dense(matrix: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(rows, pivots)`` of the reduced echelon form, rows sorted by pivot."""
    e = echelon(np.asarray(matrix, dtype=np.int64).reshape(-1, np.shape(matrix)[-1]), p)
    order = np.argsort(e.pivots, kind="stable")
    return e.rows[order], e.pivots[order]


def rank(matrix, p: int) -> int:
    return echelon(matrix, p).rank


def nullspace(matrix, p: int, n_cols: int | None = None) -> np.ndarray:
    """Right kernel of ``matrix`` as a row basis."""
    if not sp.issparse(matrix):
        matrix = np.asarray(matrix, dtype=np.int64)
        if matrix.ndim == 1 or matrix.size == 0:
            matrix = matrix.reshape(-1, n_cols if n_cols is not None else matrix.shape[-1])
    return echelon(matrix, p).kernel()


def row_space(matrix, p: int) -> np.ndarray:
    rows, _ = echelon_dense(matrix, p) if not sp.issparse(matrix) else (
        echelon(matrix, p).rows, None)
    return rows


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` exactly, via float BLAS when the accumulator is safe."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if a.shape[-1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.shape[-1] * (p - 1) ** 2 < 2**52:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.rint(prod).astype(np.int64) % p
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)


def in_span(basis: np.ndarray, vectors: np.ndarray, p: int) -> bool:
    """True when every row of ``vectors`` lies in the row span of ``basis``."""
    vectors = np.atleast_2d(vectors)
    if vectors.size == 0:
        return True
    basis = np.atleast_2d(basis)
    if basis.size == 0:
        return not np.any(np.asarray(vectors) % p)
    return rank(np.vstack([basis, vectors]), p) == rank(basis, p)
