# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled row-reduction kernels over GF(p), p < 2^31.

All matrices are C-contiguous int64 with entries already reduced mod p.
"""

import numpy as np


cdef long long _inv_mod(long long a, long long p):
    cdef long long old_r = a % p, r = p
    cdef long long old_s = 1, s = 0
    cdef long long q, tmp
    while r != 0:
        q = old_r / r
        tmp = old_r - q * r
        old_r = r
        r = tmp
        tmp = old_s - q * s
        old_s = s
        s = tmp
    if old_s < 0:
        old_s += p
    return old_s


def rref_mod(long long[:, ::1] m, long long p):
    """In-place reduced row echelon form; returns (rank, pivot_columns)."""
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t ncols = m.shape[1]
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, row, r, c
    cdef long long inv, factor, v
    pivots = []
    for col in range(ncols):
        row = -1
        for r in range(rank, nrows):
            if m[r, col] != 0:
                row = r
                break
        if row < 0:
            continue
        if row != rank:
            for c in range(ncols):
                v = m[rank, c]
                m[rank, c] = m[row, c]
                m[row, c] = v
        inv = _inv_mod(m[rank, col], p)
        if inv != 1:
            for c in range(col, ncols):
                m[rank, c] = (m[rank, c] * inv) % p
        for r in range(nrows):
            if r != rank:
                factor = m[r, col]
                if factor != 0:
                    for c in range(col, ncols):
                        m[r, c] = (m[r, c] - factor * m[rank, c]) % p
                        if m[r, c] < 0:
                            m[r, c] += p
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rank, pivots


def reduce_rows_mod(long long[:, ::1] m, long long[:, ::1] basis, pivot_cols, long long p):
    """Reduce every row of m against an RREF basis (in place)."""
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t ncols = m.shape[1]
    cdef Py_ssize_t nb = basis.shape[0]
    cdef long long[::1] cols = np.asarray(pivot_cols, dtype=np.int64)
    cdef Py_ssize_t r, b, c
    cdef long long factor
    for r in range(nrows):
        for b in range(nb):
            factor = m[r, cols[b]]
            if factor != 0:
                for c in range(ncols):
                    m[r, c] = (m[r, c] - factor * basis[b, c]) % p
                    if m[r, c] < 0:
                        m[r, c] += p
    return None
