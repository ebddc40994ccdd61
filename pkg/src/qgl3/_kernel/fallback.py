"""Pure-Python (numpy) fallback for the mod-p row-reduction kernels."""

from __future__ import annotations

import numpy as np


def rref_mod(m: np.ndarray, p: int):
    """In-place reduced row echelon form; returns (rank, pivot_columns)."""
    nrows, ncols = m.shape
    rank = 0
    pivots: list[int] = []
    for col in range(ncols):
        hits = np.nonzero(m[rank:, col])[0]
        if hits.size == 0:
            continue
        row = rank + int(hits[0])
        if row != rank:
            m[[rank, row]] = m[[row, rank]]
        inv = pow(int(m[rank, col]), -1, p)
        if inv != 1:
            m[rank] = (m[rank] * inv) % p
        factors = m[:, col].copy()
        factors[rank] = 0
        nz = np.nonzero(factors)[0]
        if nz.size:
            m[nz] = (m[nz] - factors[nz, None] * m[rank][None, :]) % p
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rank, pivots


def reduce_rows_mod(m: np.ndarray, basis: np.ndarray, pivot_cols, p: int) -> None:
    """Reduce every row of m against an RREF basis (in place)."""
    if len(pivot_cols) == 0 or m.shape[0] == 0:
        return
    cols = np.asarray(pivot_cols, dtype=np.int64)
    # block matrix product keeps int64 exact: entries < p^2 and the inner
    # dimension is bounded by len(pivot_cols); p is chosen < 2^26 so the
    # accumulated dot products stay below 2^63.
    factors = m[:, cols] % p
    m -= factors @ basis
    m %= p
