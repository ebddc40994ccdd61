"""Exact linear algebra over the Scalar field (sparse rows as dicts)."""

from __future__ import annotations

from .scalar import Context, Scalar

Row = dict[int, Scalar]


def rref(rows: list[Row], ncols: int, col_order: list[int] | None = None):
    """Reduced row echelon form over the scalar field.

    Returns (pivot_rows, pivot_cols): pivot_rows[i] is a row dict with
    leading 1 at pivot_cols[i], fully reduced against the other pivots.
    Column processing order defaults to 0..ncols-1.
    """
    order = col_order if col_order is not None else range(ncols)
    work = [dict(r) for r in rows if r]
    pivot_rows: list[Row] = []
    pivot_cols: list[int] = []
    for col in order:
        best = None
        for idx, r in enumerate(work):
            v = r.get(col)
            if v is not None and not v.is_zero():
                if best is None or len(r) < len(work[best]):
                    best = idx
        if best is None:
            continue
        piv = work.pop(best)
        inv = piv[col].inverse()
        piv = {c: v * inv for c, v in piv.items()}
        piv[col] = piv[col].ctx.one
        for prow in pivot_rows:
            f = prow.get(col)
            if f is not None and not f.is_zero():
                _axpy(prow, piv, -f)
        for r in work:
            f = r.get(col)
            if f is not None and not f.is_zero():
                _axpy(r, piv, -f)
        work = [r for r in work if r]
        pivot_rows.append(piv)
        pivot_cols.append(col)
    return pivot_rows, pivot_cols


def _axpy(target: Row, source: Row, factor: Scalar) -> None:
    """target += factor * source, dropping exact zeros."""
    for c, v in source.items():
        add = factor * v
        cur = target.get(c)
        if cur is None:
            if not add.is_zero():
                target[c] = add
        else:
            s = cur + add
            if s.is_zero():
                del target[c]
            else:
                target[c] = s


def rank(rows: list[Row], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def reduce_against(row: Row, pivot_rows: list[Row], pivot_cols: list[int]) -> Row:
    """Return row reduced modulo the span of the pivot rows."""
    out = dict(row)
    for prow, col in zip(pivot_rows, pivot_cols):
        f = out.get(col)
        if f is not None and not f.is_zero():
            _axpy(out, prow, -f)
    return out


def nullspace(rows: list[Row], ncols: int, ctx: Context) -> list[list[Scalar]]:
    """Basis of the right nullspace of the matrix with the given rows."""
    pivot_rows, pivot_cols = rref(rows, ncols)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [ctx.zero] * ncols
        vec[free] = ctx.one
        for prow, col in zip(pivot_rows, pivot_cols):
            coeff = prow.get(free)
            if coeff is not None:
                vec[col] = -coeff
        basis.append(vec)
    return basis


def solve(rows: list[Row], rhs: list[Scalar], ncols: int, ctx: Context):
    """Solve A x = b.  Returns (solution_with_free_vars_zero, free_cols) or
    None when inconsistent."""
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if not b.is_zero():
            row[ncols] = b
        aug.append(row)
    pivot_rows, pivot_cols = rref(aug, ncols + 1)
    sol = [ctx.zero] * ncols
    free = [c for c in range(ncols) if c not in set(pivot_cols)]
    for prow, col in zip(pivot_rows, pivot_cols):
        if col == ncols:
            return None  # a row reduced to 0 = 1
        val = prow.get(ncols)
        if val is not None:
            sol[col] = val
    return sol, free


def invert_matrix(mat: list[list[Scalar]], ctx: Context) -> list[list[Scalar]] | None:
    n = len(mat)
    rows = []
    for i in range(n):
        row: Row = {}
        for j, v in enumerate(mat[i]):
            if not v.is_zero():
                row[j] = v
        row[n + i] = ctx.one
        rows.append(row)
    pivot_rows, pivot_cols = rref(rows, 2 * n, col_order=list(range(n)) + list(range(n, 2 * n)))
    if pivot_cols[:n] != list(range(n)):
        return None
    inv = [[ctx.zero] * n for _ in range(n)]
    for prow, col in zip(pivot_rows[:n], pivot_cols[:n]):
        for c, v in prow.items():
            if c >= n:
                inv[col][c - n] = v
    return inv
