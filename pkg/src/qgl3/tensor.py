"""Rank-3 tensors and 3x3 matrices over the exact scalar field.

Index conventions (all storage 0-based):
  * Matrix3 entries M[i][j] represent M^i_j (upper index = row).
  * lower-variance tensors satisfy the cyclicity law  T_ijk = Q^l_k T_lij,
    upper-variance tensors satisfy                    T^ijk = P^k_l T^lij.
  * 9x9 matrices (Mat9) flatten a pair (i,j) to 3*i+j, both for rows and
    columns, in lexicographic order 11,12,...,33.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import linalg
from .scalar import Context, Scalar

IDX3 = [(i, j, k) for i in range(3) for j in range(3) for k in range(3)]
IDX2 = [(i, j) for i in range(3) for j in range(3)]

EPS = {
    (0, 1, 2): 1,
    (1, 2, 0): 1,
    (2, 0, 1): 1,
    (0, 2, 1): -1,
    (2, 1, 0): -1,
    (1, 0, 2): -1,
}


class TensorError(ValueError):
    pass


class CompletionError(TensorError):
    """Cyclicity completion failed (inconsistent pins)."""


class IntersectionError(TensorError):
    """Intersection space is not one-dimensional."""


class DegenerateIntersectionError(TensorError):
    """Intersection exists but e or f is singular (degenerate plane)."""

    def __init__(self, message: str, tensor=None, e=None, f=None):
        super().__init__(message)
        self.tensor = tensor
        self.e = e
        self.f = f


class SingularMatrixError(TensorError):
    pass


# ---------------------------------------------------------------------------
# Matrix3
# ---------------------------------------------------------------------------


class Matrix3:
    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: Context, rows):
        self.ctx = ctx
        self.rows = tuple(tuple(r) for r in rows)
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("Matrix3 requires 3x3 entries")

    @staticmethod
    def identity(ctx: Context) -> "Matrix3":
        z, o = ctx.zero, ctx.one
        return Matrix3(ctx, [[o, z, z], [z, o, z], [z, z, o]])

    @staticmethod
    def zero(ctx: Context) -> "Matrix3":
        z = ctx.zero
        return Matrix3(ctx, [[z] * 3] * 3)

    @staticmethod
    def diag(ctx: Context, entries: Iterable[Scalar]) -> "Matrix3":
        e = list(entries)
        z = ctx.zero
        return Matrix3(ctx, [[e[0], z, z], [z, e[1], z], [z, z, e[2]]])

    def __getitem__(self, i: int):
        return self.rows[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix3) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self, other: "Matrix3") -> "Matrix3":
        return Matrix3(
            self.ctx,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "Matrix3") -> "Matrix3":
        return Matrix3(
            self.ctx,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __neg__(self) -> "Matrix3":
        return Matrix3(self.ctx, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix3):
            return Matrix3(
                self.ctx,
                [
                    [
                        sum(
                            (self.rows[i][k] * other.rows[k][j] for k in range(3)),
                            self.ctx.zero,
                        )
                        for j in range(3)
                    ]
                    for i in range(3)
                ],
            )
        return self.scale(other)

    def scale(self, s: Scalar) -> "Matrix3":
        return Matrix3(self.ctx, [[a * s for a in r] for r in self.rows])

    def transpose(self) -> "Matrix3":
        return Matrix3(self.ctx, [[self.rows[j][i] for j in range(3)] for i in range(3)])

    def trace(self) -> Scalar:
        return self.rows[0][0] + self.rows[1][1] + self.rows[2][2]

    def det(self) -> Scalar:
        r = self.rows
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def inverse(self) -> "Matrix3":
        d = self.det()
        if d.is_zero():
            raise SingularMatrixError("matrix is singular")
        r = self.rows
        cof = [
            [
                r[(i + 1) % 3][(j + 1) % 3] * r[(i + 2) % 3][(j + 2) % 3]
                - r[(i + 1) % 3][(j + 2) % 3] * r[(i + 2) % 3][(j + 1) % 3]
                for j in range(3)
            ]
            for i in range(3)
        ]
        dinv = d.inverse()
        return Matrix3(self.ctx, [[cof[j][i] * dinv for j in range(3)] for i in range(3)])

    def commutator(self, other: "Matrix3") -> "Matrix3":
        return self * other - other * self

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def is_identity(self) -> bool:
        return self == Matrix3.identity(self.ctx)

    def pow(self, k: int) -> "Matrix3":
        if k < 0:
            return self.inverse().pow(-k)
        out = Matrix3.identity(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def tensor_square(self) -> "Mat9":
        """Z (x) Z as a 9x9 matrix: (Z(x)Z)^(ij)_(kl) = Z^i_k Z^j_l."""
        return kron(self, self)

    def __repr__(self) -> str:
        return "Matrix3(" + "; ".join(", ".join(repr(a) for a in r) for r in self.rows) + ")"


def kron(a: Matrix3, b: Matrix3) -> "Mat9":
    ctx = a.ctx
    ent = [[ctx.zero] * 9 for _ in range(9)]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    ent[3 * i + j][3 * k + l] = a.rows[i][k] * b.rows[j][l]
    return Mat9(ctx, ent)


# ---------------------------------------------------------------------------
# Mat9
# ---------------------------------------------------------------------------


class Mat9:
    """Dense 9x9 matrix of Scalars in the fixed (i,j) -> 3i+j flattening."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: Context, rows):
        self.ctx = ctx
        self.rows = tuple(tuple(r) for r in rows)
        if len(self.rows) != 9 or any(len(r) != 9 for r in self.rows):
            raise ValueError("Mat9 requires 9x9 entries")

    @staticmethod
    def identity(ctx: Context) -> "Mat9":
        return Mat9(
            ctx, [[ctx.one if i == j else ctx.zero for j in range(9)] for i in range(9)]
        )

    @staticmethod
    def zero(ctx: Context) -> "Mat9":
        return Mat9(ctx, [[ctx.zero] * 9 for _ in range(9)])

    @staticmethod
    def from_entries(ctx: Context, entries: dict[tuple[int, int], Scalar]) -> "Mat9":
        rows = [[ctx.zero] * 9 for _ in range(9)]
        for (r, c), v in entries.items():
            rows[r][c] = v
        return Mat9(ctx, rows)

    def __getitem__(self, i: int):
        return self.rows[i]

    def entry(self, i: int, j: int, k: int, l: int) -> Scalar:
        return self.rows[3 * i + j][3 * k + l]

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat9) and self.rows == other.rows

    def __add__(self, other: "Mat9") -> "Mat9":
        return Mat9(
            self.ctx,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "Mat9") -> "Mat9":
        return Mat9(
            self.ctx,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __mul__(self, other):
        if isinstance(other, Mat9):
            nz = [
                [(k, v) for k, v in enumerate(row) if not v.is_zero()] for row in self.rows
            ]
            out = [[self.ctx.zero] * 9 for _ in range(9)]
            for i in range(9):
                for k, v in nz[i]:
                    orow = other.rows[k]
                    for j in range(9):
                        if not orow[j].is_zero():
                            out[i][j] = out[i][j] + v * orow[j]
            return Mat9(self.ctx, out)
        return self.scale(other)

    def scale(self, s: Scalar) -> "Mat9":
        return Mat9(self.ctx, [[a * s for a in r] for r in self.rows])

    def __neg__(self) -> "Mat9":
        return Mat9(self.ctx, [[-a for a in r] for r in self.rows])

    def trace(self) -> Scalar:
        t = self.ctx.zero
        for i in range(9):
            t = t + self.rows[i][i]
        return t

    def commutator(self, other: "Mat9") -> "Mat9":
        return self * other - other * self

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def first_nonzero(self):
        for r in range(9):
            for c in range(9):
                if not self.rows[r][c].is_zero():
                    return (r, c, self.rows[r][c])
        return None

    def nonzero_items(self):
        for r in range(9):
            for c in range(9):
                if not self.rows[r][c].is_zero():
                    yield (r, c, self.rows[r][c])


# ---------------------------------------------------------------------------
# Tensor3
# ---------------------------------------------------------------------------


class Tensor3:
    """Sparse rank-3 tensor; variance is 'lower' (E-like) or 'upper' (F-like)."""

    __slots__ = ("ctx", "variance", "entries")

    def __init__(self, ctx: Context, variance: str, entries: dict):
        if variance not in ("lower", "upper"):
            raise ValueError("variance must be 'lower' or 'upper'")
        self.ctx = ctx
        self.variance = variance
        self.entries = {k: v for k, v in entries.items() if not v.is_zero()}

    def get(self, i: int, j: int, k: int) -> Scalar:
        return self.entries.get((i, j, k), self.ctx.zero)

    def items(self):
        return self.entries.items()

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tensor3)
            and self.variance == other.variance
            and self.entries == other.entries
        )

    def scale(self, s: Scalar) -> "Tensor3":
        return Tensor3(self.ctx, self.variance, {k: v * s for k, v in self.entries.items()})

    def __add__(self, other: "Tensor3") -> "Tensor3":
        out = dict(self.entries)
        for k, v in other.entries.items():
            cur = out.get(k)
            out[k] = v if cur is None else cur + v
        return Tensor3(self.ctx, self.variance, out)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return self + other.scale(-self.ctx.one)

    def with_entry(self, idx: tuple[int, int, int], value: Scalar) -> "Tensor3":
        out = dict(self.entries)
        if value.is_zero():
            out.pop(idx, None)
        else:
            out[idx] = value
        return Tensor3(self.ctx, self.variance, out)

    def first_nonzero(self):
        for idx in IDX3:
            v = self.entries.get(idx)
            if v is not None:
                return idx, v
        return None

    def transform(self, a: Matrix3, b: Matrix3, c: Matrix3) -> "Tensor3":
        """Apply a (x) b (x) c respecting variance.

        lower: T'(i,j,k) = sum T(p,q,r) a^p_i b^q_j c^r_k   (T (A x B x C))
        upper: T'(i,j,k) = sum a^i_p b^j_q c^k_r T(p,q,r)   ((A x B x C) T)
        """
        out: dict = {}
        lower = self.variance == "lower"
        for (p, q, r), v in self.entries.items():
            for i in range(3):
                ai = a.rows[p][i] if lower else a.rows[i][p]
                if ai.is_zero():
                    continue
                for j in range(3):
                    bj = b.rows[q][j] if lower else b.rows[j][q]
                    if bj.is_zero():
                        continue
                    vb = v * ai * bj
                    for k in range(3):
                        ck = c.rows[r][k] if lower else c.rows[k][r]
                        if ck.is_zero():
                            continue
                        key = (i, j, k)
                        cur = out.get(key)
                        add = vb * ck
                        out[key] = add if cur is None else cur + add
        return Tensor3(self.ctx, self.variance, out)


def epsilon_tensor(ctx: Context, variance: str = "lower") -> Tensor3:
    return Tensor3(
        ctx, variance, {idx: ctx.rational(s) for idx, s in EPS.items()}
    )


# ---------------------------------------------------------------------------
# cyclicity
# ---------------------------------------------------------------------------


def _cyc_coeff(m: Matrix3, variance: str, k: int, l: int) -> Scalar:
    # lower: T_ijk = Q^l_k T_lij ; upper: T^ijk = P^k_l T^lij
    return m.rows[l][k] if variance == "lower" else m.rows[k][l]


def complete_by_cyclicity(
    components: dict[tuple[int, int, int], Scalar],
    m: Matrix3,
    variance: str = "lower",
) -> tuple[Tensor3, list[tuple[int, int, int]]]:
    """Extend the given independent components to the unique cyclic tensor.

    Solves the 27-equation linear system T(i,j,k) = sum_l coeff(l,k) T(l,i,j)
    together with the pins.  Components not forced by the system default to
    zero and are returned as the second element (free components).
    Raises CompletionError when the pins are inconsistent with cyclicity.
    """
    ctx = m.ctx
    pos = {idx: n for n, idx in enumerate(IDX3)}
    rows: list[dict[int, Scalar]] = []
    rhs: list[Scalar] = []
    for (i, j, k) in IDX3:
        row: dict[int, Scalar] = {pos[(i, j, k)]: ctx.one}
        for l in range(3):
            c = _cyc_coeff(m, variance, k, l)
            if not c.is_zero():
                t = pos[(l, i, j)]
                cur = row.get(t)
                val = -c if cur is None else cur - c
                if val.is_zero():
                    row.pop(t, None)
                else:
                    row[t] = val
        rows.append(row)
        rhs.append(ctx.zero)
    for idx, val in components.items():
        rows.append({pos[idx]: ctx.one})
        rhs.append(val)
    solved = linalg.solve(rows, rhs, 27, ctx)
    if solved is None:
        raise CompletionError(
            "independent components are inconsistent with the cyclicity law"
        )
    sol, free = solved
    tensor = Tensor3(
        ctx, variance, {IDX3[n]: sol[n] for n in range(27) if not sol[n].is_zero()}
    )
    # exact entrywise re-check of the cyclicity law
    bad = cyclicity_residual(tensor, m)
    if bad is not None:
        raise CompletionError(f"completion violates cyclicity at {bad}")
    return tensor, [IDX3[n] for n in free]


def cyclicity_residual(t: Tensor3, m: Matrix3):
    """First index where T breaks its cyclicity law, or None."""
    for (i, j, k) in IDX3:
        acc = t.get(i, j, k)
        for l in range(3):
            c = _cyc_coeff(m, t.variance, k, l)
            if not c.is_zero():
                acc = acc - c * t.get(l, i, j)
        if not acc.is_zero():
            return (i + 1, j + 1, k + 1)
    return None


def cyclic_matrix(t: Tensor3) -> Matrix3:
    """Solve T for its cyclicity matrix (Q for lower, P for upper)."""
    ctx = t.ctx
    rows: list[dict[int, Scalar]] = []
    rhs: list[Scalar] = []
    for (i, j, k) in IDX3:
        row: dict[int, Scalar] = {}
        for l in range(3):
            coef = t.get(l, i, j)
            if not coef.is_zero():
                unk = 3 * l + k if t.variance == "lower" else 3 * k + l
                row[unk] = coef
        rows.append(row)
        rhs.append(t.get(i, j, k))
    solved = linalg.solve(rows, rhs, 9, ctx)
    if solved is None:
        raise SingularMatrixError("no cyclicity matrix exists for this tensor")
    sol, free = solved
    if free:
        raise SingularMatrixError("cyclicity matrix is not unique")
    m = Matrix3(ctx, [[sol[3 * a + b] for b in range(3)] for a in range(3)])
    if m.det().is_zero():
        raise SingularMatrixError("cyclicity matrix is singular")
    return m


# ---------------------------------------------------------------------------
# relation families and the intersection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationFamily:
    """Three quadratic relations E^a_ij (lower) or F_a^ij (upper)."""

    ctx: Context
    variance: str
    matrices: tuple  # 3 x (3x3 tuple of Scalars)

    @staticmethod
    def from_tensor_slices(t: Tensor3) -> "RelationFamily":
        """Slice T along the first index: relation a has matrix T[a,i,j]."""
        mats = tuple(
            tuple(tuple(t.get(a, i, j) for j in range(3)) for i in range(3))
            for a in range(3)
        )
        return RelationFamily(t.ctx, t.variance, mats)

    def matrix(self, a: int):
        return self.matrices[a]

    def vectors(self) -> list[list[Scalar]]:
        """Each relation as a 9-vector over the (i,j) -> 3i+j flattening."""
        return [
            [self.matrices[a][i][j] for (i, j) in IDX2] for a in range(3)
        ]

    def independent(self) -> bool:
        rows = []
        for vec in self.vectors():
            rows.append({c: v for c, v in enumerate(vec) if not v.is_zero()})
        return linalg.rank(rows, 9) == 3

    def apply_left(self, c: Matrix3) -> "RelationFamily":
        """New family with matrices C^a_b * rel_b."""
        mats = []
        for a in range(3):
            acc = [[self.ctx.zero] * 3 for _ in range(3)]
            for b in range(3):
                coef = c.rows[a][b]
                if coef.is_zero():
                    continue
                for i in range(3):
                    for j in range(3):
                        acc[i][j] = acc[i][j] + coef * self.matrices[b][i][j]
            mats.append(tuple(tuple(r) for r in acc))
        return RelationFamily(self.ctx, self.variance, tuple(mats))


def pairing_matrix(e_rel: RelationFamily, f_rel: RelationFamily) -> Matrix3:
    """C^a_b = E^a_ij F^ij_b."""
    ctx = e_rel.ctx
    ent = [
        [
            sum(
                (
                    e_rel.matrices[a][i][j] * f_rel.matrices[b][i][j]
                    for (i, j) in IDX2
                ),
                ctx.zero,
            )
            for b in range(3)
        ]
        for a in range(3)
    ]
    return Matrix3(ctx, ent)


def normalize_pair(e_rel: RelationFamily, f_rel: RelationFamily):
    """Rescale the E-family so that E^a_ij F^ij_b = delta^a_b.

    Returns (new_e_rel, C) where C is the original pairing matrix.
    """
    c = pairing_matrix(e_rel, f_rel)
    if c.det().is_zero():
        raise SingularMatrixError("pairing matrix E^a F_b is singular")
    return e_rel.apply_left(c.inverse()), c


def solve_intersection(rel: RelationFamily, scale_to: Tensor3 | None = None):
    """Unique intersection of span{1 (x) rel} and span{rel (x) 1} in degree 3.

    Returns (tensor, e, f) with e_{ia}(1^i (x) rel^a) = f_{ai}(rel^a (x) 1^i)
    equal to the tensor.  Raises IntersectionError when the intersection has
    dimension 0 or >= 2, DegenerateIntersectionError when e or f is singular.
    """
    ctx = rel.ctx
    if not rel.independent():
        raise IntersectionError("relation family is linearly dependent")
    pos = {idx: n for n, idx in enumerate(IDX3)}
    # unknowns: c_{ia} (9, flattened 3i+a) then d_{ai} (9, flattened 3a+i)
    rows: dict[int, dict[int, Scalar]] = {n: {} for n in range(27)}
    for i in range(3):
        for a in range(3):
            unk = 3 * i + a
            for (b, c_) in IDX2:
                v = rel.matrices[a][b][c_]
                if not v.is_zero():
                    row = rows[pos[(i, b, c_)]]
                    row[unk] = row.get(unk, ctx.zero) + v
    for a in range(3):
        for i in range(3):
            unk = 9 + 3 * a + i
            for (b, c_) in IDX2:
                v = rel.matrices[a][b][c_]
                if not v.is_zero():
                    row = rows[pos[(b, c_, i)]]
                    row[unk] = row.get(unk, ctx.zero) - v
    null = linalg.nullspace([rows[n] for n in range(27)], 18, ctx)
    if len(null) == 0:
        raise IntersectionError("intersection is zero-dimensional")
    if len(null) > 1:
        raise IntersectionError(
            f"intersection is {len(null)}-dimensional (more than one solution)"
        )
    vec = null[0]
    e = Matrix3(ctx, [[vec[3 * i + a] for a in range(3)] for i in range(3)])
    f = Matrix3(ctx, [[vec[9 + 3 * a + i] for i in range(3)] for a in range(3)])
    entries: dict = {}
    for i in range(3):
        for a in range(3):
            coef = e.rows[i][a]
            if coef.is_zero():
                continue
            for (b, c_) in IDX2:
                v = rel.matrices[a][b][c_]
                if not v.is_zero():
                    key = (i, b, c_)
                    cur = entries.get(key)
                    add = coef * v
                    entries[key] = add if cur is None else cur + add
    tensor = Tensor3(ctx, rel.variance, entries)
    if tensor.is_zero():
        raise IntersectionError("intersection tensor is zero")
    first = tensor.first_nonzero()
    assert first is not None
    idx, val = first
    if scale_to is not None:
        target = scale_to.get(*idx)
        if target.is_zero():
            raise IntersectionError("scale reference vanishes at the leading entry")
        factor = target / val
    else:
        factor = val.inverse()
    tensor = tensor.scale(factor)
    e = e.scale(factor)
    f = f.scale(factor)
    if e.det().is_zero() or f.det().is_zero():
        raise DegenerateIntersectionError(
            "degenerate intersection: e or f is singular", tensor, e, f
        )
    return tensor, e, f


# ---------------------------------------------------------------------------
# characteristic matrices and contractions
# ---------------------------------------------------------------------------


def char_matrix(e: Tensor3, f: Tensor3) -> Matrix3:
    """X^i_j = E_jmn F^mni."""
    ctx = e.ctx
    ent = [[ctx.zero] * 3 for _ in range(3)]
    for (j, m, n), ev in e.entries.items():
        for i in range(3):
            fv = f.entries.get((m, n, i))
            if fv is not None:
                ent[i][j] = ent[i][j] + ev * fv
    return Matrix3(ctx, ent)


def char_matrix_y(e: Tensor3, f: Tensor3) -> Matrix3:
    """Y^i_j = F^imn E_mnj (roles of E and F swapped)."""
    ctx = e.ctx
    ent = [[ctx.zero] * 3 for _ in range(3)]
    for (i, m, n), fv in f.entries.items():
        for j in range(3):
            ev = e.entries.get((m, n, j))
            if ev is not None:
                ent[i][j] = ent[i][j] + fv * ev
    return Matrix3(ctx, ent)


def kappa(e: Tensor3, f: Tensor3) -> Scalar:
    """Full contraction E_ijk F^ijk."""
    acc = e.ctx.zero
    for idx, ev in e.entries.items():
        fv = f.entries.get(idx)
        if fv is not None:
            acc = acc + ev * fv
    return acc


def antisymmetrizer(e: Tensor3, f: Tensor3, x: Matrix3) -> Mat9:
    """A^(ij)_(kl) = E_klm X^m_n F^nij (lambda = 1 normalization)."""
    ctx = e.ctx
    ent = [[ctx.zero] * 9 for _ in range(9)]
    for (k, l, m), ev in e.entries.items():
        for n in range(3):
            xm = x.rows[m][n]
            if xm.is_zero():
                continue
            coef = ev * xm
            for (n2, i, j), fv in f.entries.items():
                if n2 == n:
                    r, c = 3 * i + j, 3 * k + l
                    ent[r][c] = ent[r][c] + coef * fv
    return Mat9(ctx, ent)


# ---------------------------------------------------------------------------
# M and N
# ---------------------------------------------------------------------------


def build_mn(e_rel: RelationFamily, f_rel: RelationFamily) -> tuple[Mat9, Mat9]:
    """M^(ai)_(jb) = E^a_jn F^ni_b and N^(ia)_(bj) = F^in_b E^a_nj.

    Requires the normalization E^a_ij F^ij_b = delta^a_b; raises
    SingularMatrixError otherwise.  Composite flattening: M rows 3a+i,
    columns 3j+b; N rows 3i+a, columns 3b+j.
    """
    ctx = e_rel.ctx
    c = pairing_matrix(e_rel, f_rel)
    if c != Matrix3.identity(ctx):
        raise SingularMatrixError("relation families are not delta-normalized")
    m = [[ctx.zero] * 9 for _ in range(9)]
    n_ = [[ctx.zero] * 9 for _ in range(9)]
    for a in range(3):
        for i in range(3):
            for j in range(3):
                for b in range(3):
                    acc = ctx.zero
                    acc2 = ctx.zero
                    for n in range(3):
                        acc = acc + e_rel.matrices[a][j][n] * f_rel.matrices[b][n][i]
                        acc2 = acc2 + f_rel.matrices[b][i][n] * e_rel.matrices[a][n][j]
                    m[3 * a + i][3 * j + b] = acc
                    n_[3 * i + a][3 * b + j] = acc2
    return Mat9(ctx, m), Mat9(ctx, n_)


# ---------------------------------------------------------------------------
# epsilon decomposition
# ---------------------------------------------------------------------------

_SYM_BASIS = [
    (a, b, c)
    for a in range(3)
    for b in range(a, 3)
    for c in range(b, 3)
]

_TRACELESS = [
    (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1),
]  # off-diagonal units; diagonal handled by two extra generators


def _traceless_matrix(ctx: Context, coeffs: list[Scalar]) -> Matrix3:
    z = ctx.zero
    ent = [[z] * 3 for _ in range(3)]
    for (pos, val) in zip(_TRACELESS, coeffs[:6]):
        ent[pos[0]][pos[1]] = val
    d1, d2 = coeffs[6], coeffs[7]
    ent[0][0] = d1
    ent[1][1] = d2
    ent[2][2] = -(d1 + d2)
    return Matrix3(ctx, ent)


def _s_term(ctx: Context, s: Matrix3, variance: str) -> dict:
    # lower: S^m_i eps_mjk ; upper: S~^i_m eps^mjk (transposed coefficient)
    out: dict = {}
    for (m, j, k), sign in EPS.items():
        for i in range(3):
            v = s.rows[m][i] if variance == "lower" else s.rows[i][m]
            if not v.is_zero():
                key = (i, j, k)
                add = v * ctx.rational(sign)
                cur = out.get(key)
                out[key] = add if cur is None else cur + add
    return out


def _t_term(ctx: Context, t: Matrix3, variance: str) -> dict:
    # lower: eps_ijn T^n_k ; upper: eps^ijn T~^k_n (transposed coefficient)
    out: dict = {}
    for (i, j, n), sign in EPS.items():
        for k in range(3):
            v = t.rows[n][k] if variance == "lower" else t.rows[k][n]
            if not v.is_zero():
                key = (i, j, k)
                add = v * ctx.rational(sign)
                cur = out.get(key)
                out[key] = add if cur is None else cur + add
    return out


def recompose(alpha: Scalar, s: Matrix3, t: Matrix3, phi: Tensor3) -> Tensor3:
    """alpha*eps + S.eps + eps.T + phi with the variance-dependent index placement."""
    ctx = alpha.ctx
    ent: dict = {}
    for idx, sign in EPS.items():
        ent[idx] = alpha * ctx.rational(sign)
    for part in (_s_term(ctx, s, phi.variance), _t_term(ctx, t, phi.variance)):
        for k, v in part.items():
            cur = ent.get(k)
            ent[k] = v if cur is None else cur + v
    for k, v in phi.entries.items():
        cur = ent.get(k)
        ent[k] = v if cur is None else cur + v
    return Tensor3(ctx, phi.variance, ent)


def decompose(t: Tensor3):
    """Unique decomposition T = alpha*eps + S.eps + eps.T' + phi.

    S and T' are traceless, phi is totally symmetric; returns
    (alpha, S, T', phi).  Always exists and is unique.
    """
    ctx = t.ctx
    pos = {idx: n for n, idx in enumerate(IDX3)}
    cols: list[dict] = []
    one = ctx.one
    # column 0: eps
    cols.append({idx: ctx.rational(s) for idx, s in EPS.items()})
    # 8 S columns, 8 T columns
    for gen in range(8):
        coeffs = [ctx.zero] * 8
        coeffs[gen] = one
        sm = _traceless_matrix(ctx, coeffs)
        cols.append(_s_term(ctx, sm, t.variance))
    for gen in range(8):
        coeffs = [ctx.zero] * 8
        coeffs[gen] = one
        tm = _traceless_matrix(ctx, coeffs)
        cols.append(_t_term(ctx, tm, t.variance))
    # 10 symmetric columns
    import itertools

    for (a, b, c) in _SYM_BASIS:
        col: dict = {}
        for perm in set(itertools.permutations((a, b, c))):
            col[perm] = one
        cols.append(col)
    rows: list[dict[int, Scalar]] = [dict() for _ in range(27)]
    for cidx, col in enumerate(cols):
        for idx, v in col.items():
            rows[pos[idx]][cidx] = v
    rhs = [t.get(*idx) for idx in IDX3]
    solved = linalg.solve(rows, rhs, 27, ctx)
    if solved is None:
        raise TensorError("decomposition system is inconsistent")  # pragma: no cover
    sol, free = solved
    if free:
        raise TensorError("decomposition is not unique")  # pragma: no cover
    alpha = sol[0]
    s = _traceless_matrix(ctx, sol[1:9])
    tm = _traceless_matrix(ctx, sol[9:17])
    phi_entries: dict = {}
    for n, (a, b, c) in enumerate(_SYM_BASIS):
        v = sol[17 + n]
        if not v.is_zero():
            for perm in set(itertools.permutations((a, b, c))):
                phi_entries[perm] = v
    phi = Tensor3(ctx, t.variance, phi_entries)
    return alpha, s, tm, phi
