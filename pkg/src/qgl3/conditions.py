"""The finite tensor identities a solution quadruple (E, F, X, Q) must satisfy.

Every check returns a ConditionReport whose pass status means an exactly zero
residual; the first failing index tuple is recorded as a witness (1-based
indices, matching the catalog notation).
"""

from __future__ import annotations

from .report import ConditionReport, failed, passed, skipped
from .scalar import Scalar, render_scalar
from .tensor import (
    IDX2,
    Mat9,
    Matrix3,
    RelationFamily,
    Tensor3,
    cyclicity_residual,
)


def _witness(index, residual: Scalar) -> dict:
    return {"index": index, "residual": render_scalar(residual)}


def _matrix_check(name: str, m: Matrix3, target: Matrix3, *notes: str) -> ConditionReport:
    d = m - target
    for i in range(3):
        for j in range(3):
            if not d.rows[i][j].is_zero():
                return failed(name, _witness((i + 1, j + 1), d.rows[i][j]))
    return passed(name, *notes)


def _mat9_zero(name: str, m: Mat9, *notes: str) -> ConditionReport:
    hit = m.first_nonzero()
    if hit is not None:
        r, c, v = hit
        return failed(name, _witness((divmod(r, 3)[0] + 1, r % 3 + 1, divmod(c, 3)[0] + 1, c % 3 + 1), v))
    return passed(name, *notes)


def check_cyclicity(tensor: Tensor3, m: Matrix3, name: str) -> ConditionReport:
    bad = cyclicity_residual(tensor, m)
    if bad is None:
        return passed(name)
    return failed(name, {"index": bad, "residual": "nonzero"})


def check_condition_A(e: Tensor3, f: Tensor3, x: Matrix3) -> ConditionReport:
    """E_jmn F^mni = X^i_j (9 exact identities)."""
    from .tensor import char_matrix

    return _matrix_check("condition_A", char_matrix(e, f), x)


def check_condition_B(a: Mat9, xq: Matrix3, kap: Scalar) -> ConditionReport:
    """(1+k) A^ib_aj A^cj_kd (XQ)^-1 d_b = (XQ)^-1 c_a d^i_k + d^i_a d^c_k."""
    ctx = a.ctx
    onek = ctx.one + kap
    if onek.is_zero():
        return skipped("condition_B", "kappa = -1: the 1/(1+kappa) normalization is unavailable")
    xq_inv = xq.inverse()
    for i in range(3):
        for c in range(3):
            for aa in range(3):
                for k in range(3):
                    acc = ctx.zero
                    for j in range(3):
                        for b in range(3):
                            left = a.entry(i, b, aa, j)
                            if left.is_zero():
                                continue
                            for d in range(3):
                                right = a.entry(c, j, k, d)
                                if right.is_zero():
                                    continue
                                w = xq_inv.rows[d][b]
                                if not w.is_zero():
                                    acc = acc + left * right * w
                    acc = onek * acc
                    if i == k:
                        acc = acc - xq_inv.rows[c][aa]
                    if i == aa and c == k:
                        acc = acc - ctx.one
                    if not acc.is_zero():
                        return failed(
                            "condition_B",
                            _witness((i + 1, c + 1, aa + 1, k + 1), acc),
                        )
    notes = ()
    if kap.is_zero():
        notes = ("kappa = 0 for this solution; 1+kappa = 1",)
    return passed("condition_B", *notes)


def check_XY(x: Matrix3, y: Matrix3) -> ConditionReport:
    """XY = 1 (the lambda = 1 normalization)."""
    return _matrix_check("XY_is_identity", x * y, Matrix3.identity(x.ctx))


def check_XQ_PY(x: Matrix3, q: Matrix3, p: Matrix3, y: Matrix3) -> ConditionReport:
    return _matrix_check("XQ_equals_PY", x * q, p * y)


def check_characteristic_commutes(
    p: Matrix3, q: Matrix3, x: Matrix3, y: Matrix3
) -> ConditionReport:
    """[P,Q] = [X,Q] = [Y,Q] = [X,P] = [Y,P] = 0, and P = X^2 Q."""
    pairs = [("P,Q", p, q), ("X,Q", x, q), ("Y,Q", y, q), ("X,P", x, p), ("Y,P", y, p)]
    for label, m1, m2 in pairs:
        c = m1.commutator(m2)
        if not c.is_zero():
            for i in range(3):
                for j in range(3):
                    if not c.rows[i][j].is_zero():
                        return failed(
                            "characteristic_commute",
                            {"pair": label, **_witness((i + 1, j + 1), c.rows[i][j])},
                        )
    d = p - x * x * q
    for i in range(3):
        for j in range(3):
            if not d.rows[i][j].is_zero():
                return failed(
                    "characteristic_commute",
                    {"pair": "P=X^2Q", **_witness((i + 1, j + 1), d.rows[i][j])},
                )
    return passed("characteristic_commute")


def check_kappa_trace(kap: Scalar, x: Matrix3, q: Matrix3) -> ConditionReport:
    """kappa = tr(XQ) = tr((XQ)^-1)."""
    xq = x * q
    t = xq.trace()
    if kap != t:
        return failed("kappa_trace", {"residual": render_scalar(kap - t), "side": "tr(XQ)"})
    tinv = xq.inverse().trace()
    if kap != tinv:
        return failed(
            "kappa_trace", {"residual": render_scalar(kap - tinv), "side": "tr((XQ)^-1)"}
        )
    return passed("kappa_trace")


def check_EF_automorphism(
    e_tensor: Tensor3,
    f_tensor: Tensor3,
    x: Matrix3,
    y: Matrix3,
    e_rel: RelationFamily | None = None,
    f_rel: RelationFamily | None = None,
    e: Matrix3 | None = None,
    f: Matrix3 | None = None,
    g: Matrix3 | None = None,
    h: Matrix3 | None = None,
) -> ConditionReport:
    """E (YxYxY) = E and (XxXxX) F = F (mu = lambda = 1 normalization).

    When families and the e, f, g, h coefficient matrices are supplied, the
    coefficient form and the mu = 1 normalization are verified as well.
    """
    d1 = e_tensor.transform(y, y, y) - e_tensor
    if not d1.is_zero():
        idx, v = d1.first_nonzero()
        return failed("EF_automorphism", {"side": "E(YYY)", **_witness(tuple(n + 1 for n in idx), v)})
    d2 = f_tensor.transform(x, x, x) - f_tensor
    if not d2.is_zero():
        idx, v = d2.first_nonzero()
        return failed("EF_automorphism", {"side": "(XXX)F", **_witness(tuple(n + 1 for n in idx), v)})
    if None not in (e_rel, f_rel, e, f, g, h):
        ctx = e_tensor.ctx
        # coefficient form, E side: E^a_mn g^nb Y^m_k = h^al E^b_lk
        for a in range(3):
            for b in range(3):
                for k in range(3):
                    lhs = ctx.zero
                    for m, n in IDX2:
                        v = e_rel.matrices[a][m][n]
                        if not v.is_zero():
                            lhs = lhs + v * g.rows[n][b] * y.rows[m][k]
                    rhs = ctx.zero
                    for l in range(3):
                        rhs = rhs + h.rows[a][l] * e_rel.matrices[b][l][k]
                    if lhs != rhs:
                        return failed(
                            "EF_automorphism",
                            {"side": "coefficient-form-E", **_witness((a + 1, b + 1, k + 1), lhs - rhs)},
                        )
        # coefficient form, F side: F^mn_a e_nb X^k_m = f_al F^lk_b
        for a in range(3):
            for b in range(3):
                for k in range(3):
                    lhs = ctx.zero
                    for m, n in IDX2:
                        v = f_rel.matrices[a][m][n]
                        if not v.is_zero():
                            lhs = lhs + v * e.rows[n][b] * x.rows[k][m]
                    rhs = ctx.zero
                    for l in range(3):
                        rhs = rhs + f.rows[a][l] * f_rel.matrices[b][l][k]
                    if lhs != rhs:
                        return failed(
                            "EF_automorphism",
                            {"side": "coefficient-form-F", **_witness((a + 1, b + 1, k + 1), lhs - rhs)},
                        )
        # mu = 1: F^ij_a e_jc E^a_kn g^nc = delta^i_k
        for i in range(3):
            for k in range(3):
                acc = ctx.zero
                for a in range(3):
                    for j in range(3):
                        v1 = f_rel.matrices[a][i][j]
                        if v1.is_zero():
                            continue
                        for c in range(3):
                            ejc = e.rows[j][c]
                            if ejc.is_zero():
                                continue
                            for n in range(3):
                                v2 = e_rel.matrices[a][k][n]
                                if not v2.is_zero():
                                    acc = acc + v1 * ejc * v2 * g.rows[n][c]
                if i == k:
                    acc = acc - ctx.one
                if not acc.is_zero():
                    return failed(
                        "EF_automorphism",
                        {"side": "mu=1", **_witness((i + 1, k + 1), acc)},
                    )
    return passed("EF_automorphism")


def check_projector(a: Mat9, x: Matrix3, q: Matrix3) -> ConditionReport:
    """A^2 = A, tr A = 3, [A, XxX] = [A, QxQ] = 0."""
    ctx = a.ctx
    d = a * a - a
    hit = d.first_nonzero()
    if hit is not None:
        r, c, v = hit
        return failed("projector", {"part": "A^2=A", **_witness((r, c), v)})
    t = a.trace() - ctx.rational(3)
    if not t.is_zero():
        return failed("projector", {"part": "trA=3", "residual": render_scalar(t)})
    for label, m in (("[A,XxX]", x.tensor_square()), ("[A,QxQ]", q.tensor_square())):
        hit = a.commutator(m).first_nonzero()
        if hit is not None:
            r, c, v = hit
            return failed("projector", {"part": label, **_witness((r, c), v)})
    return passed("projector")


def check_normalization(e_rel: RelationFamily, f_rel: RelationFamily) -> ConditionReport:
    """E^a_ij F^ij_b = delta^a_b after catalog normalization."""
    from .tensor import pairing_matrix

    return _matrix_check(
        "subdeterminant_normalization",
        pairing_matrix(e_rel, f_rel),
        Matrix3.identity(e_rel.ctx),
    )


def check_MN_structure(
    m: Mat9,
    n: Mat9,
    e: Matrix3,
    f: Matrix3,
    g: Matrix3,
    h: Matrix3,
    kap: Scalar,
) -> ConditionReport:
    """The M/N product structure with alpha = beta = 1/(1+kappa).

    Composite index conventions follow build_mn: M rows (a,i) -> 3a+i with
    columns (j,b) -> 3j+b; N rows (i,a) -> 3i+a with columns (b,j) -> 3b+j.
    e and g are stored with Latin row / Greek column, f and h with Greek row
    / Latin column.
    """
    ctx = m.ctx
    onek = ctx.one + kap
    if onek.is_zero():
        return skipped("MN_structure", "kappa = -1: alpha = beta undefined")
    ab = onek.inverse()
    # fM = e
    for j in range(3):
        for b in range(3):
            acc = ctx.zero
            for a in range(3):
                for i in range(3):
                    acc = acc + f.rows[a][i] * m.rows[3 * a + i][3 * j + b]
            if acc != e.rows[j][b]:
                return failed("MN_structure", {"part": "fM=e", **_witness((j + 1, b + 1), acc - e.rows[j][b])})
    # Mg = h
    for a in range(3):
        for i in range(3):
            acc = ctx.zero
            for j in range(3):
                for b in range(3):
                    acc = acc + m.rows[3 * a + i][3 * j + b] * g.rows[j][b]
            if acc != h.rows[a][i]:
                return failed("MN_structure", {"part": "Mg=h", **_witness((a + 1, i + 1), acc - h.rows[a][i])})
    # eN = f
    for b in range(3):
        for j in range(3):
            acc = ctx.zero
            for i in range(3):
                for a in range(3):
                    acc = acc + e.rows[i][a] * n.rows[3 * i + a][3 * b + j]
            if acc != f.rows[b][j]:
                return failed("MN_structure", {"part": "eN=f", **_witness((b + 1, j + 1), acc - f.rows[b][j])})
    # Nh = g
    for i in range(3):
        for a in range(3):
            acc = ctx.zero
            for b in range(3):
                for j in range(3):
                    acc = acc + n.rows[3 * i + a][3 * b + j] * h.rows[b][j]
            if acc != g.rows[i][a]:
                return failed("MN_structure", {"part": "Nh=g", **_witness((i + 1, a + 1), acc - g.rows[i][a])})
    # MN = ab (1x1) + ab h(x)f  and  NM = ab (1x1) + ab g(x)e
    for a in range(3):
        for i in range(3):
            for b in range(3):
                for j in range(3):
                    acc = ctx.zero
                    for mm in range(3):
                        for gg in range(3):
                            acc = acc + m.rows[3 * a + i][3 * mm + gg] * n.rows[3 * mm + gg][3 * b + j]
                    want = ab * h.rows[a][i] * f.rows[b][j]
                    if a == b and i == j:
                        want = want + ab
                    if acc != want:
                        return failed("MN_structure", {"part": "MN", **_witness((a + 1, i + 1, b + 1, j + 1), acc - want)})
    for i in range(3):
        for a in range(3):
            for j in range(3):
                for b in range(3):
                    acc = ctx.zero
                    for gg in range(3):
                        for mm in range(3):
                            acc = acc + n.rows[3 * i + a][3 * gg + mm] * m.rows[3 * gg + mm][3 * j + b]
                    want = ab * g.rows[i][a] * e.rows[j][b]
                    if i == j and a == b:
                        want = want + ab
                    if acc != want:
                        return failed("MN_structure", {"part": "NM", **_witness((i + 1, a + 1, j + 1, b + 1), acc - want)})
    # alpha + beta*kappa = 1 holds identically for alpha = beta = 1/(1+k)
    if ab + ab * kap != ctx.one:
        return failed("MN_structure", {"part": "alpha+beta*kappa=1"})
    return passed("MN_structure")


def verify_solution(record, depth: str = "tensor", **kwargs):
    """Aggregate every check for one record; see qgl3.verify for the engine."""
    from .verify import verify_solution as _impl

    return _impl(record, depth, **kwargs)


def check_kappa_pairings(
    kap: Scalar, e: Matrix3, f: Matrix3, g: Matrix3, h: Matrix3
) -> ConditionReport:
    """kappa = e_ia g^ia = f_ai h^ai (the pairing contractions)."""
    ctx = kap.ctx
    s1 = ctx.zero
    s2 = ctx.zero
    for i in range(3):
        for a in range(3):
            s1 = s1 + e.rows[i][a] * g.rows[i][a]
            s2 = s2 + f.rows[a][i] * h.rows[a][i]
    if s1 != kap:
        return failed("kappa_pairings", {"side": "e.g", "residual": render_scalar(s1 - kap)})
    if s2 != kap:
        return failed("kappa_pairings", {"side": "f.h", "residual": render_scalar(s2 - kap)})
    return passed("kappa_pairings")
