"""Reference data: the 17 plane classes, the 14 determinant-commutation
classes, and the 7 reduced diagonal X forms.

Masks list the forced-zero components among the 11 independent ones
(iii, the six aab orbit representatives, 132, 123); constraints are the
printed footnotes.  Matchers return a symbol assignment or None.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..scalar import Scalar
from ..tensor import Matrix3, Tensor3

COMPONENTS = ["111", "222", "333", "211", "311", "122", "322", "133", "233", "132"]


def _is_diag(m: Matrix3) -> bool:
    return all(m.rows[i][j].is_zero() for i in range(3) for j in range(3) if i != j)


def _root_of(v: Scalar, n: int) -> bool:
    return (v ** n) == v.ctx.one


def _jordan2(m: Matrix3):
    """Match [[a,1,0],[0,a,0],[0,0,b]]; returns (a, b) or None."""
    ctx = m.ctx
    r = m.rows
    if not (r[0][1] == ctx.one and r[0][2].is_zero() and r[1][0].is_zero()
            and r[1][2].is_zero() and r[2][0].is_zero() and r[2][1].is_zero()):
        return None
    if r[0][0] != r[1][1]:
        return None
    return r[0][0], r[2][2]


def _jordan3(m: Matrix3):
    """Match [[a,1,0],[0,a,1],[0,0,a]]; returns a or None."""
    ctx = m.ctx
    r = m.rows
    if not (r[0][1] == ctx.one and r[1][2] == ctx.one and r[0][2].is_zero()
            and r[1][0].is_zero() and r[2][0].is_zero() and r[2][1].is_zero()):
        return None
    if r[0][0] == r[1][1] == r[2][2]:
        return r[0][0]
    return None


@dataclass(frozen=True)
class PlaneClassRecord:
    row: int
    q_description: str
    zeros: tuple[str, ...]
    constraints: tuple[str, ...]
    match: Callable[[Matrix3], dict | None]


def _d(m: Matrix3):
    return (m.rows[0][0], m.rows[1][1], m.rows[2][2]) if _is_diag(m) else None


def _nonzero(*vals: Scalar) -> bool:
    return all(not v.is_zero() for v in vals)


def _m1(m):
    return {} if m.is_identity() else None


def _m2(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and d[1] == one and _root_of(d[2], 2):
        return {"g2": d[2]}
    return None


def _m3(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _root_of(d[1], 2) and d[2] == d[1]:
        return {"g2": d[1]}
    return None


def _m4(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _root_of(d[1], 2) and _root_of(d[2], 4):
        return {"g2": d[1], "g4": d[2]}
    return None


def _m5(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _nonzero(d[1]) and d[1] * d[2] == one:
        return {"x": d[1]}
    return None


def _m6(m):
    d = _d(m)
    if d and _root_of(d[0], 3) and d[1] == d[0] and d[2] == d[0]:
        return {"g3": d[0]}
    return None


def _m7(m):
    d = _d(m)
    if d and _root_of(d[2], 6) and d[0] == d[2] ** 4 and d[1] == d[2] ** 4:
        return {"g6": d[2]}
    return None


def _m8(m):
    d = _d(m)
    if d and _root_of(d[0], 9) and d[1] == d[0] ** 7 and d[2] == d[0] ** 4:
        return {"g9": d[0]}
    return None


def _m9(m):
    d = _d(m)
    if d and _nonzero(d[0]) and d[2] == d[0] and d[1] * d[0] ** 2 == m.ctx.one:
        return {"x": d[0]}
    return None


def _m10(m):
    d = _d(m)
    if d and _nonzero(d[0]) and d[1] * d[0] ** 2 == m.ctx.one and _root_of(d[2] / d[0], 2):
        return {"x": d[0], "g2": d[2] / d[0]}
    return None


def _m11(m):
    d = _d(m)
    if d and _nonzero(d[0], d[1]) and d[0] * d[1] * d[2] == m.ctx.one:
        return {"x": d[0], "y": d[1]}
    return None


def _m12(m):
    j = _jordan2(m)
    one = m.ctx.one
    if j and j[0] == one and j[1] == one:
        return {}
    return None


def _m13(m):
    j = _jordan2(m)
    if j and _root_of(j[0], 3) and j[1] == j[0]:
        return {"g3": j[0]}
    return None


def _m14(m):
    j = _jordan2(m)
    if j and _root_of(j[0], 2) and j[1] == m.ctx.one:
        return {"g2": j[0]}
    return None


def _m15(m):
    j = _jordan2(m)
    if j and _nonzero(j[0]) and j[1] * j[0] ** 2 == m.ctx.one:
        return {"x": j[0]}
    return None


def _m16(m):
    a = _jordan3(m)
    return {} if a is not None and a == m.ctx.one else None


def _m17(m):
    a = _jordan3(m)
    if a is not None and _root_of(a, 3):
        return {"g3": a}
    return None


TABLE1: tuple[PlaneClassRecord, ...] = (
    PlaneClassRecord(1, "1,1,1", (), (), _m1),
    PlaneClassRecord(2, "1,1,g2", ("333", "311", "322", "132"), (), _m2),
    PlaneClassRecord(3, "1,g2,g2", ("222", "333", "211", "311", "322", "233"), (), _m3),
    PlaneClassRecord(4, "1,g2,g4", ("222", "333", "211", "311", "322", "133", "132"), (), _m4),
    PlaneClassRecord(5, "1,x,1/x", ("222", "333", "211", "311", "122", "322", "133", "233"), (), _m5),
    PlaneClassRecord(6, "g3,g3,g3", ("111", "222", "333"), (), _m6),
    PlaneClassRecord(7, "g6^4,g6^4,g6", ("111", "222", "333", "311", "322", "132"), (), _m7),
    PlaneClassRecord(8, "g9,g9^7,g9^4", ("111", "222", "333", "311", "122", "233", "132"), (), _m8),
    PlaneClassRecord(9, "x,x^-2,x", ("111", "222", "333", "311", "122", "322", "133"), (), _m9),
    PlaneClassRecord(
        10, "x,x^-2,g2*x", ("111", "222", "333", "311", "122", "322", "133", "132"), (), _m10
    ),
    PlaneClassRecord(
        11, "x,y,1/xy", ("111", "222", "333", "211", "311", "122", "322", "133", "233"), (), _m11
    ),
    PlaneClassRecord(12, "(1,1,1)^1", ("111", "211", "311", "122", "133"), ("fn5",), _m12),
    PlaneClassRecord(
        13, "(g3,g3,g3)^1", ("111", "333", "211", "311", "133"), ("fn1", "fn5"), _m13
    ),
    PlaneClassRecord(
        14, "(g2,g2,1)^1", ("111", "222", "211", "311", "122", "133", "233"), ("fn5",), _m14
    ),
    PlaneClassRecord(
        15, "(x,x,x^-2)^1", ("111", "222", "333", "211", "311", "122", "133", "233"), ("fn5",), _m15
    ),
    PlaneClassRecord(
        16, "(1,1,1)^1_1", ("111", "222", "211", "311", "122", "233"), ("fn2", "fn5"), _m16
    ),
    PlaneClassRecord(
        17, "(g3,g3,g3)^1_1", ("111", "222", "211", "311", "122", "132"), ("fn3", "fn4"), _m17
    ),
)


def plane_constraint_residual(
    name: str, tensor: Tensor3, q: Matrix3, assign: dict
) -> Scalar:
    """Residual of a plane-class footnote constraint; zero means satisfied."""
    ctx = tensor.ctx
    g = lambda key: tensor.get(int(key[0]) - 1, int(key[1]) - 1, int(key[2]) - 1)
    if name == "fn1":  # E_122 = (1-g3) E_222
        return g("122") - (ctx.one - assign["g3"]) * g("222")
    if name == "fn2":  # E_133 = -E_123 - 2 E_322
        return g("133") + g("123") + ctx.rational(2) * g("322")
    if name == "fn3":  # E_133 = -(g3+g3^2) E_322
        g3 = assign["g3"]
        return g("133") + (g3 + g3 * g3) * g("322")
    if name == "fn4":  # E_233 = (1-g3) E_333
        return g("233") - (ctx.one - assign["g3"]) * g("333")
    if name == "fn5":  # alpha_1 E_123 + E_132 = 0
        return q.rows[0][0] * g("123") + g("132")
    raise KeyError(name)


@dataclass(frozen=True)
class XClassRecord:
    row: int
    x_description: str
    zeros: tuple[str, ...]
    twist_z: str
    twist_target: str
    match: Callable[[Matrix3], dict | None]


def _x1(m):
    return {} if m.is_identity() else None


def _x2(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and d[1] == one and _root_of(d[2], 3):
        return {"g3": d[2]}
    return None


def _x3(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _root_of(d[1], 3) and d[2] == d[1] ** 2:
        return {"g3": d[1]}
    return None


def _x4(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and d[1] == one and _root_of(d[2], 2):
        return {"g2": d[2]}
    return None


def _x5(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _root_of(d[2], 6) and d[1] == d[2] ** 4:
        return {"g6": d[2]}
    return None


def _x6(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _root_of(d[1], 2) and d[2] == d[1]:
        return {"g2": d[1]}
    return None


def _x7(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _root_of(d[2], 4) and d[1] == d[2] ** 2:
        return {"g4": d[2]}
    return None


def _x8(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _nonzero(d[2]) and d[1] * d[2] ** 2 == one:
        return {"x": d[2]}
    return None


def _x9(m):
    d = _d(m)
    one = m.ctx.one
    if d and d[0] == one and _nonzero(d[2]) and d[1] * d[2] == one:
        return {"x": d[2]}
    return None


def _x10(m):
    d = _d(m)
    if d and _nonzero(d[1]) and d[2] == d[1] and d[0] * d[1] ** 2 == m.ctx.one:
        return {"x": d[1]}
    return None


def _x11(m):
    d = _d(m)
    if (
        d
        and _nonzero(d[1])
        and d[0] * d[1] ** 2 == m.ctx.one
        and _root_of(d[2] / d[1], 2)
    ):
        return {"x": d[1], "g2": d[2] / d[1]}
    return None


def _x12(m):
    d = _d(m)
    if d and _root_of(d[2], 9) and d[0] == d[2] ** 4 and d[1] == d[2] ** 7:
        return {"g9": d[2]}
    return None


def _x13(m):
    d = _d(m)
    if d and _nonzero(d[2]) and d[0] == d[2] ** 4 and d[1] * d[2] ** 2 == m.ctx.one:
        return {"x": d[2]}
    return None


def _x14(m):
    d = _d(m)
    if d and _nonzero(d[0], d[1]) and d[0] * d[1] * d[2] == m.ctx.one:
        return {"x": d[0], "y": d[1]}
    return None


TABLE2: tuple[XClassRecord, ...] = (
    XClassRecord(1, "1,1,1", (), "-", "", _x1),
    XClassRecord(2, "1,1,g3", ("311", "322", "133", "233", "132"), "-", "", _x2),
    XClassRecord(3, "1,g3,g3^2", ("211", "311", "122", "322", "133", "233"), "-", "", _x3),
    XClassRecord(4, "1,1,g2", ("333", "311", "322", "132"), "X", "1,1,1", _x4),
    XClassRecord(
        5, "1,g6^4,g6", ("333", "211", "311", "122", "322", "133", "132"), "X", "1,g3,g3^2", _x5
    ),
    XClassRecord(6, "1,g2,g2", ("222", "333", "211", "311", "322", "233"), "X", "1,1,1", _x6),
    XClassRecord(
        7, "1,g4^2,g4", ("222", "333", "211", "311", "322", "133", "132"), "X^-1", "1,1,1", _x7
    ),
    XClassRecord(
        8, "1,x^-2,x", ("222", "333", "211", "311", "122", "322", "133", "132"), "X^(1/3)", "1,1,1", _x8
    ),
    XClassRecord(
        9, "1,x^-1,x", ("222", "333", "211", "311", "122", "322", "133", "233"), "X^(1/3)", "1,1,1", _x9
    ),
    XClassRecord(
        10, "x^-2,x,x", ("111", "222", "333", "211", "311", "322", "233"), "X^(1/3)", "1,1,1", _x10
    ),
    XClassRecord(
        11, "x^-2,x,g2*x", ("111", "222", "333", "211", "311", "322", "233", "132"), "X", "x^-2,x,x", _x11
    ),
    XClassRecord(
        12, "g9^4,g9^7,g9", ("111", "222", "333", "211", "322", "133", "132"), "-", "", _x12
    ),
    XClassRecord(
        13, "x^4,x^-2,x", ("111", "222", "333", "211", "311", "322", "133", "132"), "X^(1/3)", "1,1,1", _x13
    ),
    XClassRecord(
        14, "x,y,(xy)^-1", ("111", "222", "333", "211", "311", "122", "322", "133", "233"), "X^(1/3)", "1,1,1", _x14
    ),
)


# the seven reduced diagonal X forms, as (n, k) powers: entry = zeta_n^k
X_REDUCED_FORMS: tuple[tuple[tuple[int, int], ...], ...] = (
    (((1, 0), (1, 0), (1, 0))),
    (((3, 1), (3, 1), (3, 1))),
    (((1, 0), (3, 1), (3, 2))),
    (((9, 1), (9, 4), (9, 7))),
    (((1, 0), (1, 0), (3, 1))),
    (((3, 1), (3, 1), (1, 0))),
    (((3, 1), (3, 1), (3, 2))),
)


def x_in_reduced_list(x: Matrix3) -> bool:
    """Membership in the reduced X list, honoring the +/- branch of zeta_n."""
    ctx = x.ctx
    if not _is_diag(x):
        return False
    d = (x.rows[0][0], x.rows[1][1], x.rows[2][2])
    for form in X_REDUCED_FORMS:
        if any(ctx.conductor % n for n, _ in form):
            continue  # the needed root does not exist at this conductor
        for branch in (1, -1):
            if all(
                d[i] == ctx.root_of_unity(n, branch * k) for i, (n, k) in enumerate(form)
            ):
                return True
    return False
