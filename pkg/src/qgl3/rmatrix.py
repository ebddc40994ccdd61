"""R-matrix construction, Yang-Baxter/Hecke checks, twists, automorphisms.

The 9x9 flattening is row-major over (i,j) for rows and columns alike.  The
printed blocks in the source tables enumerate the row pair as (j,i); loaders
re-index them (see AppendixBlock).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import linalg
from .catalog.runtime import SolutionData
from .report import ConditionReport, failed, passed
from .scalar import Context, Param, Scalar, parse_scalar, render_scalar, sqrt_rational
from .tensor import (
    IDX2,
    Mat9,
    Matrix3,
    RelationFamily,
    Tensor3,
    decompose,
    kron,
)

RMATRIX_FORMAT = "qgl3-rmatrix"
RMATRIX_VERSION = 1


class RMatrix(Mat9):
    """A 9x9 Yang-Baxter candidate with its Hecke parameter q."""

    __slots__ = ("q",)

    def __init__(self, ctx: Context, rows, q: Scalar | None = None):
        super().__init__(ctx, rows)
        self.q = q

    # -- file format ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "format": RMATRIX_FORMAT,
            "version": RMATRIX_VERSION,
            "conductor": self.ctx.conductor,
            "parameters": [
                {"name": p.name, "root_order": p.root_order} for p in self.ctx.params
            ],
            "q": render_scalar(self.q) if self.q is not None else None,
            "entries": [render_scalar(v) for row in self.rows for v in row],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @staticmethod
    def from_json(doc: dict) -> "RMatrix":
        if doc.get("format") != RMATRIX_FORMAT:
            raise ValueError("not a qgl3 R-matrix file")
        ctx = Context(
            int(doc["conductor"]),
            tuple(Param(p["name"], int(p.get("root_order", 1))) for p in doc.get("parameters", [])),
        )
        entries = doc["entries"]
        if len(entries) != 81:
            raise ValueError("R-matrix file must carry 81 entries")
        vals = [parse_scalar(ctx, e) for e in entries]
        rows = [vals[9 * r : 9 * r + 9] for r in range(9)]
        q = parse_scalar(ctx, doc["q"]) if doc.get("q") else None
        return RMatrix(ctx, rows, q)

    @staticmethod
    def load(path: str | Path) -> "RMatrix":
        return RMatrix.from_json(json.loads(Path(path).read_text()))


class QFactorizationError(ValueError):
    """The Hecke quadratic does not factor over the working field."""


def solve_q(tr_xq: Scalar) -> tuple[Scalar, Scalar]:
    """Both roots of q^2 + q(1 - tr(XQ)) + 1 = 0, verified by substitution.

    The roots multiply to 1.  Raises QFactorizationError when the
    discriminant has no square root in the cyclotomic-rational field.
    """
    ctx = tr_xq.ctx
    b = ctx.one - tr_xq  # q^2 + b q + 1
    disc = b * b - ctx.rational(4)
    root = _scalar_sqrt(disc)
    if root is None:
        raise QFactorizationError(
            "q^2 + q(1 - tr(XQ)) + 1 does not factor over the field"
        )
    half = ctx.rational(Fraction(1, 2))
    q1 = (-b + root) * half
    q2 = (-b - root) * half
    for q in (q1, q2):
        if not (q * q + b * q + ctx.one).is_zero():
            raise AssertionError("q root substitution is nonzero")  # pragma: no cover
    if not (q1 * q2 - ctx.one).is_zero():
        raise AssertionError("q roots do not multiply to 1")  # pragma: no cover
    return q1, q2


def _scalar_sqrt(s: Scalar) -> Scalar | None:
    """A square root of a Scalar, handling the shapes the catalog produces."""
    ctx = s.ctx
    if s.is_zero():
        return ctx.zero
    if s.is_constant():
        c = s.constant_value()
        if c.is_rational():
            root = sqrt_rational(ctx.cyc, c.as_fraction())
            return None if root is None else ctx.from_cyc(root)
        # general cyclotomic constant: try c = r * zeta_N^k for rational r
        for k in range(ctx.conductor):
            z = ctx.root_of_unity(ctx.conductor, (-k) % ctx.conductor)
            cand = s * z
            if cand.is_rational():
                if k % 2 == 0:
                    r = sqrt_rational(ctx.cyc, cand.as_fraction())
                    if r is not None:
                        return ctx.from_cyc(r) * ctx.root_of_unity(ctx.conductor, k // 2)
                break
        return None
    num = _poly_sqrt(ctx, s.num)
    den = _poly_sqrt(ctx, s.den)
    if num is None or den is None:
        return None
    return Scalar(ctx, num, den)


def _poly_sqrt(ctx: Context, poly: dict) -> dict | None:
    """Square root of a polynomial by peeling leading terms, or None."""
    from .scalar.field import _p_add, _p_leading, _p_mul, _p_neg

    if not poly:
        return {}
    le, lc = _p_leading(poly)
    if any(x % 2 for x in le):
        return None
    root_lc = _scalar_sqrt(ctx.from_cyc(lc))
    if root_lc is None or not root_lc.is_constant():
        return None
    half_le = tuple(x // 2 for x in le)
    g = {half_le: root_lc.constant_value()}
    rem = _p_add(poly, _p_neg(_p_mul(g, g)))
    guard = 0
    two_lead_inv = (ctx.from_cyc(lc) * ctx.rational(2)).inverse()
    while rem:
        guard += 1
        if guard > 200:
            return None
        re, rc = _p_leading(rem)
        te = tuple(x - y for x, y in zip(re, half_le))
        if any(x < 0 for x in te):
            return None
        tc = (ctx.from_cyc(rc) * two_lead_inv).constant_value()
        term = {te: tc}
        # rem -= 2*g*term + term^2
        delta = _p_add(
            _p_mul({k: v * ctx.rational(2).constant_value() for k, v in g.items()}, term),
            _p_mul(term, term),
        )
        rem = _p_add(rem, _p_neg(delta))
        g = _p_add(g, term)
    return g


def build_rmatrix(e: Tensor3, f: Tensor3, x: Matrix3, q: Scalar) -> RMatrix:
    """R = 1 - (1+q) A with A^(ij)_(kl) = E_klm X^m_n F^nij."""
    from .tensor import antisymmetrizer

    ctx = e.ctx
    a = antisymmetrizer(e, f, x)
    coef = ctx.one + q
    rows = [
        [
            (ctx.one if r == c else ctx.zero) - coef * a.rows[r][c]
            for c in range(9)
        ]
        for r in range(9)
    ]
    return RMatrix(ctx, rows, q)


def rmatrix_for(data: SolutionData) -> RMatrix:
    return build_rmatrix(data.E, data.F, data.X, data.q)


# ---------------------------------------------------------------------------
# Yang-Baxter and Hecke
# ---------------------------------------------------------------------------


def _sparse27_products(r: Mat9):
    """Sparse 27x27 forms of R(x)1 and 1(x)R."""
    r1: dict[tuple[int, int], Scalar] = {}
    r2: dict[tuple[int, int], Scalar] = {}
    for (a, b, v) in r.nonzero_items():
        for k in range(3):
            r1[(3 * a + k, 3 * b + k)] = v
            r2[(9 * k + a, 9 * k + b)] = v
    return r1, r2


def _sparse_mul(a: dict, b: dict) -> dict:
    by_row: dict[int, list] = {}
    for (i, k), v in a.items():
        by_row.setdefault(i, []).append((k, v))
    b_by_row: dict[int, list] = {}
    for (k, j), v in b.items():
        b_by_row.setdefault(k, []).append((j, v))
    out: dict[tuple[int, int], Scalar] = {}
    for i, items in by_row.items():
        for k, v in items:
            for j, w in b_by_row.get(k, ()):
                key = (i, j)
                cur = out.get(key)
                p = v * w
                if cur is None:
                    out[key] = p
                else:
                    s = cur + p
                    if s.is_zero():
                        del out[key]
                    else:
                        out[key] = s
    return out


def check_ybe(r: Mat9, name: str = "yang_baxter") -> ConditionReport:
    """Braid form: (R x 1)(1 x R)(R x 1) = (1 x R)(R x 1)(1 x R), 729 identities."""
    r1, r2 = _sparse27_products(r)
    lhs = _sparse_mul(_sparse_mul(r1, r2), r1)
    rhs = _sparse_mul(_sparse_mul(r2, r1), r2)
    keys = sorted(set(lhs) | set(rhs))
    zero = r.ctx.zero
    for key in keys:
        d = lhs.get(key, zero) - rhs.get(key, zero)
        if not d.is_zero():
            i, j = key
            idx = (i // 9 + 1, (i // 3) % 3 + 1, i % 3 + 1, j // 9 + 1, (j // 3) % 3 + 1, j % 3 + 1)
            return failed(name, {"index": idx, "residual": render_scalar(d)})
    return passed(name)


def check_hecke(r: RMatrix, q: Scalar | None = None, name: str = "hecke") -> ConditionReport:
    """(R - 1)(R + q) = 0 exactly; for q = 1 this is R^2 = 1."""
    ctx = r.ctx
    if q is None:
        q = r.q
    ident = Mat9.identity(ctx)
    prod = (r - ident) * (r + ident.scale(q))
    hit = prod.first_nonzero()
    if hit is not None:
        rr, cc, v = hit
        return failed(name, {"index": (rr, cc), "residual": render_scalar(v)})
    notes = ()
    if q == ctx.one:
        sq = r * r - ident
        hit = sq.first_nonzero()
        if hit is not None:
            rr, cc, v = hit
            return failed(name, {"index": (rr, cc), "residual": render_scalar(v), "part": "R^2=1"})
        notes = ("q = 1: R^2 = 1 verified",)
    return passed(name, *notes)


# ---------------------------------------------------------------------------
# appendix comparison
# ---------------------------------------------------------------------------


def appendix_rmatrix(data: SolutionData, normalized: bool = True) -> RMatrix | None:
    """The printed block re-indexed to the canonical row convention, or None.

    With normalized=True a recorded global_factor (a provable normalization
    slip in the print) is divided out; normalized=False gives the verbatim
    transcription, re-indexed only.
    """
    rec = data.record
    if rec is None or rec.appendix is None:
        return None
    symbols = dict(data.symbols)
    for name, value in rec.appendix.symbols.items():
        symbols[name] = parse_scalar(data.ctx, value, symbols)
    parsed = [
        [parse_scalar(data.ctx, entry, symbols) for entry in row]
        for row in rec.appendix.rows
    ]
    scale = data.ctx.one
    if normalized and rec.appendix.global_factor:
        scale = parse_scalar(data.ctx, rec.appendix.global_factor, symbols).inverse()
    rows = [[data.ctx.zero] * 9 for _ in range(9)]
    for i in range(3):
        for j in range(3):
            for c in range(9):
                # printed row (i,j) carries the canonical row (j,i)
                rows[3 * j + i][c] = parsed[3 * i + j][c] * scale
    return RMatrix(data.ctx, rows, data.q)


def check_appendix_match(data: SolutionData, built: RMatrix) -> ConditionReport:
    printed = appendix_rmatrix(data)
    if printed is None:
        from .report import skipped

        return skipped("appendix_match", "no printed block for this solution")
    diff = built - printed
    hit = diff.first_nonzero()
    if hit is not None:
        r, c, v = hit
        return failed("appendix_match", {"index": (r, c), "residual": render_scalar(v)})
    return passed("appendix_match")


# ---------------------------------------------------------------------------
# twists and automorphisms
# ---------------------------------------------------------------------------


@dataclass
class TwistData:
    """An automorphism Z together with its relation multiplier z^a_b."""

    z: Matrix3
    z_multiplier: Matrix3 | None = None


class TwistError(ValueError):
    pass


def relation_multiplier(family: RelationFamily, z: Matrix3) -> Matrix3 | None:
    """Solve rel^a (Z x Z) = m^a_b rel^b (lower) or (Z x Z) applied for upper."""
    ctx = family.ctx
    lower = family.variance == "lower"
    transformed = []
    for a in range(3):
        mat = [[ctx.zero] * 3 for _ in range(3)]
        for (i, j) in IDX2:
            v = family.matrices[a][i][j]
            if v.is_zero():
                continue
            for p in range(3):
                zp = z.rows[i][p] if lower else z.rows[p][i]
                if zp.is_zero():
                    continue
                for s in range(3):
                    zq = z.rows[j][s] if lower else z.rows[s][j]
                    if not zq.is_zero():
                        mat[p][s] = mat[p][s] + v * zp * zq
        transformed.append(mat)
    rows = []
    rhs = []
    unknown = 9  # m[a][b]
    for a in range(3):
        for (i, j) in IDX2:
            row = {}
            for b in range(3):
                v = family.matrices[b][i][j]
                if not v.is_zero():
                    row[3 * a + b] = v
            rows.append(row)
            rhs.append(transformed[a][i][j])
    solved = linalg.solve(rows, rhs, unknown, ctx)
    if solved is None:
        return None
    sol, _ = solved
    m = Matrix3(ctx, [[sol[3 * a + b] for b in range(3)] for a in range(3)])
    # confirm exactly
    for a in range(3):
        for (i, j) in IDX2:
            acc = ctx.zero
            for b in range(3):
                acc = acc + m.rows[a][b] * family.matrices[b][i][j]
            if acc != transformed[a][i][j]:
                return None
    return m


def check_automorphism(data: SolutionData, z: Matrix3) -> ConditionReport:
    """Certify Z as an algebra automorphism of the solution.

    Verifies span preservation rel(ZxZ) = z.rel for the plane and coplane
    relation families, the decomposition-level conditions (z S Z = Z S etc.,
    phi(ZxZxZ) = phi), and [A, ZxZ] = 0.
    """
    ctx = data.ctx
    if z.det().is_zero():
        return failed("automorphism", {"part": "Z invertible"})
    m_e = relation_multiplier(data.e_family, z)
    if m_e is None or m_e.det().is_zero():
        return failed("automorphism", {"part": "E-span"})
    zinv = z.inverse()
    m_f = relation_multiplier(data.f_family, zinv)
    if m_f is None or m_f.det().is_zero():
        return failed("automorphism", {"part": "F-span"})
    det = z.det()
    alpha, s, t, phi = decompose(data.E)
    ta, ts, tt, tphi = decompose(data.F)
    # z S Z = Z S and z Z T = T Z with z = det Z
    if not (s.scale(det) * z - z * s).is_zero():
        return failed("automorphism", {"part": "zSZ=ZS"})
    if not ((z * t).scale(det) - t * z).is_zero():
        return failed("automorphism", {"part": "zZT=TZ"})
    if not ((z * ts).scale(det) - ts * z).is_zero():
        return failed("automorphism", {"part": "zZS~=S~Z"})
    if not ((tt.scale(det) * z - z * tt)).is_zero():
        return failed("automorphism", {"part": "zT~Z=ZT~"})
    if not (phi.transform(z, z, z) - phi).is_zero():
        return failed("automorphism", {"part": "phi(ZZZ)=phi"})
    if not (tphi.transform(z, z, z) - tphi).is_zero():
        return failed("automorphism", {"part": "(ZZZ)phi~=phi~"})
    if not (alpha * (det - ctx.one)).is_zero() or not (ta * (det - ctx.one)).is_zero():
        return failed("automorphism", {"part": "det Z = 1 (alpha != 0)"})
    comm = data.antisym.commutator(kron(z, z))
    hit = comm.first_nonzero()
    if hit is not None:
        r, c, v = hit
        return failed("automorphism", {"part": "[A,ZxZ]", "index": (r, c), "residual": render_scalar(v)})
    return passed("automorphism")


def twist_x(x: Matrix3, z: Matrix3) -> Matrix3:
    """X' = Z^-3 X."""
    return z.inverse().pow(3) * x


def twist_q(q: Matrix3, z: Matrix3) -> Matrix3:
    """Q' = Z^3 Q."""
    return z.pow(3) * q


def twist_solution(data: SolutionData, tw: TwistData, check: bool = True) -> SolutionData:
    """Transform (E, F, X, Q) by the automorphism Z; q is unchanged.

    E' = E (Z^-1 x 1 x Z), F' = (Z x 1 x Z^-1) F, Q' = Z^3 Q, X' = Z^-3 X.
    Requires Z to commute with X and Q and to pass check_automorphism.
    """
    z = tw.z
    if check:
        rep = check_automorphism(data, z)
        if not rep.ok:
            raise TwistError(f"Z is not an automorphism: {rep.witness}")
    if not z.commutator(data.X).is_zero() or not z.commutator(data.Q).is_zero():
        raise TwistError("Z does not commute with X and Q")
    zinv = z.inverse()
    ident = Matrix3.identity(data.ctx)
    e_new = data.E.transform(zinv, ident, z)
    f_new = data.F.transform(z, ident, zinv)
    return SolutionData(
        data.ctx,
        data.id + "'",
        e_new,
        f_new,
        twist_x(data.X, z),
        twist_q(data.Q, z),
        data.q,
        record=None,
        choices=data.choices,
        symbols=data.symbols,
    )


def automorphism_instance(
    record,
    family,
    mode: str = "symbolic",
    rng=None,
    choice_index: int = 0,
) -> tuple[SolutionData, Matrix3]:
    """Instantiate a cataloged automorphism family for a record.

    mode 'symbolic' keeps the free entries as fresh formal parameters;
    mode 'specialized' draws non-excluded rationals from rng.  Discrete
    choices take their choice_index-th listed value (clamped).
    """
    from fractions import Fraction
    import random

    if rng is None:
        rng = random.Random(0)
    choices = {
        ch.name: ch.values[min(choice_index, len(ch.values) - 1)] for ch in family.choices
    }
    if mode == "symbolic":
        extra = tuple(Param(p.name, p.root_order) for p in family.free)
        data = SolutionData.from_record(record, extra_params=extra)
        symbols = dict(data.symbols)
        for name, value in choices.items():
            symbols[name] = parse_scalar(data.ctx, value, symbols)
    elif mode == "specialized":
        data = SolutionData.from_record(record)
        symbols = dict(data.symbols)
        for name, value in choices.items():
            symbols[name] = parse_scalar(data.ctx, value, symbols)
        for p in family.free:
            banned = set(p.excluded) | {Fraction(0)}
            while True:
                value = Fraction(rng.randint(2, 9), rng.randint(1, 3))
                if value not in banned:
                    break
            symbols[p.name] = data.ctx.rational(value)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    z = Matrix3(
        data.ctx,
        [[parse_scalar(data.ctx, entry, symbols) for entry in row] for row in family.z_rows],
    )
    return data, z


def twist_rmatrix(r: Mat9, z: Matrix3) -> Mat9:
    """Conjugate by F = Z x 1; requires [R, Z x Z] = 0."""
    zz = kron(z, z)
    if not r.commutator(zz).is_zero():
        raise TwistError("[R, ZxZ] != 0: twist conjugation undefined")
    f = kron(z, Matrix3.identity(z.ctx))
    finv = kron(z.inverse(), Matrix3.identity(z.ctx))
    out = f * r * finv
    if isinstance(r, RMatrix):
        return RMatrix(r.ctx, out.rows, r.q)
    return out
