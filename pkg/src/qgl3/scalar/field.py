"""Scalars: exact elements of Q(zeta_N)(t_1, ..., t_k).

Each declared parameter `u` with root order r is represented through the
indeterminate t_u = u^(1/r), so fractional powers stay polynomial.  A Scalar
is a reduced fraction of multivariate polynomials with CycNumber
coefficients; the fraction is canonical (numerator and denominator divided by
their gcd, denominator with deglex leading coefficient 1), so equality and
the zero test are structural and exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

from .cyclotomic import CycContext, CycNumber

Exps = tuple[int, ...]
Poly = dict[Exps, CycNumber]


class Param(NamedTuple):
    name: str
    root_order: int = 1


class PoleError(ZeroDivisionError):
    """A specialization hit a zero of the denominator."""


class Context:
    """Conductor plus parameter table; all Scalars belong to one Context.

    Instances are canonical: constructing the same (conductor, params) twice
    returns the same object, so scalar equality across independently built
    data is sound.
    """

    _instances: dict = {}

    def __new__(cls, conductor: int = 36, params: Iterable[Param] = ()):
        key = (conductor, tuple(Param(p[0], p[1]) for p in params))
        inst = cls._instances.get(key)
        if inst is None:
            inst = super().__new__(cls)
            cls._instances[key] = inst
        return inst

    def __init__(self, conductor: int = 36, params: Iterable[Param] = ()):
        if hasattr(self, "cyc"):
            return  # canonical instance already initialized
        self.cyc = CycContext.get(conductor)
        self.conductor = conductor
        self.params = tuple(Param(p[0], p[1]) for p in params)
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ValueError("duplicate parameter names")
        self.index = {p.name: i for i, p in enumerate(self.params)}
        self.nvars = len(self.params)
        self._zero_exps: Exps = (0,) * self.nvars
        self.zero = Scalar(self, {}, {self._zero_exps: CycNumber.one(self.cyc)}, _canonical=True)
        self.one = Scalar(
            self,
            {self._zero_exps: CycNumber.one(self.cyc)},
            {self._zero_exps: CycNumber.one(self.cyc)},
            _canonical=True,
        )

    def __repr__(self) -> str:
        ps = ", ".join(
            p.name if p.root_order == 1 else f"{p.name}^(1/{p.root_order})" for p in self.params
        )
        return f"Context(N={self.conductor}, params=[{ps}])"

    def extend(self, extra: Iterable[Param]) -> "Context":
        return Context(self.conductor, self.params + tuple(extra))

    # -- constructors ------------------------------------------------------

    def rational(self, value) -> "Scalar":
        c = CycNumber.from_rational(self.cyc, Fraction(value))
        return self.from_cyc(c)

    def from_cyc(self, c: CycNumber) -> "Scalar":
        if c.is_zero():
            return self.zero
        return Scalar(
            self,
            {self._zero_exps: c},
            {self._zero_exps: CycNumber.one(self.cyc)},
            _canonical=True,
        )

    def root_of_unity(self, n: int, k: int = 1) -> "Scalar":
        return self.from_cyc(CycNumber.root_of_unity(self.cyc, n, k))

    def parameter(self, name: str, power: int = 1) -> "Scalar":
        """t_name^power where t_name is the declared root indeterminate."""
        i = self.index[name]
        exps = tuple(power if j == i else 0 for j in range(self.nvars))
        if power < 0:
            return self.parameter(name, -power).inverse()
        num = {exps: CycNumber.one(self.cyc)}
        return Scalar(self, num, {self._zero_exps: CycNumber.one(self.cyc)}, _canonical=True)

    def embed(self, s: "Scalar") -> "Scalar":
        """Re-embed a Scalar from a context whose parameters are a prefix of ours."""
        if s.ctx is self:
            return s
        if s.ctx.conductor != self.conductor:
            raise ValueError("conductor mismatch")
        src = s.ctx.params
        if self.params[: len(src)] != src:
            raise ValueError("parameter table is not a prefix extension")
        pad = self.nvars - len(src)

        def conv(p: Poly) -> Poly:
            return {exps + (0,) * pad: c for exps, c in p.items()}

        return Scalar(self, conv(s.num), conv(s.den), _canonical=True)


# ---------------------------------------------------------------------------
# polynomial helpers (dict exps -> CycNumber, zero coefficients never stored)
# ---------------------------------------------------------------------------


def _p_is_zero(p: Poly) -> bool:
    return not p


def _p_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        cur = out.get(e)
        if cur is None:
            out[e] = c
        else:
            s = cur + c
            if s.is_zero():
                del out[e]
            else:
                out[e] = s
    return out


def _p_neg(a: Poly) -> Poly:
    return {e: -c for e, c in a.items()}


def _p_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = ca * cb
            cur = out.get(e)
            if cur is None:
                if not c.is_zero():
                    out[e] = c
            else:
                s = cur + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
    return out


def _p_scale(a: Poly, c: CycNumber) -> Poly:
    if c.is_one():
        return a
    return {e: k * c for e, k in a.items()}


def _deglex_key(e: Exps) -> tuple:
    return (sum(e), e)


def _p_leading(a: Poly) -> tuple[Exps, CycNumber]:
    e = max(a, key=_deglex_key)
    return e, a[e]


def _p_divexact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b; raises ArithmeticError if not divisible."""
    if not a:
        return {}
    a = dict(a)
    eb, cb = _p_leading(b)
    cb_inv = cb.inverse()
    out: Poly = {}
    while a:
        ea, ca = _p_leading(a)
        qe = tuple(x - y for x, y in zip(ea, eb))
        if any(x < 0 for x in qe):
            raise ArithmeticError("inexact polynomial division")
        qc = ca * cb_inv
        out[qe] = qc
        sub = _p_mul({qe: qc}, b)
        a = _p_add(a, _p_neg(sub))
    return out


def _p_divides_mono(a: Poly) -> Exps | None:
    if len(a) == 1:
        return next(iter(a))
    return None


def _p_content_exps(a: Poly) -> Exps:
    """Componentwise minimum of exponent vectors (the monomial content)."""
    it = iter(a)
    m = list(next(it))
    for e in it:
        for i, x in enumerate(e):
            if x < m[i]:
                m[i] = x
    return tuple(m)


def _p_shift_down(a: Poly, m: Exps) -> Poly:
    if not any(m):
        return a
    return {tuple(x - y for x, y in zip(e, m)): c for e, c in a.items()}


def _main_var(a: Poly, b: Poly) -> int | None:
    nv = len(next(iter(a))) if a else len(next(iter(b)))
    for v in range(nv - 1, -1, -1):
        if any(e[v] for e in a) or any(e[v] for e in b):
            return v
    return None


def _as_univariate(a: Poly, v: int) -> dict[int, Poly]:
    out: dict[int, Poly] = {}
    for e, c in a.items():
        d = e[v]
        rest = e[:v] + (0,) + e[v + 1 :]
        out.setdefault(d, {})[rest] = c
    return out


def _from_univariate(u: dict[int, Poly], v: int) -> Poly:
    out: Poly = {}
    for d, coef in u.items():
        for e, c in coef.items():
            out[e[:v] + (d,) + e[v + 1 :]] = c
    return out


def _u_degree(u: dict[int, Poly]) -> int:
    return max(u)


def _u_lc(u: dict[int, Poly]) -> Poly:
    return u[max(u)]


def _u_mul_poly(u: dict[int, Poly], p: Poly) -> dict[int, Poly]:
    return {d: _p_mul(c, p) for d, c in u.items()}


def _u_sub(a: dict[int, Poly], b: dict[int, Poly]) -> dict[int, Poly]:
    out = dict(a)
    for d, c in b.items():
        cur = out.get(d)
        s = _p_add(cur, _p_neg(c)) if cur is not None else _p_neg(c)
        if _p_is_zero(s):
            out.pop(d, None)
        else:
            out[d] = s
    return out


def _u_shift(u: dict[int, Poly], k: int) -> dict[int, Poly]:
    return {d + k: c for d, c in u.items()}


def _pseudo_rem(a: dict[int, Poly], b: dict[int, Poly]) -> dict[int, Poly]:
    """Pseudo-remainder of univariate polys with polynomial coefficients."""
    da, db = _u_degree(a), _u_degree(b)
    lb = _u_lc(b)
    r = dict(a)
    while r and _u_degree(r) >= db:
        dr = _u_degree(r)
        lr = _u_lc(r)
        r = _u_sub(_u_mul_poly(r, lb), _u_shift(_u_mul_poly(b, lr), dr - db))
        r.pop(dr, None)
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """gcd over Q(zeta_N)[t_1..t_k], deglex leading coefficient normalized to 1."""
    if not a:
        return _monic(b)
    if not b:
        return _monic(a)
    # monomial content first: cheap and covers the common cases
    ma, mb = _p_content_exps(a), _p_content_exps(b)
    mg = tuple(min(x, y) for x, y in zip(ma, mb))
    a = _p_shift_down(a, ma)
    b = _p_shift_down(b, mb)
    if len(a) == 1 or len(b) == 1:
        g: Poly = {mg: CycNumber.one(_coef_ctx(a))}
        return g
    v = _main_var(a, b)
    if v is None:
        return {mg: CycNumber.one(_coef_ctx(a))}
    g = _gcd_recursive(a, b, v)
    g = _p_mul(g, {mg: CycNumber.one(_coef_ctx(a))})
    return _monic(g)


def _coef_ctx(a: Poly) -> CycContext:
    return next(iter(a.values())).ctx


def _gcd_recursive(a: Poly, b: Poly, v: int) -> Poly:
    ua, ub = _as_univariate(a, v), _as_univariate(b, v)
    if _u_degree(ua) < _u_degree(ub):
        ua, ub = ub, ua
    ca = _coef_gcd_list(list(ua.values()))
    cb = _coef_gcd_list(list(ub.values()))
    ua = {d: _p_divexact(c, ca) for d, c in ua.items()}
    ub = {d: _p_divexact(c, cb) for d, c in ub.items()}
    while True:
        r = _pseudo_rem(ua, ub)
        if not r:
            break
        cr = _coef_gcd_list(list(r.values()))
        r = {d: _p_divexact(c, cr) for d, c in r.items()}
        ua, ub = ub, r
        if _u_degree(ub) == 0:
            break
    cont = poly_gcd(ca, cb)
    if _u_degree(ub) == 0:
        return cont
    return _p_mul(_from_univariate(ub, v), cont)


def _coef_gcd_list(polys: list[Poly]) -> Poly:
    g = polys[0]
    for p in polys[1:]:
        g = poly_gcd(g, p)
        if len(g) == 1 and not any(next(iter(g))):
            break
    return _monic(g)


def _monic(a: Poly) -> Poly:
    if not a:
        return a
    _, lc = _p_leading(a)
    if lc.is_one():
        return a
    inv = lc.inverse()
    return {e: c * inv for e, c in a.items()}


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------


class Scalar:
    """Canonical fraction num/den of polynomials over Q(zeta_N)."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: Context, num: Poly, den: Poly, _canonical: bool = False):
        self.ctx = ctx
        self._hash = None
        if _canonical:
            self.num = num
            self.den = den
            return
        if _p_is_zero(den):
            raise ZeroDivisionError("zero denominator")
        if _p_is_zero(num):
            self.num = {}
            self.den = {ctx._zero_exps: CycNumber.one(ctx.cyc)}
            return
        if len(den) == 1 and not any(next(iter(den))):
            # constant denominator: fold into the numerator
            c = next(iter(den.values()))
            if not c.is_one():
                num = _p_scale(num, c.inverse())
            self.num = num
            self.den = {ctx._zero_exps: CycNumber.one(ctx.cyc)}
            return
        g = poly_gcd(num, den)
        if not (len(g) == 1 and not any(next(iter(g)))):
            num = _p_divexact(num, g)
            den = _p_divexact(den, g)
        _, lc = _p_leading(den)
        if not lc.is_one():
            inv = lc.inverse()
            num = _p_scale(num, inv)
            den = _p_scale(den, inv)
        if len(den) == 1 and not any(next(iter(den))):
            c = next(iter(den.values()))
            if not c.is_one():
                num = _p_scale(num, c.inverse())
                den = {ctx._zero_exps: CycNumber.one(ctx.cyc)}
        self.num = num
        self.den = den

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self == self.ctx.one

    def den_is_one(self) -> bool:
        return len(self.den) == 1 and not any(next(iter(self.den))) and next(
            iter(self.den.values())
        ).is_one()

    def is_constant(self) -> bool:
        return (not self.num or (len(self.num) == 1 and not any(next(iter(self.num))))) and (
            self.den_is_one()
        )

    def constant_value(self) -> CycNumber:
        if not self.is_constant():
            raise ValueError("not a constant")
        if not self.num:
            return CycNumber.zero(self.ctx.cyc)
        return next(iter(self.num.values()))

    def is_rational(self) -> bool:
        return self.is_constant() and (self.is_zero() or self.constant_value().is_rational())

    def as_fraction(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return self.constant_value().as_fraction()

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Scalar") -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = self.ctx.rational(other)
        if self.ctx is not other.ctx:
            raise ValueError("context mismatch")
        return other

    def __add__(self, other) -> "Scalar":
        other = self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            num = _p_add(self.num, other.num)
            if not num:
                return self.ctx.zero
            if self.den_is_one():
                return Scalar(self.ctx, num, self.den, _canonical=True)
            return Scalar(self.ctx, num, self.den)
        num = _p_add(_p_mul(self.num, other.den), _p_mul(other.num, self.den))
        return Scalar(self.ctx, num, _p_mul(self.den, other.den))

    def __radd__(self, other) -> "Scalar":
        return self.__add__(other)

    def __sub__(self, other) -> "Scalar":
        other = self._check(other)
        return self.__add__(-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self).__add__(self._check(other))

    def __neg__(self) -> "Scalar":
        if self.is_zero():
            return self
        return Scalar(self.ctx, _p_neg(self.num), self.den, _canonical=True)

    def __mul__(self, other) -> "Scalar":
        other = self._check(other)
        if self.is_zero() or other.is_zero():
            return self.ctx.zero
        if self.den_is_one() and other.den_is_one():
            return Scalar(self.ctx, _p_mul(self.num, other.num), self.den, _canonical=True)
        return Scalar(
            self.ctx, _p_mul(self.num, other.num), _p_mul(self.den, other.den)
        )

    def __rmul__(self, other) -> "Scalar":
        return self.__mul__(other)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        return Scalar(self.ctx, self.den, self.num)

    def __truediv__(self, other) -> "Scalar":
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        if self.is_zero():
            return self
        return Scalar(
            self.ctx, _p_mul(self.num, other.den), _p_mul(self.den, other.num)
        )

    def __rtruediv__(self, other) -> "Scalar":
        return self._check(other).__truediv__(self)

    def __pow__(self, k: int) -> "Scalar":
        if k == 0:
            return self.ctx.one
        if k < 0:
            return self.inverse() ** (-k)
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def conjugate(self) -> "Scalar":
        """Apply zeta -> zeta^(-1) to every coefficient."""
        num = {e: c.conjugate() for e, c in self.num.items()}
        den = {e: c.conjugate() for e, c in self.den.items()}
        return Scalar(self.ctx, num, den)

    def specialize(self, assignment: dict[str, Fraction]) -> "Scalar":
        """Substitute rational values for root indeterminates (possibly partial).

        Values are assigned to the root t directly for parameters with a root
        order.  Raises PoleError when the denominator vanishes.
        """
        vals = {self.ctx.index[name]: Fraction(v) for name, v in assignment.items()}

        def ev(p: Poly) -> Poly:
            out: Poly = {}
            for e, c in p.items():
                f = Fraction(1)
                rest = list(e)
                for i, v in vals.items():
                    if e[i]:
                        f *= v ** e[i]
                        rest[i] = 0
                key = tuple(rest)
                add = c.scale(f)
                cur = out.get(key)
                s = add if cur is None else cur + add
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
            return out

        den = ev(self.den)
        if _p_is_zero(den):
            raise PoleError("denominator vanishes at the given assignment")
        return Scalar(self.ctx, ev(self.num), den)

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ctx.rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.ctx is other.ctx and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            n = tuple(sorted(self.num.items(), key=lambda kv: _deglex_key(kv[0])))
            d = tuple(sorted(self.den.items(), key=lambda kv: _deglex_key(kv[0])))
            self._hash = hash((n, d))
        return self._hash

    def __repr__(self) -> str:
        from .parse import render_scalar

        return render_scalar(self)
