"""Exact arithmetic in Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) of the N-th
cyclotomic field, with integer coordinate vectors over a common positive
denominator.  The representation is canonical: equal field elements have
identical (nums, den) after normalization, so equality and the zero test are
structural.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divexact_int(a: list[int], b: list[int]) -> list[int]:
    """Exact division of integer polynomials, b monic-up-to-sign leading term."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    out = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c % lb != 0:
            raise ArithmeticError("inexact polynomial division")
        q = c // lb
        out[i - db] = q
        if q:
            for j, bj in enumerate(b):
                a[i - db + j] -= q * bj
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return out


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


_cyclotomic_cache: dict[int, list[int]] = {}


def cyclotomic_polynomial(n: int) -> list[int]:
    """Integer coefficient list of Phi_n, ascending degree."""
    if n in _cyclotomic_cache:
        return _cyclotomic_cache[n]
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact_int(poly, cyclotomic_polynomial(d))
    _cyclotomic_cache[n] = poly
    return poly


class CycContext:
    """Precomputed reduction data for a fixed conductor N."""

    _cache: dict[int, "CycContext"] = {}

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("conductor must be positive")
        self.n = n
        phi = cyclotomic_polynomial(n)
        self.deg = len(phi) - 1
        self.phi_coeffs = phi
        # red[k] = coordinates of z^k for deg <= k <= 2*deg-2
        red: dict[int, tuple[int, ...]] = {}
        cur = [-c for c in phi[:-1]]  # z^deg
        red[self.deg] = tuple(cur)
        for k in range(self.deg + 1, 2 * self.deg - 1):
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c + top * r for c, r in zip(cur, red[self.deg])]
            red[k] = tuple(cur)
        self.red = red
        # powers[k] = coordinates of z^k for 0 <= k < n
        powers = []
        vec = [0] * self.deg
        vec[0] = 1
        for _ in range(n):
            powers.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                vec = [c + top * r for c, r in zip(vec, red[self.deg])]
        self.powers = powers
        # conjugation z -> z^(n-1): column images of the basis powers
        self.conj_cols = [self.powers[(n - j) % n] for j in range(self.deg)]

    @classmethod
    def get(cls, n: int) -> "CycContext":
        ctx = cls._cache.get(n)
        if ctx is None:
            ctx = cls(n)
            cls._cache[n] = ctx
        return ctx


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-c for c in nums]
        den = -den
    g = den
    for c in nums:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if g > 1:
        nums = [c // g for c in nums]
        den //= g
    if not any(nums):
        return tuple(0 for _ in nums), 1
    return tuple(nums), den


class CycNumber:
    """An element of Q(zeta_N) in canonical power-basis form."""

    __slots__ = ("ctx", "nums", "den")

    def __init__(self, ctx: CycContext, nums, den: int = 1, _normalized: bool = False):
        self.ctx = ctx
        if _normalized:
            self.nums = nums
            self.den = den
        else:
            self.nums, self.den = _normalize(list(nums), den)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(ctx: CycContext, value) -> "CycNumber":
        f = Fraction(value)
        nums = [0] * ctx.deg
        nums[0] = f.numerator
        return CycNumber(ctx, nums, f.denominator)

    @staticmethod
    def zero(ctx: CycContext) -> "CycNumber":
        return CycNumber(ctx, [0] * ctx.deg, 1, _normalized=True)

    @staticmethod
    def one(ctx: CycContext) -> "CycNumber":
        nums = [0] * ctx.deg
        nums[0] = 1
        return CycNumber(ctx, tuple(nums), 1, _normalized=True)

    @staticmethod
    def root_of_unity(ctx: CycContext, n: int, k: int = 1) -> "CycNumber":
        """zeta_n^k realized inside Q(zeta_N); requires n | N."""
        if n <= 0 or ctx.n % n != 0:
            raise ValueError(f"conductor mismatch: zeta_{n} not in Q(zeta_{ctx.n})")
        return CycNumber(ctx, ctx.powers[(k * (ctx.n // n)) % ctx.n], 1)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_one(self) -> bool:
        return self.den == 1 and self.nums[0] == 1 and not any(self.nums[1:])

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.nums[0], self.den)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "CycNumber") -> None:
        if self.ctx is not other.ctx:
            raise ValueError("conductor mismatch")

    def __add__(self, other: "CycNumber") -> "CycNumber":
        self._check(other)
        da, db = self.den, other.den
        if da == db:
            return CycNumber(self.ctx, [a + b for a, b in zip(self.nums, other.nums)], da)
        return CycNumber(
            self.ctx, [a * db + b * da for a, b in zip(self.nums, other.nums)], da * db
        )

    def __sub__(self, other: "CycNumber") -> "CycNumber":
        self._check(other)
        da, db = self.den, other.den
        if da == db:
            return CycNumber(self.ctx, [a - b for a, b in zip(self.nums, other.nums)], da)
        return CycNumber(
            self.ctx, [a * db - b * da for a, b in zip(self.nums, other.nums)], da * db
        )

    def __neg__(self) -> "CycNumber":
        return CycNumber(self.ctx, tuple(-c for c in self.nums), self.den, _normalized=True)

    def __mul__(self, other: "CycNumber") -> "CycNumber":
        self._check(other)
        deg = self.ctx.deg
        conv = [0] * (2 * deg - 1)
        a, b = self.nums, other.nums
        for i in range(deg):
            ai = a[i]
            if ai:
                for j in range(deg):
                    bj = b[j]
                    if bj:
                        conv[i + j] += ai * bj
        out = conv[:deg]
        red = self.ctx.red
        for k in range(deg, 2 * deg - 1):
            ck = conv[k]
            if ck:
                rk = red[k]
                for i in range(deg):
                    if rk[i]:
                        out[i] += ck * rk[i]
        return CycNumber(self.ctx, out, self.den * other.den)

    def scale(self, f: Fraction) -> "CycNumber":
        return CycNumber(
            self.ctx, [c * f.numerator for c in self.nums], self.den * f.denominator
        )

    def inverse(self) -> "CycNumber":
        """Multiplicative inverse via a linear solve in the power basis."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta_N)")
        if self.is_rational():
            f = 1 / self.as_fraction()
            return CycNumber.from_rational(self.ctx, f)
        deg = self.ctx.deg
        # columns: self * z^j expressed in the basis
        cols = []
        cur = self
        zeta = CycNumber(self.ctx, self.ctx.powers[1 % self.ctx.n], 1)
        for _ in range(deg):
            cols.append(cur)
            cur = cur * zeta
        mat = [[Fraction(cols[j].nums[i], cols[j].den) for j in range(deg)] for i in range(deg)]
        rhs = [Fraction(0)] * deg
        rhs[0] = Fraction(1)
        sol = _solve_fraction_system(mat, rhs)
        nums = [0] * deg
        den = 1
        for s in sol:
            den = den * s.denominator // gcd(den, s.denominator)
        for i, s in enumerate(sol):
            nums[i] = s.numerator * (den // s.denominator)
        return CycNumber(self.ctx, nums, den)

    def __truediv__(self, other: "CycNumber") -> "CycNumber":
        return self * other.inverse()

    def conjugate(self) -> "CycNumber":
        """Image under the field automorphism zeta -> zeta^(-1)."""
        deg = self.ctx.deg
        out = [0] * deg
        for j, c in enumerate(self.nums):
            if c:
                col = self.ctx.conj_cols[j]
                for i in range(deg):
                    if col[i]:
                        out[i] += c * col[i]
        return CycNumber(self.ctx, out, self.den)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self.ctx is other.ctx and self.den == other.den and self.nums == other.nums

    def __hash__(self) -> int:
        return hash((self.ctx.n, self.nums, self.den))

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.nums):
            if c:
                coef = Fraction(c, self.den)
                terms.append(f"{coef}*z^{k}" if k else f"{coef}")
        return " + ".join(terms) if terms else "0"


def _solve_fraction_system(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * p for v, p in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def sqrt_rational(ctx: CycContext, value: Fraction) -> CycNumber | None:
    """A square root of a rational inside Q(zeta_N), or None if there is none.

    Uses quadratic Gauss sums for odd primes and zeta_4/zeta_8 for the even
    part; the result is verified by squaring.
    """
    value = Fraction(value)
    if value == 0:
        return CycNumber.zero(ctx)
    # write value = sign * (a/b) with a,b > 0; sqrt(a/b) = sqrt(a*b)/b
    sign = 1 if value > 0 else -1
    m = abs(value.numerator) * value.denominator
    square, squarefree = 1, 1
    d = 2
    while d * d <= m:
        while m % (d * d) == 0:
            m //= d * d
            square *= d
        if m % d == 0:
            m //= d
            squarefree *= d
        d += 1
    squarefree *= m
    acc = CycNumber.from_rational(ctx, Fraction(square, value.denominator))
    need = squarefree if sign > 0 else -squarefree
    root = _sqrt_squarefree(ctx, need)
    if root is None:
        return None
    result = acc * root
    if result * result == CycNumber.from_rational(ctx, value):
        return result
    return None


def _sqrt_squarefree(ctx: CycContext, s: int) -> CycNumber | None:
    if s == 1:
        return CycNumber.one(ctx)
    out = CycNumber.one(ctx)
    if s < 0:
        if ctx.n % 4 != 0:
            return None
        out = out * CycNumber.root_of_unity(ctx, 4)
        s = -s
    if s % 2 == 0:
        if ctx.n % 8 != 0:
            return None
        z8 = CycNumber.root_of_unity(ctx, 8)
        out = out * (z8 + z8.conjugate())  # sqrt(2)
        s //= 2
    p = 3
    while s > 1:
        if s % p == 0:
            g = _gauss_sum(ctx, p)
            if g is None:
                return None
            out = out * g
            s //= p
        p += 2
    return out


def _gauss_sum(ctx: CycContext, p: int) -> CycNumber | None:
    """An element of Q(zeta_N) squaring to p (odd prime), if representable."""
    if ctx.n % p != 0:
        return None
    g = CycNumber.zero(ctx)
    for k in range(1, p):
        leg = pow(k, (p - 1) // 2, p)
        term = CycNumber.root_of_unity(ctx, p, k)
        g = g + term if leg == 1 else g - term
    # g^2 = p for p = 1 mod 4, -p for p = 3 mod 4
    if p % 4 == 1:
        return g
    if ctx.n % 4 != 0:
        return None
    return g * CycNumber.root_of_unity(ctx, 4, 3)  # divide by i
