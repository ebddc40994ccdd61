"""Ring homomorphisms Q(zeta_N)(t...) -> GF(p) for rank specialization.

A "point" is (p, omega, assignment): a prime p = 1 mod N, a primitive N-th
root omega mod p, and rational values for the root indeterminates.  Any
nonzero minor in the image lifts to a nonzero minor over the exact field, so
ranks computed at a point are true lower bounds; agreement across
independent points is the generic-rank certificate reported by poincare.

Primes are kept below 2**26 so the numpy fallback's block products stay
exact in int64.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from .scalar import Context, CycNumber, Scalar

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_1_mod(n: int, count: int, start: int = 1 << 25) -> list[int]:
    """The first `count` primes p = 1 (mod n) above `start` (deterministic)."""
    out = []
    p = start - (start % n) + 1
    while len(out) < count:
        p += n
        if _is_prime(p):
            out.append(p)
    return out


def primitive_root_of_unity(p: int, n: int, pick: int = 0) -> int:
    """A primitive n-th root of unity mod p (requires n | p-1).

    Different `pick` values walk through different generators, giving
    independent embeddings for the same prime.
    """
    if (p - 1) % n != 0:
        raise ValueError("n does not divide p-1")
    seen = 0
    for g in range(2, p):
        w = pow(g, (p - 1) // n, p)
        # order check: w^(n/q) != 1 for every prime q | n
        if _order_is(w, n, p):
            if seen == pick:
                return w
            seen += 1
    raise ValueError("no primitive root found")  # pragma: no cover


def _order_is(w: int, n: int, p: int) -> bool:
    if pow(w, n, p) != 1:
        return False
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            if pow(w, n // q, p) == 1:
                return False
            while m % q == 0:
                m //= q
        q += 1
    if m > 1 and pow(w, n // m, p) == 1:
        return False
    return True


@dataclass(frozen=True)
class Point:
    """One homomorphism: prime, root image, and root-indeterminate values."""

    p: int
    omega: int
    assignment: tuple[tuple[str, Fraction], ...] = ()

    def describe(self) -> dict:
        return {
            "prime": self.p,
            "omega": self.omega,
            "assignment": {k: str(v) for k, v in self.assignment},
        }


class PointError(ZeroDivisionError):
    """The homomorphism hit a zero denominator; pick another point."""


def _fraction_mod(f: Fraction, p: int) -> int:
    den = f.denominator % p
    if den == 0:
        raise PointError("denominator divisible by p")
    return f.numerator * pow(den, -1, p) % p


def embed_cyc(c: CycNumber, p: int, omega_powers: list[int]) -> int:
    acc = 0
    for k, coef in enumerate(c.nums):
        if coef:
            acc += coef * omega_powers[k]
    den = c.den % p
    if den == 0:
        raise PointError("cyclotomic denominator divisible by p")
    return acc % p * pow(den, -1, p) % p


class Embedding:
    """Evaluates Scalars of one context at one Point."""

    def __init__(self, ctx: Context, point: Point):
        self.ctx = ctx
        self.point = point
        self.p = point.p
        self.omega_powers = [pow(point.omega, k, self.p) for k in range(ctx.cyc.deg)]
        values = dict(point.assignment)
        self.param_values = []
        for param in ctx.params:
            if param.name not in values:
                raise ValueError(f"point lacks a value for parameter {param.name!r}")
            self.param_values.append(_fraction_mod(values[param.name], self.p))

    def _poly(self, poly: dict) -> int:
        acc = 0
        p = self.p
        for exps, coef in poly.items():
            term = embed_cyc(coef, p, self.omega_powers)
            for value, e in zip(self.param_values, exps):
                if e:
                    term = term * pow(value, e, p) % p
            acc += term
        return acc % p

    def __call__(self, s: Scalar) -> int:
        num = self._poly(s.num)
        den = self._poly(s.den)
        if den == 0:
            raise PointError("scalar denominator vanishes at the point")
        return num * pow(den, -1, self.p) % self.p


def points_for(
    ctx: Context,
    seed: int,
    label: str,
    count: int,
    excluded: dict[str, tuple[Fraction, ...]] | None = None,
) -> list[Point]:
    """Deterministic independent points for a given context and label."""
    n = ctx.conductor
    primes = primes_1_mod(n, max(count, 3))
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    rng = random.Random(int.from_bytes(digest[:8], "big"))
    excluded = excluded or {}
    points = []
    for i in range(count):
        p = primes[i % len(primes)]
        omega = primitive_root_of_unity(p, n, pick=i // len(primes))
        assignment = []
        for param in ctx.params:
            banned = set(excluded.get(param.name, ()))
            banned.add(Fraction(0))
            while True:
                value = Fraction(rng.randint(2, 97), rng.randint(1, 7))
                if value not in banned and -value not in banned:
                    break
            assignment.append((param.name, value))
        points.append(Point(p, omega, tuple(assignment)))
    return points
