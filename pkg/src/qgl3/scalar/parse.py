"""Text grammar for scalars.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ['^' exponent]
    atom   := integer | zN | name | '(' expr ')'
    exponent := integer | '(' ['-'] integer ['/' integer] ')'

`zN^k` denotes zeta_N^k (N must divide the conductor); parameter exponents
must be integer multiples of 1/root_order.  Whitespace is insignificant.
render_scalar produces canonical text with parse o render = identity.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .field import Context, Scalar, _deglex_key

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


class ScalarSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ScalarSyntaxError(f"unexpected character {stripped[0]!r}", pos)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, ctx: Context, text: str, symbols: dict[str, Scalar] | None):
        self.ctx = ctx
        self.text = text
        self.symbols = symbols or {}
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ScalarSyntaxError(f"expected {op!r}", pos)

    def parse(self) -> Scalar:
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ScalarSyntaxError("trailing input", pos)
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while True:
            kind, op, _ = self.peek()
            if kind == "op" and op in "+-":
                self.i += 1
                rhs = self.term()
                value = value + rhs if op == "+" else value - rhs
            else:
                return value

    def term(self) -> Scalar:
        value = self.factor()
        while True:
            kind, op, _ = self.peek()
            if kind == "op" and op in "*/":
                self.i += 1
                rhs = self.factor()
                if op == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        raise ScalarSyntaxError("division by zero", self.peek()[2])
                    value = value / rhs
            else:
                return value

    def factor(self) -> Scalar:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.i += 1
            return -self.factor()
        base, tag = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.i += 1
            num, den = self.exponent()
            return self._power(base, tag, num, den, pos)
        return base

    def exponent(self) -> tuple[int, int]:
        kind, val, pos = self.peek()
        if kind == "int":
            self.i += 1
            return val, 1
        if kind == "op" and val == "(":
            self.i += 1
            sign = 1
            kind, val, pos = self.peek()
            if kind == "op" and val == "-":
                sign = -1
                self.i += 1
            kind, val, pos = self.next()
            if kind != "int":
                raise ScalarSyntaxError("expected integer exponent", pos)
            num = sign * val
            den = 1
            kind, val, pos = self.peek()
            if kind == "op" and val == "/":
                self.i += 1
                kind, val, pos = self.next()
                if kind != "int" or val == 0:
                    raise ScalarSyntaxError("expected positive exponent denominator", pos)
                den = val
            self.expect_op(")")
            return num, den
        raise ScalarSyntaxError("expected exponent", pos)

    def _power(self, base: Scalar, tag, num: int, den: int, pos: int) -> Scalar:
        if den != 1:
            if tag is None or tag[0] != "param":
                raise ScalarSyntaxError("fractional exponent on a non-parameter", pos)
            name = tag[1]
            r = self.ctx.params[self.ctx.index[name]].root_order
            internal = Fraction(num * r, den)
            if internal.denominator != 1:
                raise ScalarSyntaxError(
                    f"exponent {num}/{den} is not a multiple of 1/{r} for {name}", pos
                )
            return self.ctx.parameter(name, int(internal))
        if tag is not None and tag[0] == "param":
            name = tag[1]
            r = self.ctx.params[self.ctx.index[name]].root_order
            return self.ctx.parameter(name, num * r)
        if tag is not None and tag[0] == "root":
            return self.ctx.root_of_unity(tag[1], num)
        return base ** num

    def atom(self) -> tuple[Scalar, tuple | None]:
        kind, val, pos = self.next()
        if kind == "int":
            return self.ctx.rational(val), None
        if kind == "name":
            # declared names shadow the zN root syntax (e.g. a z21 automorphism entry)
            if val in self.symbols:
                return self.symbols[val], None
            if val in self.ctx.index:
                r = self.ctx.params[self.ctx.index[val]].root_order
                return self.ctx.parameter(val, r), ("param", val)
            m = re.fullmatch(r"z(\d+)", val)
            if m:
                n = int(m.group(1))
                if n <= 0 or self.ctx.conductor % n != 0:
                    raise ScalarSyntaxError(
                        f"z{n} is not in the conductor-{self.ctx.conductor} field", pos
                    )
                return self.ctx.root_of_unity(n, 1), ("root", n)
            raise ScalarSyntaxError(f"unknown name {val!r}", pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner, None
        raise ScalarSyntaxError("expected a value", pos)


def parse_scalar(ctx: Context, text: str, symbols: dict[str, Scalar] | None = None) -> Scalar:
    """Parse grammar text into a canonical Scalar.

    `symbols` optionally maps extra names (discrete choices like g3 or si)
    to already-built Scalars.
    """
    return _Parser(ctx, text, symbols).parse()


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _render_cyc(c, conductor: int) -> tuple[str, bool]:
    """Render a CycNumber; returns (text, is_composite)."""
    terms = []
    for k, n in enumerate(c.nums):
        if not n:
            continue
        coef = Fraction(n, c.den)
        if k == 0:
            terms.append(_render_fraction(coef))
        else:
            z = f"z{conductor}^{k}" if k != 1 else f"z{conductor}"
            if coef == 1:
                terms.append(z)
            elif coef == -1:
                terms.append(f"-{z}")
            else:
                terms.append(f"{_render_fraction(coef)}*{z}")
    if not terms:
        return "0", False
    text = terms[0]
    for t in terms[1:]:
        text += t if t.startswith("-") else "+" + t
    return text, len(terms) > 1


def _render_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _render_monomial(ctx: Context, exps) -> str:
    parts = []
    for i, e in enumerate(exps):
        if not e:
            continue
        p = ctx.params[i]
        if p.root_order == 1:
            parts.append(p.name if e == 1 else f"{p.name}^{e}")
        else:
            f = Fraction(e, p.root_order)
            if f == 1:
                parts.append(p.name)
            elif f.denominator == 1:
                parts.append(f"{p.name}^{f.numerator}")
            else:
                parts.append(f"{p.name}^({f.numerator}/{f.denominator})")
    return "*".join(parts)


def _render_poly(ctx: Context, poly) -> tuple[str, bool]:
    if not poly:
        return "0", False
    items = sorted(poly.items(), key=lambda kv: _deglex_key(kv[0]), reverse=True)
    pieces = []
    for exps, coef in items:
        mono = _render_monomial(ctx, exps)
        ctext, comp = _render_cyc(coef, ctx.conductor)
        if not mono:
            pieces.append(f"({ctext})" if comp else ctext)
        elif ctext == "1":
            pieces.append(mono)
        elif ctext == "-1":
            pieces.append(f"-{mono}")
        elif comp:
            pieces.append(f"({ctext})*{mono}")
        else:
            pieces.append(f"{ctext}*{mono}")
    text = pieces[0]
    for p in pieces[1:]:
        text += p if p.startswith("-") else "+" + p
    return text, len(pieces) > 1


def render_scalar(s: Scalar) -> str:
    """Canonical text form; parse_scalar(ctx, render_scalar(s)) == s."""
    num_text, num_comp = _render_poly(s.ctx, s.num)
    if s.den_is_one():
        return num_text
    den_text, _ = _render_poly(s.ctx, s.den)
    if num_comp or num_text.startswith("-"):
        num_text = f"({num_text})"
    return f"{num_text}/({den_text})"
