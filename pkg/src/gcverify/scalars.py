"""Exact coefficient field: rational functions over Q(i) on a chart.

Every downstream structure is linear algebra over this field.  Values are
canonical at construction (gcd-reduced, denominator monic under the graded
lex monomial order), so equality-to-zero is plain structural equality and
every verification reduces to an exact identity check.
"""

from __future__ import annotations

from gmpy2 import mpq

from ._gaussian import GR_I, GR_ONE, GaussianRational, gr_from_int
from ._poly import Poly, poly_gcd
from .errors import ChartMismatch, DivisionByZeroFunction, ScenarioError


class Chart:
    """A coordinate chart: dimension plus distinct coordinate names."""

    __slots__ = ("dim", "coordinates", "_hash")

    def __init__(self, coordinates):
        names = tuple(coordinates)
        if not names:
            raise ValueError("chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise ValueError("coordinate names must be distinct")
        for n in names:
            if not n.isidentifier():
                raise ValueError(f"invalid coordinate name: {n!r}")
            if n == "i":
                raise ValueError("'i' is reserved for the imaginary unit")
        self.coordinates = names
        self.dim = len(names)
        self._hash = hash(names)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.coordinates == other.coordinates

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Chart({list(self.coordinates)})"

    # -- scalar constructors -------------------------------------------

    def zero(self) -> "ScalarField":
        return ScalarField(self, Poly.zero(self.dim), Poly.one(self.dim))

    def one(self) -> "ScalarField":
        return ScalarField(self, Poly.one(self.dim), Poly.one(self.dim))

    def imaginary(self) -> "ScalarField":
        return ScalarField(self, Poly.const(self.dim, GR_I), Poly.one(self.dim))

    def integer(self, n: int) -> "ScalarField":
        return ScalarField(self, Poly.const(self.dim, gr_from_int(n)), Poly.one(self.dim))

    def rational(self, p: int, q: int = 1) -> "ScalarField":
        c = GaussianRational(mpq(p, q))
        return ScalarField(self, Poly.const(self.dim, c), Poly.one(self.dim))

    def constant(self, c: GaussianRational) -> "ScalarField":
        return ScalarField(self, Poly.const(self.dim, c), Poly.one(self.dim))

    def coordinate(self, k: int) -> "ScalarField":
        if not 0 <= k < self.dim:
            raise IndexError(f"coordinate index {k} out of range")
        return ScalarField(self, Poly.variable(self.dim, k), Poly.one(self.dim))

    def coordinate_named(self, name: str) -> "ScalarField":
        return self.coordinate(self.coordinates.index(name))

    def scalar(self, value) -> "ScalarField":
        """Coerce ints, Gaussian rationals, or expression strings."""
        if isinstance(value, ScalarField):
            if value.chart != self:
                raise ChartMismatch("scalar belongs to a different chart")
            return value
        if isinstance(value, int):
            return self.integer(value)
        if isinstance(value, GaussianRational):
            return self.constant(value)
        if isinstance(value, str):
            return parse_scalar(self, value)
        raise TypeError(f"cannot coerce {type(value).__name__} to a scalar")


class ScalarField:
    """A rational function num/den in canonical form over a chart."""

    __slots__ = ("chart", "num", "den")

    def __init__(self, chart: Chart, num: Poly, den: Poly):
        if den.is_zero():
            raise DivisionByZeroFunction("denominator is identically zero")
        if num.is_zero():
            num = Poly.zero(chart.dim)
            den = Poly.one(chart.dim)
        elif den.is_constant():
            c = den.constant_value()
            if c != GR_ONE:
                num = num.scale(c.inverse())
            den = Poly.one(chart.dim)
        else:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.div_exact(g)
                den = den.div_exact(g)
            _, lc = den.lead()
            if lc != GR_ONE:
                inv = lc.inverse()
                num = num.scale(inv)
                den = den.scale(inv)
            if den.is_constant():
                num = num.scale(den.constant_value().inverse())
                den = Poly.one(chart.dim)
        self.chart = chart
        self.num = num
        self.den = den

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.chart.integer(other)
        if not isinstance(other, ScalarField):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "ScalarField":
        if isinstance(other, ScalarField):
            if other.chart != self.chart:
                raise ChartMismatch("operands belong to different charts")
            return other
        if isinstance(other, (int, GaussianRational)):
            return self.chart.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_constant() and other.den.is_constant():
            return ScalarField(self.chart, self.num + other.num, self.den)
        return ScalarField(
            self.chart,
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(ScalarField)
        out.chart = self.chart
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_constant() and other.den.is_constant():
            out_num = self.num * other.num
            out = object.__new__(ScalarField)
            out.chart = self.chart
            out.num = out_num
            out.den = self.den
            return out
        return ScalarField(self.chart, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZeroFunction("division by the zero function")
        return ScalarField(self.chart, self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self.chart.scalar(other) / self

    def inverse(self) -> "ScalarField":
        if self.num.is_zero():
            raise DivisionByZeroFunction("inverse of the zero function")
        return ScalarField(self.chart, self.den, self.num)

    # -- calculus -----------------------------------------------------------

    def partial(self, k: int) -> "ScalarField":
        """Exact partial derivative in coordinate k (quotient rule)."""
        if not 0 <= k < self.chart.dim:
            raise IndexError(f"coordinate index {k} out of range")
        if self.den.is_constant():
            out = object.__new__(ScalarField)
            out.chart = self.chart
            out.num = self.num.diff(k)
            out.den = self.den
            return out
        dn = self.num.diff(k) * self.den - self.num * self.den.diff(k)
        return ScalarField(self.chart, dn, self.den * self.den)

    def conjugate(self) -> "ScalarField":
        """Complex conjugation: conjugate coefficients, fix coordinates."""
        num = self.num.conjugate()
        den = self.den.conjugate()
        return ScalarField(self.chart, num, den)

    def __repr__(self):
        return f"ScalarField({serialize_scalar(self)!r})"

    def __str__(self):
        return serialize_scalar(self)


# -- spec-level operation names ---------------------------------------------


def field_arith(a: ScalarField, b: ScalarField, op: str) -> ScalarField:
    """Exact field arithmetic: op in {'add', 'mul', 'div'} (plus 'sub')."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def partial(f: ScalarField, k: int) -> ScalarField:
    return f.partial(k)


# -- expression grammar -------------------------------------------------------
#
# expr  := term (('+'|'-') term)*
# term  := unary (('*'|'/') unary)*
# unary := ('-'|'+') unary | power
# power := atom ('^' INT)*
# atom  := INT | NAME | '(' expr ')'
#
# 'i' is the imaginary unit; any other NAME must be a chart coordinate.


class Token:
    __slots__ = ("kind", "value", "pos")

    def __init__(self, kind, value, pos):
        self.kind = kind
        self.value = value
        self.pos = pos

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r}, {self.pos})"


_OPS = set("+-*/^()[]")


def tokenize(text: str):
    """Lex an expression into INT / NAME / single-char operator tokens."""
    tokens = []
    n = len(text)
    j = 0
    while j < n:
        ch = text[j]
        if ch.isspace():
            j += 1
            continue
        if ch.isdigit():
            start = j
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", int(text[start:j]), start))
            continue
        if ch.isalpha() or ch == "_":
            start = j
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[start:j], start))
            continue
        if ch in _OPS:
            tokens.append(Token("OP", ch, j))
            j += 1
            continue
        raise ScenarioError(f"unexpected character {ch!r}", location=j)
    tokens.append(Token("END", None, n))
    return tokens


class _ScalarParser:
    def __init__(self, chart: Chart, tokens):
        self.chart = chart
        self.tokens = tokens
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def advance(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect_op(self, ch):
        tok = self.advance()
        if tok.kind != "OP" or tok.value != ch:
            raise ScenarioError(f"expected {ch!r}", location=tok.pos)
        return tok

    def parse(self) -> ScalarField:
        value = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ScenarioError("trailing input after expression", location=tok.pos)
        return value

    def expr(self) -> ScalarField:
        value = self.term()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if tok.value == "+" else value - rhs
            else:
                return value

    def term(self) -> ScalarField:
        value = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value in "*/":
                self.advance()
                rhs = self.unary()
                if tok.value == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        raise ScenarioError(
                            "division by zero in expression", location=tok.pos
                        )
                    value = value / rhs
            else:
                return value

    def unary(self) -> ScalarField:
        tok = self.peek()
        if tok.kind == "OP" and tok.value in "+-":
            self.advance()
            value = self.unary()
            return value if tok.value == "+" else -value
        return self.power()

    def power(self) -> ScalarField:
        value = self.atom()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value == "^":
                self.advance()
                etok = self.advance()
                if etok.kind != "INT":
                    raise ScenarioError(
                        "exponent must be a nonnegative integer", location=etok.pos
                    )
                result = self.chart.one()
                for _ in range(etok.value):
                    result = result * value
                value = result
            else:
                return value

    def atom(self) -> ScalarField:
        tok = self.advance()
        if tok.kind == "INT":
            return self.chart.integer(tok.value)
        if tok.kind == "NAME":
            if tok.value == "i":
                return self.chart.imaginary()
            if tok.value in self.chart.coordinates:
                return self.chart.coordinate_named(tok.value)
            raise ScenarioError(f"unknown identifier {tok.value!r}", location=tok.pos)
        if tok.kind == "OP" and tok.value == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ScenarioError("expected a value", location=tok.pos)


def parse_scalar(chart: Chart, text: str) -> ScalarField:
    return _ScalarParser(chart, tokenize(text)).parse()


# -- canonical serialization ---------------------------------------------------


def _monomial_str(exp, names) -> str:
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _coeff_prefix(c: GaussianRational, mono: str) -> str:
    if not mono:
        return str(c)
    if not c.im:
        if c.re == 1:
            return mono
        if c.re == -1:
            return f"-{mono}"
        return f"{c.re}*{mono}"
    if not c.re:
        if c.im == 1:
            return f"i*{mono}"
        if c.im == -1:
            return f"-i*{mono}"
        return f"{c.im}*i*{mono}"
    return f"({c})*{mono}"


def poly_to_str(p: Poly, names) -> str:
    if p.is_zero():
        return "0"
    items = sorted(p.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
    rendered = []
    for exp, c in items:
        rendered.append(_coeff_prefix(c, _monomial_str(exp, names)))
    out = rendered[0]
    for t in rendered[1:]:
        if t.startswith("-"):
            out += f" - {t[1:]}"
        else:
            out += f" + {t}"
    return out


def serialize_scalar(f: ScalarField) -> str:
    names = f.chart.coordinates
    if f.den.is_constant():
        return poly_to_str(f.num, names)
    return f"({poly_to_str(f.num, names)})/({poly_to_str(f.den, names)})"
