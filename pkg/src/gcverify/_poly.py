"""Sparse multivariate polynomials over the Gaussian rationals.

Terms are stored as a dict mapping exponent tuples to nonzero
GaussianRational coefficients.  The monomial order used for leading terms
and canonical printing is graded lexicographic (total degree first, then
lexicographic on exponents).  The gcd is a primitive subresultant-free PRS
recursing on one variable at a time; inputs in this package stay small, so
simplicity wins over asymptotics.
"""

from __future__ import annotations

from gmpy2 import mpq

from ._gaussian import GR_ONE, GR_ZERO, GaussianRational, gr_from_int


class Poly:
    """Immutable sparse polynomial with a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict):
        self.nvars = nvars
        self.terms = terms

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars, {})

    @staticmethod
    def const(nvars: int, c: GaussianRational) -> "Poly":
        if not c:
            return Poly(nvars, {})
        return Poly(nvars, {(0,) * nvars: c})

    @staticmethod
    def one(nvars: int) -> "Poly":
        return Poly.const(nvars, GR_ONE)

    @staticmethod
    def variable(nvars: int, k: int) -> "Poly":
        exp = [0] * nvars
        exp[k] = 1
        return Poly(nvars, {tuple(exp): GR_ONE})

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return len(self.terms) == 0 or (
            len(self.terms) == 1 and not any(next(iter(self.terms)))
        )

    def constant_value(self) -> GaussianRational:
        if not self.terms:
            return GR_ZERO
        return self.terms[(0,) * self.nvars]

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- ring operations -----------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, c in other.terms.items():
            prev = out.get(exp)
            if prev is None:
                out[exp] = c
            else:
                s = prev + c
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        if not other.terms:
            return self
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly.zero(self.nvars)
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                prev = out.get(exp)
                if prev is None:
                    if c:
                        out[exp] = c
                else:
                    s = prev + c
                    if s:
                        out[exp] = s
                    else:
                        del out[exp]
        return Poly(self.nvars, out)

    def scale(self, c: GaussianRational) -> "Poly":
        if not c:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {e: k * c for e, k in self.terms.items()})

    def pow(self, n: int) -> "Poly":
        result = Poly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus -------------------------------------------------------

    def diff(self, k: int) -> "Poly":
        out: dict = {}
        for exp, c in self.terms.items():
            d = exp[k]
            if d == 0:
                continue
            nexp = exp[:k] + (d - 1,) + exp[k + 1 :]
            nc = c.scale(mpq(d))
            prev = out.get(nexp)
            if prev is None:
                out[nexp] = nc
            else:
                s = prev + nc
                if s:
                    out[nexp] = s
                else:
                    del out[nexp]
        return Poly(self.nvars, out)

    def conjugate(self) -> "Poly":
        return Poly(self.nvars, {e: c.conjugate() for e, c in self.terms.items()})

    # -- monomial order ---------------------------------------------------

    def _order_key(self, exp):
        return (sum(exp), exp)

    def lead(self):
        """Leading (exponent, coefficient) under graded lex order."""
        exp = max(self.terms, key=self._order_key)
        return exp, self.terms[exp]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, k: int) -> int:
        if not self.terms:
            return -1
        return max(e[k] for e in self.terms)

    def monic(self) -> "Poly":
        """Divide by the leading coefficient (graded lex order)."""
        if not self.terms:
            return self
        _, lc = self.lead()
        if lc == GR_ONE:
            return self
        inv = lc.inverse()
        return self.scale(inv)

    # -- division ---------------------------------------------------------

    def div_exact(self, g: "Poly") -> "Poly":
        """Exact quotient self/g; raises ValueError if not divisible."""
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if g.is_constant():
            return self.scale(g.constant_value().inverse())
        rem = self
        q: dict = {}
        gl_exp, gl_c = g.lead()
        gl_inv = gl_c.inverse()
        while rem.terms:
            re_exp, re_c = rem.lead()
            qe = tuple(a - b for a, b in zip(re_exp, gl_exp))
            if any(x < 0 for x in qe):
                raise ValueError("inexact polynomial division")
            qc = re_c * gl_inv
            q[qe] = qc
            rem = rem - Poly(self.nvars, {qe: qc}) * g
        return Poly(self.nvars, q)

    # -- helpers for gcd ---------------------------------------------------

    def monomial_content(self):
        """Componentwise min exponent over all terms."""
        it = iter(self.terms)
        m = list(next(it))
        for exp in it:
            for j, e in enumerate(exp):
                if e < m[j]:
                    m[j] = e
        return tuple(m)

    def shift_down(self, mono) -> "Poly":
        if not any(mono):
            return self
        return Poly(
            self.nvars,
            {tuple(a - b for a, b in zip(e, mono)): c for e, c in self.terms.items()},
        )

    def __repr__(self):
        return f"Poly({self.nvars}, {len(self.terms)} terms)"


# -- gcd ------------------------------------------------------------------


def _coeffs_in_var(f: Poly, k: int):
    """View f as univariate in variable k: dict degree -> Poly (var k zeroed)."""
    out: dict = {}
    for exp, c in f.terms.items():
        d = exp[k]
        rest = exp[:k] + (0,) + exp[k + 1 :]
        sub = out.setdefault(d, {})
        sub[rest] = c
    return {d: Poly(f.nvars, t) for d, t in out.items()}


def _from_coeffs(nvars: int, k: int, coeffs: dict) -> Poly:
    terms: dict = {}
    for d, p in coeffs.items():
        for exp, c in p.terms.items():
            e = exp[:k] + (d,) + exp[k + 1 :]
            terms[e] = c
    return Poly(nvars, terms)


def _content(coeffs: dict) -> Poly:
    polys = sorted(coeffs.values(), key=lambda p: len(p.terms))
    g = polys[0]
    for p in polys[1:]:
        g = poly_gcd(g, p)
        if g.is_constant():
            break
    return g


def _prem(f: dict, g: dict):
    """Pseudo-remainder of univariate views (coefficients are Polys).

    One reduction step maps r to lc(g)*(r - lead) - lc(r)*x^shift*(g - lead),
    which keeps everything polynomial at the cost of content growth; callers
    re-primitivize between steps.
    """
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    while r:
        dr = max(r)
        if dr < dg:
            break
        lr = r[dr]
        shift = dr - dg
        new: dict = {}
        for d, c in r.items():
            if d == dr:
                continue
            v = c * lg
            if not v.is_zero():
                new[d] = v
        for d, c in g.items():
            if d == dg:
                continue
            target = d + shift
            v = c * lr
            prev = new.get(target)
            s = (prev - v) if prev is not None else (-v)
            if s.is_zero():
                new.pop(target, None)
            else:
                new[target] = s
        r = new
    return r


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Gcd over Q(i)[x1..xn], normalized monic under graded lex order."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return Poly.one(f.nvars)

    mf = f.monomial_content()
    mg = g.monomial_content()
    common = tuple(min(a, b) for a, b in zip(mf, mg))
    f = f.shift_down(mf)
    g = g.shift_down(mg)

    result = _gcd_primitive(f, g)
    if any(common):
        result = result * Poly(f.nvars, {common: GR_ONE})
    return result.monic()


def _gcd_primitive(f: Poly, g: Poly) -> Poly:
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if f.is_constant() or g.is_constant():
        return Poly.one(f.nvars)
    # main variable: first with positive degree in both
    k = None
    for j in range(f.nvars):
        if f.degree_in(j) > 0 and g.degree_in(j) > 0:
            k = j
            break
    if k is None:
        # no shared variable: gcd of contents only, which is 1 over a field
        return Poly.one(f.nvars)

    fc = _coeffs_in_var(f, k)
    gc = _coeffs_in_var(g, k)
    cont_f = _content(fc)
    cont_g = _content(gc)
    fp = {d: p.div_exact(cont_f) for d, p in fc.items()}
    gp = {d: p.div_exact(cont_g) for d, p in gc.items()}
    cont = _gcd_primitive(cont_f, cont_g)

    a, b = fp, gp
    if max(a) < max(b):
        a, b = b, a
    while True:
        r = _prem(a, b)
        if not r:
            rb = _from_coeffs(f.nvars, k, b)
            return _primitive_in_var(rb, k) * cont
        if max(r) == 0:
            return cont
        a = b
        prim = _primitive_in_var(_from_coeffs(f.nvars, k, r), k)
        b = _coeffs_in_var(prim, k)


def _primitive_in_var(f: Poly, k: int) -> Poly:
    coeffs = _coeffs_in_var(f, k)
    cont = _content(coeffs)
    if cont.is_constant():
        return f
    return f.div_exact(cont)
