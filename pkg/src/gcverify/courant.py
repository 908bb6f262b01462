"""The (twisted) Courant algebroid on tangent + cotangent, and the abstract
Courant axiom checker.

GenSection is a generalized vector: a vector field plus a 1-form.  The
standard and 3-form twisted brackets are computed by Cartan calculus; the
abstract CourantData carries a frame-level bracket table with the unique
function-linear extension law, so doubles of bialgebroids and the standard
chart structure run through one checker.
"""

from __future__ import annotations

import itertools

from .algebroid import LieAlgebroidStructure
from .errors import (
    ChartMismatch,
    DependentFrame,
    NotClosed,
    SingularMetric,
)
from . import linalg
from .multivector import (
    Frame,
    GradedElement,
    chart_frames,
    cotangent_frame,
    de_rham_d,
    det_pair,
    interior,
    lie_derivative,
    serialize_graded,
    tangent_frame,
    vector_bracket,
)
from .report import CaseCheck, CheckResult
from .scalars import Chart, ScalarField


class GenSection:
    """A section of tangent + cotangent: vector part plus form part."""

    __slots__ = ("vector", "form")

    def __init__(self, vector: GradedElement, form: GradedElement):
        if vector.frame.chart != form.frame.chart:
            raise ChartMismatch("vector and form parts over different charts")
        for part, want in ((vector, "tangent-chart"), (form, "cotangent-chart")):
            if part.frame.kind != want:
                raise ChartMismatch(f"expected a {want} element")
            if part.components and part.degrees() != [1]:
                raise ChartMismatch("generalized sections are degree-1 data")
        self.vector = vector
        self.form = form

    @property
    def chart(self) -> Chart:
        return self.vector.frame.chart

    @staticmethod
    def zero(chart: Chart) -> "GenSection":
        t, tc = chart_frames(chart)
        return GenSection(GradedElement.zero(t), GradedElement.zero(tc))

    @staticmethod
    def from_vector(v: GradedElement) -> "GenSection":
        return GenSection(v, GradedElement.zero(cotangent_frame(v.frame.chart)))

    @staticmethod
    def from_form(f: GradedElement) -> "GenSection":
        return GenSection(GradedElement.zero(tangent_frame(f.frame.chart)), f)

    @staticmethod
    def from_coeffs(chart: Chart, coeffs) -> "GenSection":
        """Coefficients ordered as (vector components, form components)."""
        m = chart.dim
        t, tc = chart_frames(chart)
        v = GradedElement.from_terms(
            t, (((k,), c) for k, c in enumerate(coeffs[:m]) if not c.is_zero())
        )
        f = GradedElement.from_terms(
            tc, (((k,), c) for k, c in enumerate(coeffs[m:]) if not c.is_zero())
        )
        return GenSection(v, f)

    def coeffs(self):
        m = self.chart.dim
        return [self.vector.coefficient((k,)) for k in range(m)] + [
            self.form.coefficient((k,)) for k in range(m)
        ]

    def __add__(self, other: "GenSection") -> "GenSection":
        return GenSection(self.vector + other.vector, self.form + other.form)

    def __sub__(self, other: "GenSection") -> "GenSection":
        return GenSection(self.vector - other.vector, self.form - other.form)

    def __neg__(self) -> "GenSection":
        return GenSection(-self.vector, -self.form)

    def scale(self, s) -> "GenSection":
        return GenSection(self.vector.scale(s), self.form.scale(s))

    def conjugate(self) -> "GenSection":
        return GenSection(self.vector.conjugate(), self.form.conjugate())

    def is_zero(self) -> bool:
        return self.vector.is_zero() and self.form.is_zero()

    def __eq__(self, other):
        if not isinstance(other, GenSection):
            return NotImplemented
        return self.vector == other.vector and self.form == other.form

    def __hash__(self):
        return hash((self.vector, self.form))

    def __repr__(self):
        return f"GenSection({self})"

    def __str__(self):
        v = serialize_graded(self.vector)
        f = serialize_graded(self.form)
        if self.vector.is_zero():
            return f
        if self.form.is_zero():
            return v
        return f"{v} + {f}" if not f.startswith("-") else f"{v} - {f[1:]}"


def natural_pairing(z1: GenSection, z2: GenSection) -> ScalarField:
    """Half the sum of the two evaluation pairings."""
    if z1.chart != z2.chart:
        raise ChartMismatch("pairing needs sections over one chart")
    chart = z1.chart
    acc = chart.zero()
    if not (z1.form.is_zero() or z2.vector.is_zero()):
        acc = acc + det_pair(z1.form, z2.vector)
    if not (z2.form.is_zero() or z1.vector.is_zero()):
        acc = acc + det_pair(z2.form, z1.vector)
    return acc * chart.rational(1, 2)


def duality_pairing(z1: GenSection, z2: GenSection) -> ScalarField:
    """The eigenbundle duality pairing: twice the natural pairing."""
    return natural_pairing(z1, z2) * z1.chart.integer(2)


def _require_closed(h: GradedElement):
    dh = de_rham_d(h)
    if not dh.is_zero():
        raise NotClosed(f"3-form is not closed: d(H) = {serialize_graded(dh)}")


def dorfman_twisted(z1: GenSection, z2: GenSection, h: GradedElement) -> GenSection:
    """Twisted non-skew bracket on generalized sections.

    Normalized so that the symmetric part is exactly twice the derivative of
    the pairing.  The twist term is the double contraction of the closed
    3-form with the sign of the derived bracket of (d + H wedge), which is
    the unique choice making annihilators of twisted-closed spinors close
    under the bracket; see the conventions banner.
    """
    if z1.chart != z2.chart:
        raise ChartMismatch("bracket needs sections over one chart")
    _require_closed(h)
    x1, e1 = z1.vector, z1.form
    x2, e2 = z2.vector, z2.form
    vec = vector_bracket(x1, x2)
    form = lie_derivative(x1, e2) - interior(x2, de_rham_d(e1))
    if not h.is_zero():
        form = form + interior(x1, interior(x2, h))
    return GenSection(vec, form)


def courant_twisted(z1: GenSection, z2: GenSection, h: GradedElement) -> GenSection:
    """Twisted skew bracket: the non-skew bracket minus D of the pairing."""
    rough = dorfman_twisted(z1, z2, h)
    p = natural_pairing(z1, z2)
    return GenSection(rough.vector, rough.form - de_rham_d(
        GradedElement.from_scalar(cotangent_frame(z1.chart), p)
    ))


# -- ambient expansion ---------------------------------------------------------------

_AMBIENT_FRAMES: dict = {}


def ambient_frame(chart: Chart) -> Frame:
    """Tangent + cotangent as one rank-2m abstract frame (for comparisons)."""
    key = chart.coordinates
    frame = _AMBIENT_FRAMES.get(key)
    if frame is None:
        t, tc = chart_frames(chart)
        frame = Frame(chart, list(t.labels) + list(tc.labels), "abstract", tag="TpT*")
        _AMBIENT_FRAMES[key] = frame
    return frame


def section_to_ambient(z: GenSection) -> GradedElement:
    """Degree-1 ambient expansion of a generalized section."""
    amb = ambient_frame(z.chart)
    m = z.chart.dim
    terms = []
    for (k,), c in z.vector.components.items():
        terms.append(((k,), c))
    for (k,), c in z.form.components.items():
        terms.append(((m + k,), c))
    return GradedElement.from_terms(amb, terms)


def ambient_to_section(el: GradedElement) -> GenSection:
    """Inverse of section_to_ambient on degree-1 elements."""
    chart = el.frame.chart
    m = chart.dim
    coeffs = [chart.zero()] * (2 * m)
    for (k,), c in el.components.items():
        coeffs[k] = c
    return GenSection.from_coeffs(chart, coeffs)


# -- abstract Courant data ---------------------------------------------------------


class CourantData:
    """Frame-level data: pseudo-metric, anchor, and a Dorfman bracket table.

    Sections are coefficient vectors over the frame; the bracket of
    function multiples follows from the table by the extension law
    <<f z1, z2>> = f<<z1,z2>> - (rho(z2)f) z1 + 2<z1,z2> D f.
    """

    def __init__(self, chart: Chart, labels, gram, anchor, table, realization=None):
        self.chart = chart
        self.labels = tuple(labels)
        self.rank = len(self.labels)
        self.gram = gram
        self.anchor = anchor
        self.table = table
        self.realization = realization  # optional GenSection list for reporting
        self.gram_inv = linalg.invert(chart, gram)
        if self.gram_inv is None:
            raise SingularMetric("pseudo-metric is degenerate over the function field")

    # -- scalar helpers ------------------------------------------------------

    def rho_index(self, a: int, f: ScalarField) -> ScalarField:
        acc = self.chart.zero()
        for k, c in enumerate(self.anchor[a]):
            if not c.is_zero():
                acc = acc + c * f.partial(k)
        return acc

    def rho_apply(self, z, f: ScalarField) -> ScalarField:
        acc = self.chart.zero()
        for a, c in enumerate(z):
            if not c.is_zero():
                acc = acc + c * self.rho_index(a, f)
        return acc

    def rho_push(self, z) -> GradedElement:
        t = tangent_frame(self.chart)
        out = GradedElement.zero(t)
        for a, c in enumerate(z):
            if c.is_zero():
                continue
            out = out + GradedElement.from_terms(
                t,
                (
                    ((k,), c * w)
                    for k, w in enumerate(self.anchor[a])
                    if not w.is_zero()
                ),
            )
        return out

    def pairing(self, u, v) -> ScalarField:
        acc = self.chart.zero()
        for a, ca in enumerate(u):
            if ca.is_zero():
                continue
            for b, cb in enumerate(v):
                if cb.is_zero():
                    continue
                g = self.gram[a][b]
                if not g.is_zero():
                    acc = acc + ca * cb * g
        return acc

    def d_op(self, f: ScalarField):
        """The section with <Df, z> = rho(z) f / 2 for every section z."""
        rhs = [self.rho_index(a, f) * self.chart.rational(1, 2) for a in range(self.rank)]
        return linalg.mat_vec(self.gram_inv, rhs, self.chart.zero())

    def bracket(self, u, v):
        """Dorfman bracket of coefficient vectors via table + extension law."""
        chart = self.chart
        zero = chart.zero()
        out = [zero] * self.rank
        # sum over alpha: f_a [ table and derivative terms ]
        for a, fa in enumerate(u):
            if fa.is_zero():
                continue
            for b, gb in enumerate(v):
                if gb.is_zero():
                    continue
                row = self.table[a][b]
                if row is not None:
                    for k, t in enumerate(row):
                        if not t.is_zero():
                            out[k] = out[k] + fa * gb * t
                if not gb.is_constant():
                    dg = self.rho_index(a, gb)
                    if not dg.is_zero():
                        out[b] = out[b] + fa * dg
            if fa.is_constant():
                continue
            df = self.rho_apply(v, fa)
            if not df.is_zero():
                out[a] = out[a] - df
            basis_a = [chart.one() if j == a else zero for j in range(self.rank)]
            w = self.pairing(basis_a, v)
            if not w.is_zero():
                dfa = self.d_op(fa)
                two_w = w * chart.integer(2)
                for k, t in enumerate(dfa):
                    if not t.is_zero():
                        out[k] = out[k] + two_w * t
        return out

    def section_str(self, z) -> str:
        parts = []
        for c, lab in zip(z, self.labels):
            if c.is_zero():
                continue
            cs = str(c)
            if cs == "1":
                parts.append(lab)
            elif cs == "-1":
                parts.append(f"-{lab}")
            elif any(op in cs for op in (" + ", " - ", "/")):
                parts.append(f"({cs})*{lab}")
            else:
                parts.append(f"{cs}*{lab}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def standard_courant(chart: Chart, h: GradedElement) -> CourantData:
    """The chart structure on tangent + cotangent, twisted by a 3-form.

    The 3-form is taken as given (callers validate closedness; the axiom
    checker is expected to expose the failure when it is not closed).
    """
    m = chart.dim
    zero, one, half = chart.zero(), chart.one(), chart.rational(1, 2)
    t, tc = chart_frames(chart)
    labels = list(t.labels) + list(tc.labels)
    n2 = 2 * m
    gram = [[zero] * n2 for _ in range(n2)]
    for k in range(m):
        gram[k][m + k] = half
        gram[m + k][k] = half
    anchor = [[one if j == k else zero for j in range(m)] for k in range(m)]
    anchor += [[zero] * m for _ in range(m)]
    table = [[None] * n2 for _ in range(n2)]
    if not h.is_zero():
        for a in range(m):
            for b in range(m):
                w = interior(
                    GradedElement.basis_vector(t, a),
                    interior(GradedElement.basis_vector(t, b), h),
                )
                if w.is_zero():
                    continue
                table[a][b] = [zero] * m + [w.coefficient((k,)) for k in range(m)]
    realization = []
    for k in range(m):
        realization.append(GenSection.from_vector(GradedElement.basis_vector(t, k)))
    for k in range(m):
        realization.append(GenSection.from_form(GradedElement.basis_vector(tc, k)))
    return CourantData(chart, labels, gram, anchor, table, realization)


def double_of_bialgebroid(
    a: LieAlgebroidStructure, astar: LieAlgebroidStructure
) -> CourantData:
    """The Courant structure on A + A* built from a bialgebroid pair."""
    chart = a.chart
    r = a.rank
    zero, half = chart.zero(), chart.rational(1, 2)
    labels = list(a.frame.labels) + list(astar.frame.labels)
    n2 = 2 * r
    gram = [[zero] * n2 for _ in range(n2)]
    for k in range(r):
        gram[k][r + k] = half
        gram[r + k][k] = half
    anchor = [list(a.anchor[k]) for k in range(r)]
    anchor += [list(astar.anchor[k]) for k in range(r)]

    def embed_a(el: GradedElement):
        return [el.coefficient((k,)) for k in range(r)] + [zero] * r

    def embed_astar(el: GradedElement):
        return [zero] * r + [el.coefficient((k,)) for k in range(r)]

    def combine(xa, xs):
        return [p + q for p, q in zip(embed_a(xa), embed_astar(xs))]

    table = [[None] * n2 for _ in range(n2)]
    for i in range(r):
        e_i = GradedElement.basis_vector(a.frame, i)
        th_i = GradedElement.basis_vector(astar.frame, i)
        for j in range(r):
            e_j = GradedElement.basis_vector(a.frame, j)
            th_j = GradedElement.basis_vector(astar.frame, j)
            # [e_i, e_j]
            br = a.bracket_frame(i, j)
            if not br.is_zero():
                table[i][j] = embed_a(br)
            # [th_i, th_j]
            brs = astar.bracket_frame(i, j)
            if not brs.is_zero():
                table[r + i][r + j] = embed_astar(brs)
            # [e_i, th_j] = (-iota_{th_j} dstar e_i) + iota_{e_i} d th_j
            da_ei = astar.differential(e_i)
            part_a = -interior(th_j, da_ei)
            part_s = interior(e_i, a.differential(th_j))
            if not (part_a.is_zero() and part_s.is_zero()):
                table[i][r + j] = combine(part_a, part_s)
            # [th_i, e_j] = iota_{th_i} dstar e_j - iota_{e_j} d th_i
            part_a2 = interior(th_i, astar.differential(e_j))
            part_s2 = -interior(e_j, a.differential(th_i))
            if not (part_a2.is_zero() and part_s2.is_zero()):
                table[r + i][j] = combine(part_a2, part_s2)
    return CourantData(chart, labels, gram, anchor, table)


def d_op(f: ScalarField, data: CourantData):
    """The derivative section of a function in an abstract Courant structure."""
    return data.d_op(f)


# -- axiom checker -------------------------------------------------------------------


def _battery_sections(data: CourantData, degree: int):
    """Frame sections plus a deterministic stripe of monomial multiples."""
    chart = data.chart
    zero = chart.zero()
    base = []
    for a in range(data.rank):
        vec = [zero] * data.rank
        vec[a] = chart.one()
        base.append((data.labels[a], vec))
    multiplied = []
    for a in range(data.rank):
        monos = []
        if degree >= 1:
            monos.append(chart.coordinate(a % chart.dim))
        if degree >= 2:
            monos.append(
                chart.coordinate(a % chart.dim)
                * chart.coordinate((a + 1) % chart.dim)
            )
        for mono in monos:
            vec = [zero] * data.rank
            vec[a] = mono
            multiplied.append((f"{mono}*{data.labels[a]}", vec))
    return base, multiplied


def check_courant_axioms(data: CourantData, degree: int = 2):
    """All six axioms over the frame battery with monomial multipliers.

    Failure witnesses carry the offending sections and the exact residual.
    """
    chart = data.chart
    zero = chart.zero()
    base, multiplied = _battery_sections(data, degree)
    sections = base + multiplied
    n = len(base)

    def vsub(u, v):
        return [p - q for p, q in zip(u, v)]

    def vzero(u):
        return all(c.is_zero() for c in u)

    bracket = data.bracket

    pair_cache = {}
    for ia, (_, u) in enumerate(base):
        for ib, (_, v) in enumerate(base):
            pair_cache[(ia, ib)] = bracket(u, v)

    checks = []

    # (1) left Leibniz/Jacobi identity for the non-skew bracket
    c1 = CaseCheck("courant-axioms", "axiom-1-jacobi")
    triple_sources = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    for (i, j, k) in triple_sources:
        lhs = bracket(base[i][1], pair_cache[(j, k)])
        rhs1 = bracket(pair_cache[(i, j)], base[k][1])
        rhs2 = bracket(base[j][1], pair_cache[(i, k)])
        res = vsub(lhs, [p + q for p, q in zip(rhs1, rhs2)])
        c1.case(
            vzero(res),
            f"z1={base[i][0]}, z2={base[j][0]}, z3={base[k][0]}",
            data.section_str(res) if not vzero(res) else "",
        )
    # multiplied variants: one monomial-scaled section per slot, striped
    for (i, j, k) in itertools.combinations(range(n), 3):
        for slot in range(3):
            widx = (i + 3 * j + 5 * k + slot) % len(multiplied)
            wname, w = multiplied[widx]
            tri = [base[i][1], base[j][1], base[k][1]]
            names = [base[i][0], base[j][0], base[k][0]]
            tri[slot] = w
            names[slot] = wname
            lhs = bracket(tri[0], bracket(tri[1], tri[2]))
            rhs = [
                p + q
                for p, q in zip(
                    bracket(bracket(tri[0], tri[1]), tri[2]),
                    bracket(tri[1], bracket(tri[0], tri[2])),
                )
            ]
            res = vsub(lhs, rhs)
            c1.case(
                vzero(res),
                f"z1={names[0]}, z2={names[1]}, z3={names[2]}",
                data.section_str(res) if not vzero(res) else "",
            )
    checks.append(c1.result())

    # (2) anchor is a bracket homomorphism
    c2 = CaseCheck("courant-axioms", "axiom-2-anchor-morphism")
    for (na, u), (nb, v) in itertools.product(sections, sections):
        lhs = data.rho_push(bracket(u, v))
        rhs = vector_bracket(data.rho_push(u), data.rho_push(v))
        res = lhs - rhs
        c2.case(res.is_zero(), f"z1={na}, z2={nb}", serialize_graded(res) if res else "")
    checks.append(c2.result())

    # (3) right Leibniz rule with function coefficients
    c3 = CaseCheck("courant-axioms", "axiom-3-leibniz")
    for (ia, (na, u)), (ib, (nb, v)) in itertools.product(
        enumerate(base), enumerate(base)
    ):
        stripe = [
            chart.coordinate((ia + ib) % chart.dim),
            chart.coordinate(ia % chart.dim) * chart.coordinate(ib % chart.dim),
        ]
        for f in stripe:
            fv = [f * c for c in v]
            lhs = bracket(u, fv)
            rhs = [
                data.rho_apply(u, f) * c + f * t
                for c, t in zip(v, pair_cache[(ia, ib)])
            ]
            res = vsub(lhs, rhs)
            c3.case(
                vzero(res),
                f"z1={na}, z2={nb}, f={f}",
                data.section_str(res) if not vzero(res) else "",
            )
    checks.append(c3.result())

    # (4) symmetric part is 2 D<z1,z2>
    c4 = CaseCheck("courant-axioms", "axiom-4-symmetric-part")
    for (na, u), (nb, v) in itertools.combinations_with_replacement(sections, 2):
        sym = [p + q for p, q in zip(bracket(u, v), bracket(v, u))]
        df = data.d_op(data.pairing(u, v))
        res = vsub(sym, [c * chart.integer(2) for c in df])
        c4.case(
            vzero(res),
            f"z1={na}, z2={nb}",
            data.section_str(res) if not vzero(res) else "",
        )
    checks.append(c4.result())

    # (5) D f is central on the left
    c5 = CaseCheck("courant-axioms", "axiom-5-df-central")
    fs = [chart.coordinate(k) for k in range(chart.dim)] + [
        chart.coordinate(0) * chart.coordinate(0)
    ]
    for f in fs:
        df = data.d_op(f)
        for (na, u) in sections:
            res = bracket(df, u)
            c5.case(
                vzero(res),
                f"f={f}, z={na}",
                data.section_str(res) if not vzero(res) else "",
            )
    checks.append(c5.result())

    # (6) anchor differentiates the pairing
    c6 = CaseCheck("courant-axioms", "axiom-6-metric-invariance")
    for (i, j, k) in triple_sources:
        u, v, w = base[i][1], base[j][1], base[k][1]
        lhs = data.rho_apply(u, data.pairing(v, w))
        rhs = data.pairing(pair_cache[(i, j)], w) + data.pairing(v, pair_cache[(i, k)])
        res = lhs - rhs
        c6.case(
            res.is_zero(),
            f"z1={base[i][0]}, z2={base[j][0]}, z3={base[k][0]}",
            str(res) if res else "",
        )
    for (na, u) in multiplied:
        for (jb, (nb, v)), (kc, (nc, w)) in itertools.product(
            enumerate(base), enumerate(base)
        ):
            if (jb + kc) % 3:
                continue
            lhs = data.rho_apply(u, data.pairing(v, w))
            rhs = data.pairing(bracket(u, v), w) + data.pairing(v, bracket(u, w))
            res = lhs - rhs
            c6.case(
                res.is_zero(),
                f"z1={na}, z2={nb}, z3={nc}",
                str(res) if res else "",
            )
    checks.append(c6.result())
    return checks


# -- Dirac structures -----------------------------------------------------------------


def is_dirac(sections, data: CourantData, h=None):
    """Maximal isotropy plus closure of the span under the bracket.

    Sections are GenSections when the data is the chart structure, or raw
    coefficient vectors; returns (bool, checks).
    """
    chart = data.chart
    vecs = []
    for z in sections:
        vecs.append(z.coeffs() if isinstance(z, GenSection) else list(z))
    if linalg.rank(chart, vecs) != len(vecs):
        raise DependentFrame("the given sections are linearly dependent")
    checks = []
    ok_rank = len(vecs) == data.rank // 2
    checks.append(
        CheckResult(
            "courant-axioms",
            "dirac-rank",
            ok_rank,
            "" if ok_rank else f"rank {len(vecs)} != {data.rank // 2}",
        )
    )
    iso = CaseCheck("courant-axioms", "dirac-isotropy")
    for (i, u), (j, v) in itertools.combinations_with_replacement(
        list(enumerate(vecs)), 2
    ):
        p = data.pairing(u, v)
        iso.case(p.is_zero(), f"<s{i}, s{j}>", str(p) if p else "")
    checks.append(iso.result())
    closed = CaseCheck("courant-axioms", "dirac-closure")
    for (i, u), (j, v) in itertools.product(enumerate(vecs), repeat=2):
        br = data.bracket(u, v)
        sol = linalg.in_span(chart, vecs, br)
        closed.case(sol is not None, f"[[s{i}, s{j}]]", data.section_str(br))
    checks.append(closed.result())
    ok = all(c.passed for c in checks)
    return ok, checks
