"""Generalized complex structures and the end-to-end verification suites.

A structure is given either by an orthogonal anti-involution of tangent +
cotangent with vanishing twisted Nijenhuis tensor, or by a pure spinor line
with nondegenerate conjugate pairing whose twisted derivative is a Clifford
multiple of the generator.  The context object builds one presentation
from the other, extracts the eigenframes, equips them with their induced
algebroid structures and half-density module, and the verify_* functions
check the operator identities relating the two differential calculi.
"""

from __future__ import annotations

import itertools

from . import linalg
from .algebroid import (
    HalfDensityModule,
    LieAlgebroidStructure,
    bv_del,
    bv_del_star,
    check_bialgebroid,
    laplacian_compose,
    laplacian_formula,
    lie_derivative_volume,
    modular_vector_field,
    poisson_from_bialgebroid,
    tilde_d_square,
    tilde_del,
    tilde_dirac,
    tilde_dstar,
)
from .courant import (
    CourantData,
    GenSection,
    ambient_frame,
    check_courant_axioms,
    courant_twisted,
    dorfman_twisted,
    double_of_bialgebroid,
    duality_pairing,
    natural_pairing,
    section_to_ambient,
    standard_courant,
)
from .errors import (
    NotClosed,
    NotIntegrable,
    NotPure,
    RankDeficient,
)
from .multivector import (
    GradedElement,
    chart_frames,
    cotangent_frame,
    de_rham_d,
    det_pair,
    interior,
    serialize_graded,
    tangent_frame,
)
from .report import CaseCheck, CheckResult
from .scalars import Chart, ScalarField
from .spinor import (
    SpinorDecomposition,
    Spinor,
    annihilator,
    clifford_act,
    clifford_act_multi,
    d_h,
    mukai,
    transpose,
)
from .multivector import contract


def _identity(chart: Chart, n: int):
    one, zero = chart.one(), chart.zero()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def natural_gram(chart: Chart):
    """Gram matrix of the natural pairing in the ambient frame order."""
    m = chart.dim
    zero, half = chart.zero(), chart.rational(1, 2)
    g = [[zero] * (2 * m) for _ in range(2 * m)]
    for k in range(m):
        g[k][m + k] = half
        g[m + k][k] = half
    return g


def apply_matrix_section(j_rows, z: GenSection) -> GenSection:
    coeffs = z.coeffs()
    out = linalg.mat_vec(j_rows, coeffs, z.chart.zero())
    return GenSection.from_coeffs(z.chart, out)


def j_from_sections(chart: Chart, l_sections) -> list:
    """The real automorphism acting by +i on the span and -i on conjugates."""
    m2 = 2 * chart.dim
    cols = [z.coeffs() for z in l_sections] + [
        z.conjugate().coeffs() for z in l_sections
    ]
    basis = [[cols[c][r] for c in range(m2)] for r in range(m2)]
    basis_inv = linalg.invert(chart, basis)
    if basis_inv is None:
        raise RankDeficient("eigenframe and conjugate do not span")
    i_const = chart.imaginary()
    n = chart.dim
    diag = [i_const] * n + [-i_const] * n
    scaled = [[basis[r][c] * diag[c] for c in range(m2)] for r in range(m2)]
    return linalg.mat_mul(scaled, basis_inv, chart.zero())


def eigenbundle(j_rows, chart: Chart, sign: int):
    """Kernel basis of (J -+ i) over the function field, as sections."""
    return eigenbundle_with_pivots(j_rows, chart, sign)[0]


def eigenbundle_with_pivots(j_rows, chart: Chart, sign: int):
    """Eigenframe plus the elimination pivots (degeneracy report)."""
    i_const = chart.imaginary() if sign > 0 else -chart.imaginary()
    m2 = 2 * chart.dim
    rows = [
        [j_rows[r][c] - (i_const if r == c else chart.zero()) for c in range(m2)]
        for r in range(m2)
    ]
    kernel, pivots = linalg.kernel_basis_with_pivots(chart, rows)
    if len(kernel) != chart.dim:
        raise RankDeficient(
            f"eigenspace rank {len(kernel)} differs from {chart.dim}"
        )
    return [GenSection.from_coeffs(chart, vec) for vec in kernel], pivots


def pure_spinor_of(chart: Chart, l_sections) -> Spinor:
    """Deterministic generator of the line annihilated by the given frame."""
    from .spinor import _spinor_monomials

    tc = cotangent_frame(chart)
    monomials = _spinor_monomials(chart)
    rows = []
    for z in l_sections:
        cols = []
        for idx in monomials:
            cols.append(clifford_act(z, GradedElement.monomial(tc, idx)))
        for mono in monomials:
            rows.append([col.coefficient(mono) for col in cols])
    kernel = linalg.kernel_basis(chart, rows)
    if len(kernel) != 1:
        raise NotPure(f"annihilated line has rank {len(kernel)}, not 1")
    vec = kernel[0]
    scale = None
    for c in vec:
        if not c.is_zero():
            scale = c.inverse()
            break
    terms = [
        (idx, c * scale) for idx, c in zip(monomials, vec) if not c.is_zero()
    ]
    return GradedElement.from_terms(tc, terms)


# -- pipeline context ---------------------------------------------------------------


class GCSContext:
    """Everything the verification suites need, built once per scenario."""

    def __init__(self, chart: Chart, h: GradedElement, u=None, j_rows=None):
        if u is None and j_rows is None:
            raise ValueError("need a pure spinor or an automorphism matrix")
        self.chart = chart
        self.h = h
        dh = de_rham_d(h)
        if not dh.is_zero():
            raise NotClosed(f"twist is not closed: d(H) = {serialize_graded(dh)}")
        from .spinor import annihilator_with_pivots

        if u is not None:
            self.u = u
            l_sections, pivots = annihilator_with_pivots(u)
            self.j_rows = j_from_sections(chart, l_sections)
        else:
            self.j_rows = j_rows
            pointwise = check_gcs_pointwise(j_rows, chart)
            bad = [c for c in pointwise if not c.passed]
            if bad:
                raise NotPure(
                    "automorphism fails pointwise structure checks: "
                    + "; ".join(f"{c.name}: {c.witness}" for c in bad)
                )
            l_sections, pivots = eigenbundle_with_pivots(j_rows, chart, +1)
            self.u = pure_spinor_of(chart, l_sections)
        self.pivot_notes = sorted(
            {str(p) for p in pivots if not p.is_constant()}
        )
        self.dec = SpinorDecomposition(self.u, h, l_sections)
        self.l_alg = self._algebroid_from_frame(
            self.dec.l_frame, self.dec.l_sections, self.dec.lbar_sections, "L"
        )
        self.lbar_alg = self._algebroid_from_frame(
            self.dec.lbar_frame, self.dec.lbar_sections, self.dec.l_sections, "Lbar"
        )
        self.module = HalfDensityModule(
            self.l_alg, self.lbar_alg, self.dec.omega, self.dec.v, self.dec.s_form
        )

    def _algebroid_from_frame(self, frame, sections, dual_sections, tag):
        """Dirac-structure algebroid: anchor by projection, bracket by table."""
        chart = self.chart
        r = len(sections)
        anchor = [
            [sections[a].vector.coefficient((k,)) for k in range(chart.dim)]
            for a in range(r)
        ]
        structure = {}
        for a in range(r):
            for b in range(a + 1, r):
                br = dorfman_twisted(sections[a], sections[b], self.h)
                coeffs = []
                acc = GenSection.zero(chart)
                for c in range(r):
                    coeff = duality_pairing(br, dual_sections[c])
                    coeffs.append(coeff)
                    acc = acc + sections[c].scale(coeff)
                residual = br - acc
                if not residual.is_zero():
                    raise NotIntegrable(
                        f"bracket of {tag} frame sections leaves the eigenspace: "
                        f"[{a},{b}] residual {residual}"
                    )
                structure[(a, b)] = coeffs
        return LieAlgebroidStructure(frame, anchor, structure, tag=tag)

    # -- conveniences ----------------------------------------------------------

    def realize_l(self, el: GradedElement) -> GenSection:
        return self.dec._realize_l(el)

    def realize_lbar(self, el: GradedElement) -> GenSection:
        return self.dec._realize_lbar(el)

    def apply_j(self, z: GenSection) -> GenSection:
        return apply_matrix_section(self.j_rows, z)

    def project_tangent(self, z: GenSection) -> GradedElement:
        return z.vector


def from_pure_spinor(u: Spinor, h: GradedElement) -> GCSContext:
    return GCSContext(u.frame.chart, h, u=u)


# the context realizes the structure type: matrix, twist, and seed spinor
GCStructure = GCSContext


def bialgebroid_of(ctx: GCSContext):
    return ctx.l_alg, ctx.lbar_alg


# -- structure checks -----------------------------------------------------------------


def check_gcs_pointwise(j_rows, chart: Chart):
    """Entrywise checks: real, squares to -1, orthogonal for the pairing."""
    zero = chart.zero()
    m2 = 2 * chart.dim
    checks = []
    real = CaseCheck("validation", "j-real")
    for r in range(m2):
        for c in range(m2):
            d = j_rows[r][c].conjugate() - j_rows[r][c]
            real.case(d.is_zero(), f"entry ({r},{c})", str(d) if d else "")
    checks.append(real.result())
    jj = linalg.mat_mul(j_rows, j_rows, zero)
    sq = CaseCheck("validation", "j-squares-to-minus-one")
    for r in range(m2):
        for c in range(m2):
            want = chart.integer(-1) if r == c else zero
            d = jj[r][c] - want
            sq.case(d.is_zero(), f"entry ({r},{c})", str(d) if d else "")
    checks.append(sq.result())
    g = natural_gram(chart)
    jt = [[j_rows[c][r] for c in range(m2)] for r in range(m2)]
    jtgj = linalg.mat_mul(jt, linalg.mat_mul(g, j_rows, zero), zero)
    orth = CaseCheck("validation", "j-orthogonal")
    for r in range(m2):
        for c in range(m2):
            d = jtgj[r][c] - g[r][c]
            orth.case(d.is_zero(), f"entry ({r},{c})", str(d) if d else "")
    checks.append(orth.result())
    return checks


def _ambient_battery(chart: Chart, degree: int):
    """Constant frame sections plus a deterministic monomial stripe."""
    t, tc = chart_frames(chart)
    base = []
    for k in range(chart.dim):
        base.append((f"@{chart.coordinates[k]}", GenSection.from_vector(
            GradedElement.basis_vector(t, k))))
    for k in range(chart.dim):
        base.append((f"d{chart.coordinates[k]}", GenSection.from_form(
            GradedElement.basis_vector(tc, k))))
    multiplied = []
    for a, (name, z) in enumerate(base):
        monos = []
        if degree >= 1:
            monos.append(chart.coordinate(a % chart.dim))
        if degree >= 2:
            monos.append(
                chart.coordinate(a % chart.dim) * chart.coordinate((a + 1) % chart.dim)
            )
        for mono in monos:
            multiplied.append((f"{mono}*{name}", z.scale(mono)))
    return base, multiplied


def check_gcs(ctx_or_j, h: GradedElement, chart: Chart = None, degree: int = 2):
    """Pointwise checks plus the twisted Nijenhuis battery."""
    if isinstance(ctx_or_j, GCSContext):
        j_rows = ctx_or_j.j_rows
        chart = ctx_or_j.chart
    else:
        j_rows = ctx_or_j
    checks = check_gcs_pointwise(j_rows, chart)
    base, multiplied = _ambient_battery(chart, degree)
    pairs = list(itertools.combinations(range(len(base)), 2))
    nij = CaseCheck("validation", "nijenhuis")

    def n_tensor(z1, z2):
        jz1 = apply_matrix_section(j_rows, z1)
        jz2 = apply_matrix_section(j_rows, z2)
        t1 = courant_twisted(jz1, jz2, h)
        t2 = courant_twisted(jz1, z2, h)
        t3 = courant_twisted(z1, jz2, h)
        t4 = courant_twisted(z1, z2, h)
        return (
            -t1
            + apply_matrix_section(j_rows, t2)
            + apply_matrix_section(j_rows, t3)
            + t4
        )

    for (a, b) in pairs:
        res = n_tensor(base[a][1], base[b][1])
        nij.case(
            res.is_zero(),
            f"z1={base[a][0]}, z2={base[b][0]}",
            str(res) if not res.is_zero() else "",
        )
    for widx, (wname, w) in enumerate(multiplied):
        bidx = widx % len(base)
        res = n_tensor(w, base[bidx][1])
        nij.case(
            res.is_zero(),
            f"z1={wname}, z2={base[bidx][0]}",
            str(res) if not res.is_zero() else "",
        )
    checks.append(nij.result())
    return checks


def check_eigenbundle_consistency(ctx: GCSContext):
    """The annihilator frame is the +i eigenspace and conjugation swaps sides."""
    chart = ctx.chart
    out = []
    eig = CaseCheck("validation", "eigenframe-is-plus-i-eigenspace")
    i_const = chart.imaginary()
    for k, z in enumerate(ctx.dec.l_sections):
        res = ctx.apply_j(z) - z.scale(i_const)
        eig.case(res.is_zero(), f"section {k}", str(res) if not res.is_zero() else "")
    for k, z in enumerate(ctx.dec.lbar_sections):
        res = ctx.apply_j(z) + z.scale(i_const)
        eig.case(
            res.is_zero(), f"dual section {k}", str(res) if not res.is_zero() else ""
        )
    out.append(eig.result())
    dual = CaseCheck("validation", "eigenframe-duality-normalized")
    for a, za in enumerate(ctx.dec.l_sections):
        for b, zb in enumerate(ctx.dec.lbar_sections):
            want = chart.one() if a == b else chart.zero()
            d = duality_pairing(za, zb) - want
            dual.case(d.is_zero(), f"<l{a+1}, m{b+1}>", str(d) if d else "")
    out.append(dual.result())
    return out


# -- spinor identity suite --------------------------------------------------------------


def spinor_identity_checks(ctx: GCSContext, degree: int = 2):
    chart = ctx.chart
    dec = ctx.dec
    tc = cotangent_frame(chart)
    n = dec.n
    checks = []

    battery = _spinor_battery(chart)

    cr = CaseCheck("spinor-identities", "clifford-relation")
    base, multiplied = _ambient_battery(chart, degree)
    for name, z in base + multiplied[: len(base)]:
        for rname, rho in battery[:3]:
            lhs = clifford_act(z, clifford_act(z, rho))
            res = lhs - rho.scale(natural_pairing(z, z))
            cr.case(
                res.is_zero(),
                f"z={name}, rho={rname}",
                serialize_graded(res) if res else "",
            )
    checks.append(cr.result())

    tt = CaseCheck("spinor-identities", "transpose-involution")
    for rname, rho in battery:
        res = transpose(transpose(rho)) - rho
        tt.case(res.is_zero(), f"rho={rname}", serialize_graded(res) if res else "")
    checks.append(tt.result())

    sym = CaseCheck("spinor-identities", "mukai-symmetry")
    sign = chart.integer(-1 if n % 2 else 1)
    for (na, a), (nb, b) in itertools.combinations_with_replacement(battery, 2):
        res = mukai(a, b) - sign * mukai(b, a)
        sym.case(res.is_zero(), f"chi={na}, omega={nb}", str(res) if res else "")
    checks.append(sym.result())

    equi = CaseCheck("spinor-identities", "mukai-two-form-equivariance")
    two_forms = [
        ("dx1^dx2", GradedElement.monomial(tc, (0, 1))),
        (
            "x1*dx1^dx2",
            GradedElement.monomial(tc, (0, 1), chart.coordinate(0)),
        ),
    ]
    if chart.dim >= 4:
        two_forms.append(("dx2^dx4", GradedElement.monomial(tc, (1, 3))))
    for (nf, phi), (na, a), (nb, b) in itertools.product(
        two_forms, battery[:4], battery[:4]
    ):
        res = mukai(phi.wedge(a), b) + mukai(a, phi.wedge(b))
        equi.case(res.is_zero(), f"phi={nf}, chi={na}, omega={nb}", str(res) if res else "")
    checks.append(equi.result())

    # sign law for multivectors acting through the graded basis
    xw = CaseCheck("spinor-identities", "multivector-action-sign-law")
    for i in range(0, dec.rank + 1):
        for j in range(i, dec.rank + 1):
            for xi in itertools.combinations(range(dec.rank), i):
                x_el = GradedElement.monomial(dec.l_frame, xi)
                for wi in itertools.combinations(range(dec.rank), j):
                    w_el = GradedElement.monomial(dec.lbar_frame, wi)
                    lhs = clifford_act_multi(x_el, dec.l_sections, dec.basis[wi])
                    inner = contract(x_el, w_el)
                    rhs = dec.iso_i(inner)
                    if (i * (i - 1) // 2) % 2:
                        rhs = -rhs
                    res = lhs - rhs
                    xw.case(
                        res.is_zero(),
                        f"X=l{list(xi)}, W=m{list(wi)}",
                        serialize_graded(res) if res else "",
                    )
    checks.append(xw.result())

    # graded orthogonality of the pairing
    orth = CaseCheck("spinor-identities", "graded-pairing-orthogonality")
    nondeg = CaseCheck("spinor-identities", "graded-pairing-nondegenerate")
    subsets = dec.subset_order
    for ia in subsets:
        for ib in subsets:
            p = mukai(dec.basis[ia], dec.basis[ib])
            if len(ia) + len(ib) != dec.rank:
                orth.case(
                    p.is_zero(),
                    f"I={list(ia)}, K={list(ib)}",
                    str(p) if p else "",
                )
    checks.append(orth.result())
    for k in range(dec.rank + 1):
        rows_idx = [s for s in subsets if len(s) == k]
        cols_idx = [s for s in subsets if len(s) == dec.rank - k]
        mat = [
            [mukai(dec.basis[ia], dec.basis[ib]) for ib in cols_idx]
            for ia in rows_idx
        ]
        ok = linalg.invert(chart, mat) is not None
        nondeg.case(ok, f"degree {k} against degree {dec.rank - k}")
    checks.append(nondeg.result())

    # the twisted differential splits into the two adjacent projections
    split = CaseCheck("spinor-identities", "dh-splits-into-adjacent-pieces")
    for idx in subsets:
        k = len(idx)
        try:
            lower, upper = dec.partial_ops(dec.basis[idx], k)
        except Exception as exc:  # LeakageOutsideAdjacent carries the witness
            split.case(False, f"basis m{list(idx)}", str(exc))
            continue
        res = d_h(dec.basis[idx], ctx.h) - lower - upper
        split.case(
            res.is_zero(), f"basis m{list(idx)}", serialize_graded(res) if res else ""
        )
    checks.append(split.result())
    return checks


def _spinor_battery(chart: Chart):
    """Deterministic mixed-degree spinors exercising all degrees."""
    tc = cotangent_frame(chart)
    x = [chart.coordinate(k) for k in range(chart.dim)]
    i_const = chart.imaginary()
    out = [
        ("1", GradedElement.from_scalar(tc, chart.one())),
        ("x1+i*dx1", GradedElement.from_scalar(tc, x[0])
         + GradedElement.monomial(tc, (0,), i_const)),
        ("dx2+x2*dx1^dx2", GradedElement.monomial(tc, (1,))
         + GradedElement.monomial(tc, (0, 1), x[1])),
        ("top", GradedElement.monomial(tc, tuple(range(chart.dim)), x[0] + i_const)),
        ("mixed", GradedElement.from_scalar(tc, chart.one())
         + GradedElement.monomial(tc, (0,), x[1] * x[1])
         + GradedElement.monomial(tc, tuple(range(chart.dim)), i_const * x[0])),
    ]
    if chart.dim >= 4:
        out.append(
            ("dx1^dx3+i*dx2^dx3^dx4",
             GradedElement.monomial(tc, (0, 2))
             + GradedElement.monomial(tc, (1, 2, 3), i_const))
        )
    return out


# -- bialgebroid suite ---------------------------------------------------------------


def bialgebroid_checks(ctx: GCSContext, degree: int = 2):
    checks = check_bialgebroid(ctx.l_alg, ctx.lbar_alg, degree)

    # the double against the twisted bracket, frame by frame
    chart = ctx.chart
    double = double_of_bialgebroid(ctx.l_alg, ctx.lbar_alg)
    sections = ctx.dec.l_sections + ctx.dec.lbar_sections
    match = CaseCheck("bialgebroid", "double-matches-twisted-bracket")
    r = ctx.dec.rank
    zero = chart.zero()
    for a in range(2 * r):
        for b in range(2 * r):
            ua = [chart.one() if j == a else zero for j in range(2 * r)]
            ub = [chart.one() if j == b else zero for j in range(2 * r)]
            via_table = double.bracket(ua, ub)
            direct = dorfman_twisted(sections[a], sections[b], ctx.h)
            acc = GenSection.zero(chart)
            for c, coeff in enumerate(via_table):
                if not coeff.is_zero():
                    acc = acc + sections[c].scale(coeff)
            res = direct - acc
            match.case(
                res.is_zero(),
                f"[{double.labels[a]}, {double.labels[b]}]",
                str(res) if not res.is_zero() else "",
            )
    checks.append(match.result())

    checks.extend(
        _relabel(check_courant_axioms(double, degree=1), "bialgebroid", "double-")
    )

    # the squared odd operator is multiplication by zero
    f_common, witness = tilde_d_square(ctx.module)
    ok = witness is None and f_common is not None and f_common.is_zero()
    checks.append(
        CheckResult(
            "bialgebroid",
            "generating-operator-squares-to-zero",
            ok,
            witness or ("" if ok else f"square is {f_common}"),
        )
    )
    return checks


def _relabel(checks, suite, prefix):
    out = []
    for c in checks:
        out.append(CheckResult(suite, prefix + c.name, c.passed, c.witness, c.detail))
    return out


# -- main theorem suite ------------------------------------------------------------------


def _multiplier_stripe(chart: Chart, salt: int, degree: int):
    out = [chart.one()]
    if degree >= 1:
        out.append(chart.coordinate(salt % chart.dim))
    if degree >= 2:
        out.append(
            chart.coordinate(salt % chart.dim)
            * chart.coordinate((salt + 1) % chart.dim)
        )
    return out


def verify_main_theorem(ctx: GCSContext, max_degree: int = 2):
    """Commutation of the two squares relating the module operators to the
    graded projections of the twisted differential."""
    dec = ctx.dec
    chart = ctx.chart
    checks = []
    diag1 = CaseCheck("main-theorem", "diagram-raising")
    diag2 = CaseCheck("main-theorem", "diagram-lowering")
    leak = CaseCheck("main-theorem", "no-leakage")
    for j in range(0, min(max_degree, dec.rank) + 1):
        for idx in itertools.combinations(range(dec.rank), j):
            for salt, mult in enumerate(_multiplier_stripe(chart, sum(idx) + j, 2)):
                x_el = GradedElement.monomial(dec.l_frame, idx, mult)
                label = f"X={mult}*l{list(idx)}"
                image = dec.iso_ibar(x_el)
                dh_image = d_h(image, ctx.h)
                pieces = dec.nk_decompose(dh_image)
                target_raise = dec.nbar_index(j + 1)
                target_lower = dec.nbar_index(j - 1)
                ok_leak = all(
                    piece.is_zero()
                    for deg, piece in enumerate(pieces)
                    if deg not in (target_raise, target_lower)
                )
                leak.case(ok_leak, label)
                lhs1 = dec.iso_ibar(tilde_dstar(x_el, ctx.module))
                rhs1 = (
                    pieces[target_raise]
                    if 0 <= target_raise <= dec.rank
                    else GradedElement.zero(image.frame)
                )
                res1 = lhs1 - rhs1
                diag1.case(
                    res1.is_zero(), label, serialize_graded(res1) if res1 else ""
                )
                lhs2 = dec.iso_ibar(tilde_del(x_el, ctx.module))
                rhs2 = (
                    pieces[target_lower]
                    if 0 <= target_lower <= dec.rank
                    else GradedElement.zero(image.frame)
                )
                res2 = lhs2 - rhs2
                diag2.case(
                    res2.is_zero(), label, serialize_graded(res2) if res2 else ""
                )
    checks.extend([diag1.result(), diag2.result(), leak.result()])
    return checks


# -- modular cocycle suite ---------------------------------------------------------------


def verify_modular_prop(ctx: GCSContext):
    """The module's modular cocycles are twice the integrability sections."""
    dec = ctx.dec
    checks = []
    two = ctx.chart.integer(2)
    res_xi = ctx.module.xi0 - dec.e_element.scale(two)
    checks.append(
        CheckResult(
            "modular-prop",
            "cocycle-of-eigenframe-is-2e",
            res_xi.is_zero(),
            serialize_graded(res_xi) if res_xi else "",
        )
    )
    res_x0 = ctx.module.x0 - dec.ebar_element.scale(two)
    checks.append(
        CheckResult(
            "modular-prop",
            "cocycle-of-conjugate-frame-is-2e-conjugate",
            res_x0.is_zero(),
            serialize_graded(res_x0) if res_x0 else "",
        )
    )
    # rescaling the volume shifts the cocycle by the exact logarithmic term
    chart = ctx.chart
    g = chart.one() + chart.coordinate(0) * chart.coordinate(0)
    from .algebroid import modular_cocycle

    scaled = dec.s_form.scale(g)
    x0_g, xi0_g = modular_cocycle(
        ctx.l_alg, ctx.lbar_alg, dec.omega, dec.v, scaled
    )
    shift = xi0_g - ctx.module.xi0
    dlog_terms = []
    for b in range(dec.rank):
        c = ctx.l_alg.anchor_apply_index(b, g) / g
        if not c.is_zero():
            dlog_terms.append(((b,), c))
    dlog = GradedElement.from_terms(dec.lbar_frame, dlog_terms)
    res_shift = shift - dlog
    checks.append(
        CheckResult(
            "modular-prop",
            "volume-rescaling-shifts-by-dlog",
            res_shift.is_zero(),
            serialize_graded(res_shift) if res_shift else "",
        )
    )
    return checks


# -- module structure suite ---------------------------------------------------------------


def verify_module_structures(ctx: GCSContext):
    """Derivative action on the conjugate line against the half-density action."""
    dec = ctx.dec
    chart = ctx.chart
    checks = []
    del_ubar = dec.project(d_h(dec.ubar, ctx.h), dec.rank - 1)
    pairing_route = CaseCheck("module-structures", "frame-action-is-pairing")
    elw_route = CaseCheck("module-structures", "action-matches-half-density-action")
    test_functions = [
        ("1", chart.one()),
        ("x1", chart.coordinate(0)),
        ("1+x1^2", chart.one() + chart.coordinate(0) * chart.coordinate(0)),
    ]
    for a in range(dec.rank):
        w = dec.lbar_sections[a]
        w_el = GradedElement.basis_vector(dec.lbar_frame, a)
        lhs = clifford_act(w, del_ubar)
        rhs = dec.ubar.scale(duality_pairing(dec.ebar_section, w))
        res = lhs - rhs
        pairing_route.case(
            res.is_zero(), f"W=m{a+1}", serialize_graded(res) if res else ""
        )
        for fname, g in test_functions:
            spinor_side = clifford_act(w, d_h(dec.ubar.scale(g), ctx.h))
            module_side = dec.ubar.scale(ctx.module.dual_action(w_el, g))
            res2 = spinor_side - module_side
            elw_route.case(
                res2.is_zero(),
                f"W=m{a+1}, g={fname}",
                serialize_graded(res2) if res2 else "",
            )
    checks.extend([pairing_route.result(), elw_route.result()])
    return checks


# -- corollary suite ---------------------------------------------------------------


def verify_corollaries(ctx: GCSContext, max_degree: int = 3):
    dec = ctx.dec
    chart = ctx.chart
    module = ctx.module
    checks = []
    i_const = chart.imaginary()
    half = chart.rational(1, 2)

    # (a) the generating operator is the twisted differential
    ident = CaseCheck("corollaries", "generating-operator-is-twisted-differential")
    for k in range(dec.rank + 1):
        for idx in itertools.combinations(range(dec.rank), k):
            for mult in _multiplier_stripe(chart, sum(idx), 1):
                x_el = GradedElement.monomial(dec.l_frame, idx, mult)
                lhs = dec.iso_ibar(tilde_dirac(x_el, module))
                rhs = d_h(dec.iso_ibar(x_el), ctx.h)
                res = lhs - rhs
                ident.case(
                    res.is_zero(),
                    f"X={mult}*l{list(idx)}",
                    serialize_graded(res) if res else "",
                )
    checks.append(ident.result())
    f_common, witness = tilde_d_square(module)
    ok = witness is None and f_common is not None and f_common.is_zero()
    checks.append(
        CheckResult(
            "corollaries",
            "generating-operator-square-zero",
            ok,
            witness or ("" if ok else f"square is {f_common}"),
        )
    )

    # (b) Laplacians: composition equals the modular formula
    lap = CaseCheck("corollaries", "laplacian-composition-equals-formula")
    cap = min(max_degree, dec.rank)
    for k in range(cap + 1):
        for idx in itertools.combinations(range(dec.rank), k):
            x_el = GradedElement.monomial(dec.l_frame, idx)
            lhs = laplacian_compose(
                x_el, ctx.l_alg, ctx.lbar_alg, dec.omega, dec.v, side="A"
            )
            rhs = laplacian_formula(x_el, module, side="A")
            res = lhs - rhs
            lap.case(
                res.is_zero(), f"side=A, X=l{list(idx)}",
                serialize_graded(res) if res else "",
            )
            w_el = GradedElement.monomial(dec.lbar_frame, idx)
            lhs2 = laplacian_compose(
                w_el, ctx.l_alg, ctx.lbar_alg, dec.omega, dec.v, side="Astar"
            )
            rhs2 = laplacian_formula(w_el, module, side="Astar")
            res2 = lhs2 - rhs2
            lap.case(
                res2.is_zero(), f"side=A*, W=m{list(idx)}",
                serialize_graded(res2) if res2 else "",
            )
    checks.append(lap.result())

    # function Laplacian: both sides, printed form and cocycle form
    e_plus = dec.e_section + dec.ebar_section
    lapf = CaseCheck("corollaries", "laplacian-on-functions")
    for k in range(chart.dim):
        f = chart.coordinate(k)
        via_a = laplacian_compose(
            GradedElement.from_scalar(dec.l_frame, f),
            ctx.l_alg, ctx.lbar_alg, dec.omega, dec.v, side="A",
        )
        via_astar = laplacian_compose(
            GradedElement.from_scalar(dec.lbar_frame, f),
            ctx.l_alg, ctx.lbar_alg, dec.omega, dec.v, side="Astar",
        )
        lhs = via_a.coefficient(())
        agree = lhs - via_astar.coefficient(())
        lapf.case(agree.is_zero(), f"delta f = delta* f, f={f}", str(agree) if agree else "")
        from .multivector import apply_vector

        printed = apply_vector(e_plus.vector, f) * half
        res_printed = lhs - printed
        lapf.case(
            res_printed.is_zero(),
            f"printed half-projection form, f={f}",
            str(res_printed) if res_printed else "",
        )
        cocycle_form = (
            ctx.l_alg.anchor_apply(module.x0, f)
            + ctx.lbar_alg.anchor_apply(module.xi0, f)
        ) * half
        res_c = lhs - cocycle_form
        lapf.case(
            res_c.is_zero(),
            f"cocycle form, f={f}",
            str(res_c) if res_c else "",
        )
    checks.append(lapf.result())

    # degree-1 Laplacian formulas through the twisted bracket and J
    lap1 = CaseCheck("corollaries", "laplacian-degree-one-bracket-form")
    e_sec, ebar_sec = dec.e_section, dec.ebar_section
    for a in range(dec.rank):
        x_sec = dec.l_sections[a]
        x_el = GradedElement.basis_vector(dec.l_frame, a)
        lhs = ctx.realize_l(
            laplacian_compose(x_el, ctx.l_alg, ctx.lbar_alg, dec.omega, dec.v, "A")
        )
        via = dorfman_twisted(ebar_sec + e_sec.scale(half), x_sec, ctx.h)
        correction = ctx.apply_j(dorfman_twisted(e_sec, x_sec, ctx.h))
        rhs = via - correction.scale(i_const * half)
        res = lhs - rhs
        lap1.case(res.is_zero(), f"X=l{a+1}", str(res) if not res.is_zero() else "")
        w_sec = dec.lbar_sections[a]
        w_el = GradedElement.basis_vector(dec.lbar_frame, a)
        lhs2 = ctx.realize_lbar(
            laplacian_compose(w_el, ctx.l_alg, ctx.lbar_alg, dec.omega, dec.v, "Astar")
        )
        via2 = dorfman_twisted(e_sec + ebar_sec.scale(half), w_sec, ctx.h)
        correction2 = ctx.apply_j(dorfman_twisted(ebar_sec, w_sec, ctx.h))
        rhs2 = via2 + correction2.scale(i_const * half)
        res2 = lhs2 - rhs2
        lap1.case(res2.is_zero(), f"W=m{a+1}", str(res2) if not res2.is_zero() else "")
    checks.append(lap1.result())

    # (c) the bialgebroid bivector against the structure bivector
    pi_rows = poisson_from_bialgebroid(ctx.l_alg, ctx.lbar_alg)
    p_rows = _structure_bivector(ctx)
    kappa = None
    prop = CaseCheck("corollaries", "bivector-proportional-to-structure-bivector")
    real = CaseCheck("corollaries", "minus-i-bivector-real")
    for k in range(chart.dim):
        for l in range(chart.dim):
            val = pi_rows[k][l] * (-i_const)
            d = val.conjugate() - val
            real.case(d.is_zero(), f"entry ({k},{l})", str(d) if d else "")
            if kappa is None and not p_rows[k][l].is_zero():
                kappa = pi_rows[k][l] / p_rows[k][l]
    if kappa is None:
        prop.case(
            all(
                pi_rows[k][l].is_zero()
                for k in range(chart.dim)
                for l in range(chart.dim)
            ),
            "both bivectors vanish",
        )
    else:
        for k in range(chart.dim):
            for l in range(chart.dim):
                res = pi_rows[k][l] - kappa * p_rows[k][l]
                prop.case(
                    res.is_zero(), f"entry ({k},{l})", str(res) if res else ""
                )
        prop.detail = f"measured constant: {kappa}"
    checks.append(prop.result())
    checks.append(real.result())

    # (d) modular vector fields
    x_pi = modular_vector_field(pi_rows, dec.s_form)
    x_p = modular_vector_field(p_rows, dec.s_form)
    apush = ctx.l_alg.anchor_push(module.x0)
    aspush = ctx.lbar_alg.anchor_push(module.xi0)
    lemma_rhs = (aspush - apush).scale(half)
    res_lemma = x_pi - lemma_rhs
    checks.append(
        CheckResult(
            "corollaries",
            "modular-field-of-bivector-from-cocycles",
            res_lemma.is_zero(),
            serialize_graded(res_lemma) if res_lemma else "",
        )
    )
    res_cor = x_p - lemma_rhs.scale(i_const)
    checks.append(
        CheckResult(
            "corollaries",
            "modular-field-of-structure-bivector-cocycle-form",
            res_cor.is_zero(),
            serialize_graded(res_cor) if res_cor else "",
            detail="asserts X_s(P) = (i/2)(anchor*(xi0) - anchor(x0))",
        )
    )
    e_minus = (dec.e_section - dec.ebar_section).vector
    measured = _proportionality_note(chart, x_p, e_minus)
    checks.append(
        CheckResult(
            "corollaries",
            "modular-field-against-half-projection",
            True,
            "",
            detail=(
                "X_s(P) = c * pr_T(e - conj e) with measured c = "
                f"{measured}" if measured is not None else
                "pr_T(e - conj e) = 0 on this example"
            ),
        )
    )
    return checks


def _structure_bivector(ctx: GCSContext):
    """Matrix of xi -> half the tangent part of J(xi) on coordinate forms."""
    chart = ctx.chart
    m = chart.dim
    half = chart.rational(1, 2)
    rows = []
    for k in range(m):
        col = [chart.zero()] * (2 * m)
        col[m + k] = chart.one()
        image = linalg.mat_vec(ctx.j_rows, col, chart.zero())
        rows.append([image[l] * half for l in range(m)])
    return rows


def _proportionality_note(chart: Chart, lhs: GradedElement, rhs: GradedElement):
    """The constant c with lhs = c * rhs, when both are proportional; None if
    rhs vanishes."""
    if rhs.is_zero():
        return None
    for idx, c in rhs.components.items():
        l = lhs.components.get(idx)
        if l is None:
            continue
        ratio = l / c
        if (lhs - rhs.scale(ratio)).is_zero():
            return ratio
    return "no single constant"
