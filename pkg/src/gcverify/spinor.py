"""The Clifford module of differential forms over an even chart.

Spinors are mixed-degree forms; generalized sections act by contraction
plus wedge.  This module carries the transpose, the Mukai pairing, the
twisted differential, pure-spinor machinery (annihilator, the top section
solving V . conj(u) = u, the unique section with d_H u = e . u), the graded
decomposition generated by the conjugate eigenframe, and the isomorphisms
between multivectors tensored with the spinor line and the graded pieces.
"""

from __future__ import annotations

import itertools

from . import linalg
from .courant import GenSection, duality_pairing, natural_pairing
from .errors import (
    ChartMismatch,
    DegeneratePairing,
    LeakageOutsideAdjacent,
    NotClosed,
    NotIntegrable,
    NotPure,
    OddDimension,
    RankDeficient,
    SingularBasis,
)
from .multivector import (
    Frame,
    GradedElement,
    chart_frames,
    cotangent_frame,
    de_rham_d,
    det_pair,
    interior,
    serialize_graded,
    tangent_frame,
)
from .scalars import Chart, ScalarField

Spinor = GradedElement  # mixed-degree element over the cotangent chart frame


def clifford_act(z: GenSection, rho: Spinor) -> Spinor:
    """(x + eta) . rho = contraction by x plus wedge by eta."""
    if z.chart != rho.frame.chart:
        raise ChartMismatch("section and spinor live over different charts")
    out = GradedElement.zero(rho.frame)
    if not z.vector.is_zero():
        out = out + interior(z.vector, rho)
    if not z.form.is_zero():
        out = out + z.form.wedge(rho)
    return out


def clifford_act_multi(w: GradedElement, sections, rho: Spinor) -> Spinor:
    """Left-to-right action: (z1^...^zk) . rho = z1.(z2.(... zk.rho))."""
    out = GradedElement.zero(rho.frame)
    for idx, c in w.components.items():
        acc = rho.scale(c)
        for a in reversed(idx):
            acc = clifford_act(sections[a], acc)
            if acc.is_zero():
                break
        out = out + acc
    return out


def transpose(chi: Spinor) -> Spinor:
    """Degree-j part picks up the reversal sign (-1)^(j(j-1)/2)."""
    out = {}
    for idx, c in chi.components.items():
        j = len(idx)
        if (j * (j - 1) // 2) % 2:
            out[idx] = -c
        else:
            out[idx] = c
    return GradedElement(chi.frame, out)


def mukai(chi: Spinor, omega: Spinor) -> ScalarField:
    """Coefficient of the top form in transpose(chi) ^ omega.

    Computed through the transpose and through the expanded alternating
    sum; the two must agree (internal consistency guard).
    """
    chart = chi.frame.chart
    if chart.dim % 2:
        raise OddDimension("the spinor pairing needs an even-dimensional chart")
    top = tuple(range(chart.dim))
    via_transpose = transpose(chi).wedge(omega).coefficient(top)
    total = chart.zero()
    n2 = chart.dim
    for idx, c in chi.components.items():
        i = len(idx)
        sign = -1 if ((i * (i - 1) // 2) % 2) else 1
        partner = GradedElement.monomial(chi.frame, idx, c if sign > 0 else -c)
        total = total + partner.wedge(omega.degree_part(n2 - i)).coefficient(top)
    if total != via_transpose:
        raise SingularBasis("internal: the two pairing routes disagree")
    return via_transpose


def d_h(rho: Spinor, h: GradedElement) -> Spinor:
    """Twisted differential: exterior derivative plus wedge by the 3-form."""
    dh = de_rham_d(h)
    if not dh.is_zero():
        raise NotClosed(f"3-form is not closed: d(H) = {serialize_graded(dh)}")
    out = de_rham_d(rho)
    if not h.is_zero():
        out = out + h.wedge(rho)
    return out


# -- pure spinors ---------------------------------------------------------------


def annihilator(u: Spinor):
    """Basis of the generalized sections killing u; checks purity.

    Returns a list of GenSections of length chart.dim; raises NotPure when
    the solution space has wrong rank or is not isotropic.
    """
    return annihilator_with_pivots(u)[0]


def annihilator_with_pivots(u: Spinor):
    """Annihilator basis plus the elimination pivots (degeneracy report)."""
    chart = u.frame.chart
    if u.is_zero():
        raise NotPure("the zero spinor has no annihilator line")
    t, tc = chart_frames(chart)
    m = chart.dim
    monomials = _spinor_monomials(chart)
    columns = []
    for k in range(m):
        columns.append(clifford_act(GenSection.from_vector(GradedElement.basis_vector(t, k)), u))
    for k in range(m):
        columns.append(clifford_act(GenSection.from_form(GradedElement.basis_vector(tc, k)), u))
    rows = []
    for mono in monomials:
        rows.append([col.coefficient(mono) for col in columns])
    kernel, pivots = linalg.kernel_basis_with_pivots(chart, rows)
    if len(kernel) != m:
        raise NotPure(f"annihilator rank {len(kernel)} differs from {m}")
    sections = [GenSection.from_coeffs(chart, vec) for vec in kernel]
    for za, zb in itertools.combinations_with_replacement(sections, 2):
        p = natural_pairing(za, zb)
        if not p.is_zero():
            raise NotPure(f"annihilator is not isotropic: pairing {p}")
    return sections, pivots


def _spinor_monomials(chart: Chart):
    out = []
    for k in range(chart.dim + 1):
        out.extend(itertools.combinations(range(chart.dim), k))
    return out


def spinor_coeffs(rho: Spinor, monomials):
    return [rho.coefficient(mono) for mono in monomials]


def biorthogonal_dual_sections(chart: Chart, sections):
    """Sections of the conjugate space dual to the given isotropic frame.

    Returns (dual_sections, gram) where gram[a][b] is the duality pairing
    of section a against the conjugate of section b.
    """
    conj = [z.conjugate() for z in sections]
    n = len(sections)
    gram = [[duality_pairing(sections[a], conj[b]) for b in range(n)] for a in range(n)]
    ginv = linalg.invert(chart, gram)
    if ginv is None:
        raise RankDeficient("eigenframe duality pairing is degenerate")
    dual = []
    for b in range(n):
        acc = GenSection.zero(chart)
        for a in range(n):
            c = ginv[a][b]
            if not c.is_zero():
                acc = acc + conj[a].scale(c)
        dual.append(acc)
    return dual, gram


class SpinorDecomposition:
    """A pure spinor, its eigenframes, and the graded pieces they generate.

    Built from the spinor u, the closed twist h, and a frame of its
    annihilator; derives the biorthogonal conjugate frame, the graded basis
    (frame monomials acting on u), the normalized top sections, and the
    unique section with d_H u = e . u.
    """

    def __init__(self, u: Spinor, h: GradedElement, l_sections):
        chart = u.frame.chart
        if chart.dim % 2:
            raise OddDimension("decompositions need an even-dimensional chart")
        self.chart = chart
        self.n = chart.dim // 2
        self.rank = chart.dim
        self.u = u
        self.h = h
        self.ubar = u.conjugate()
        self.l_sections = list(l_sections)
        if len(self.l_sections) != self.rank:
            raise RankDeficient(
                f"expected {self.rank} frame sections, got {len(self.l_sections)}"
            )

        self.mukai_uubar = mukai(u, self.ubar)
        if self.mukai_uubar.is_zero():
            raise DegeneratePairing("the pairing of u against its conjugate vanishes")
        top = tuple(range(chart.dim))
        self.s_form = GradedElement.monomial(cotangent_frame(chart), top, self.mukai_uubar)

        # transversality: the frame and its conjugate span everything
        stacked = [z.coeffs() for z in self.l_sections]
        stacked += [z.conjugate().coeffs() for z in self.l_sections]
        if linalg.rank(chart, stacked) != 2 * self.rank:
            raise NotPure("the eigenframe meets its conjugate nontrivially")

        self.lbar_sections, self.gram = biorthogonal_dual_sections(
            chart, self.l_sections
        )
        self.l_frame, self.lbar_frame = Frame.abstract_pair(
            chart,
            [f"l{k + 1}" for k in range(self.rank)],
            [f"m{k + 1}" for k in range(self.rank)],
            tag="L",
        )

        # conjugation rows between the two abstract frames
        self.conj_l_rows = [
            self._expand_in_lbar(z.conjugate()) for z in self.l_sections
        ]
        self.conj_lbar_rows = [
            self._expand_in_l(z.conjugate()) for z in self.lbar_sections
        ]

        # graded basis: frame monomials of the conjugate frame acting on u
        self.monomials = _spinor_monomials(chart)
        self.subset_order = self.monomials  # same ordering for both sides
        self.basis = {}
        for idx in self.subset_order:
            w = GradedElement.monomial(self.lbar_frame, idx)
            self.basis[idx] = clifford_act_multi(w, self.lbar_sections, u)
        matrix_rows = []
        for mono in self.monomials:
            matrix_rows.append(
                [self.basis[idx].coefficient(mono) for idx in self.subset_order]
            )
        try:
            self._solver = linalg.SolveCache(chart, matrix_rows)
        except SingularBasis as exc:
            raise SingularBasis(f"graded basis is singular: {exc}") from exc

        self.v = self._find_v()
        self.vbar = self._conjugate_l_top(self.v)
        sign = chart.integer(-1 if self.n % 2 else 1)
        self.omega = self.vbar.scale(sign)
        if det_pair(self.omega, self.v) != chart.one():
            raise SingularBasis("internal: <Omega, V> failed to normalize to 1")
        if det_pair(self.vbar, self.v) != sign:
            raise SingularBasis("internal: <V, conj V> != (-1)^n")

        self.e_element, self.e_section = self._find_e()
        self.ebar_section = self.e_section.conjugate()
        self.ebar_element = self._expand_in_l(self.ebar_section)

    # -- frame expansions ----------------------------------------------------

    def _expand_in_l(self, z: GenSection) -> GradedElement:
        """Expansion of a section of the eigenspace over the L frame."""
        terms = []
        for b in range(self.rank):
            c = duality_pairing(z, self.lbar_sections[b])
            if not c.is_zero():
                terms.append(((b,), c))
        out = GradedElement.from_terms(self.l_frame, terms)
        residual = self._realize_l(out) - z
        if not residual.is_zero():
            raise RankDeficient(
                "section does not lie in the eigenspace: residual "
                f"{residual}"
            )
        return out

    def _expand_in_lbar(self, z: GenSection) -> GradedElement:
        terms = []
        for b in range(self.rank):
            c = duality_pairing(z, self.l_sections[b])
            if not c.is_zero():
                terms.append(((b,), c))
        out = GradedElement.from_terms(self.lbar_frame, terms)
        residual = self._realize_lbar(out) - z
        if not residual.is_zero():
            raise RankDeficient(
                "section does not lie in the conjugate eigenspace: residual "
                f"{residual}"
            )
        return out

    def _realize_l(self, el: GradedElement) -> GenSection:
        acc = GenSection.zero(self.chart)
        for (b,), c in el.components.items():
            acc = acc + self.l_sections[b].scale(c)
        return acc

    def _realize_lbar(self, el: GradedElement) -> GenSection:
        acc = GenSection.zero(self.chart)
        for (b,), c in el.components.items():
            acc = acc + self.lbar_sections[b].scale(c)
        return acc

    def _conjugate_l_top(self, v: GradedElement) -> GradedElement:
        """Conjugate of a top element of the L side, over the conjugate frame."""
        out = GradedElement.zero(self.lbar_frame)
        for idx, c in v.components.items():
            piece = GradedElement.from_scalar(self.lbar_frame, c.conjugate())
            for a in idx:
                piece = piece.wedge(self.conj_l_rows[a])
                if piece.is_zero():
                    break
            out = out + piece
        return out

    # -- normalized top sections ------------------------------------------------

    def _find_v(self) -> GradedElement:
        top = tuple(range(self.rank))
        w = GradedElement.monomial(self.l_frame, top)
        image = clifford_act_multi(w, self.l_sections, self.ubar)
        lam = self._proportionality(image, self.u)
        if lam is None or lam.is_zero():
            raise DegeneratePairing("top action on the conjugate spinor is degenerate")
        return GradedElement.monomial(self.l_frame, top, lam.inverse())

    def _proportionality(self, image: Spinor, target: Spinor):
        """The scalar lam with image = lam * target, or None."""
        lam = None
        for mono in self.monomials:
            t = target.coefficient(mono)
            if not t.is_zero():
                lam = image.coefficient(mono) / t
                break
        if lam is None:
            return None
        if image - target.scale(lam):
            return None
        return lam

    def _find_e(self):
        rhs_spinor = d_h(self.u, self.h)
        rhs = spinor_coeffs(rhs_spinor, self.monomials)
        cols = [
            spinor_coeffs(self.basis[(b,)], self.monomials) for b in range(self.rank)
        ]
        rows = [list(r) for r in zip(*cols)]
        sol = linalg.solve(self.chart, rows, rhs)
        if sol is None:
            raise NotIntegrable(
                "d_H u is not in the degree-1 graded piece; the structure is "
                "not integrable"
            )
        terms = [((b,), c) for b, c in enumerate(sol) if not c.is_zero()]
        element = GradedElement.from_terms(self.lbar_frame, terms)
        section = self._realize_lbar(element)
        return element, section

    # -- graded pieces -----------------------------------------------------------

    def nk_decompose(self, rho: Spinor):
        """Components of rho along the graded pieces, degree 0..2n."""
        sol = self._solver.solve(spinor_coeffs(rho, self.monomials))
        pieces = [GradedElement.zero(rho.frame) for _ in range(self.rank + 1)]
        for coeff, idx in zip(sol, self.subset_order):
            if coeff.is_zero():
                continue
            pieces[len(idx)] = pieces[len(idx)] + self.basis[idx].scale(coeff)
        return pieces

    def project(self, rho: Spinor, k: int) -> Spinor:
        if not 0 <= k <= self.rank:
            return GradedElement.zero(rho.frame)
        return self.nk_decompose(rho)[k]

    def partial_ops(self, n_k: Spinor, k: int):
        """(lowering, raising) components of d_H on a degree-k piece.

        Raises when the derivative leaks outside the two adjacent pieces,
        which signals non-integrability.
        """
        image = d_h(n_k, self.h)
        pieces = self.nk_decompose(image)
        for j, piece in enumerate(pieces):
            if j in (k - 1, k + 1):
                continue
            if not piece.is_zero():
                raise LeakageOutsideAdjacent(
                    f"derivative of a degree-{k} piece has a degree-{j} component: "
                    f"{serialize_graded(piece)}"
                )
        lower = pieces[k - 1] if k >= 1 else GradedElement.zero(n_k.frame)
        upper = pieces[k + 1] if k + 1 <= self.rank else GradedElement.zero(n_k.frame)
        return lower, upper

    def del_op(self, rho: Spinor, k: int) -> Spinor:
        return self.partial_ops(rho, k)[0]

    def delbar_op(self, rho: Spinor, k: int) -> Spinor:
        return self.partial_ops(rho, k)[1]

    # -- isomorphisms ------------------------------------------------------------

    def iso_i(self, w: GradedElement) -> Spinor:
        """Multivectors over the conjugate frame tensor u, onto graded pieces."""
        if w.frame != self.lbar_frame:
            raise RankDeficient("iso_i expects an element over the conjugate frame")
        out = GradedElement.zero(self.u.frame)
        for idx, c in w.components.items():
            out = out + self.basis[idx].scale(c)
        return out

    def iso_ibar(self, x: GradedElement) -> Spinor:
        """Multivectors over the eigenframe tensor conj(u), onto graded pieces."""
        if x.frame != self.l_frame:
            raise RankDeficient("iso_ibar expects an element over the eigenframe")
        return clifford_act_multi(x, self.l_sections, self.ubar)

    def nbar_index(self, k: int) -> int:
        """Graded index of the k-th conjugate piece: 2n - k."""
        return self.rank - k


def find_v(dec: SpinorDecomposition) -> GradedElement:
    return dec.v


def find_e(dec: SpinorDecomposition):
    return dec.e_element, dec.e_section


def canonical_iso(dec: SpinorDecomposition, omega1: Spinor, omega2: Spinor):
    """Image of a pair of top-piece spinors in the squared half-density line.

    Returned as (ambient expansion of the top dual section, pairing scalar);
    the tensor is their product, compared via ambient_product().
    """
    scalar = mukai(clifford_act_multi(dec.v, dec.l_sections, omega1), omega2)
    return dec.omega, scalar


def ambient_product(dec: SpinorDecomposition, omega_el: GradedElement, scalar):
    """Expand a top element over the conjugate frame into ambient coordinates
    and scale; equal products mean equal tensors."""
    from .courant import ambient_frame, section_to_ambient

    amb = ambient_frame(dec.chart)
    rows = [section_to_ambient(z) for z in dec.lbar_sections]
    return omega_el.substitute(amb, rows).scale(scalar)
