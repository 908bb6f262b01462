"""Graded exterior algebra over declared frames, plus Cartan calculus.

A Frame is a trivialized bundle: rank, labels, and a link to its dual
frame.  Chart frames (tangent/cotangent) are bound to the coordinates and
support the exterior derivative and Lie derivatives; abstract frames house
eigenbundles and algebroid trivializations.

GradedElement stores mixed-degree elements as a map from strictly
increasing index tuples to scalars; all operations are exact.
"""

from __future__ import annotations

import itertools

from .errors import (
    DegreeMismatch,
    FrameMismatch,
    NotChartFrame,
    ScenarioError,
    ZeroTopSection,
)
from .scalars import Chart, ScalarField, Token, _ScalarParser, serialize_scalar, tokenize

TANGENT = "tangent-chart"
COTANGENT = "cotangent-chart"
ABSTRACT = "abstract"


class Frame:
    """A rank-r trivialization with labels, linked one-to-one to its dual."""

    __slots__ = ("chart", "labels", "rank", "kind", "_dual", "tag")

    def __init__(self, chart: Chart, labels, kind: str, tag: str = ""):
        self.chart = chart
        self.labels = tuple(labels)
        self.rank = len(self.labels)
        self.kind = kind
        self.tag = tag
        self._dual = None
        if self.rank < 1:
            raise ValueError("frame rank must be at least 1")

    @property
    def dual(self) -> "Frame":
        if self._dual is None:
            raise FrameMismatch(f"frame {self.tag or self.kind} has no linked dual")
        return self._dual

    @staticmethod
    def link(a: "Frame", b: "Frame"):
        if a.rank != b.rank:
            raise FrameMismatch("dual frames must share rank")
        a._dual = b
        b._dual = a

    @staticmethod
    def abstract_pair(chart: Chart, labels, dual_labels, tag: str = ""):
        f = Frame(chart, labels, ABSTRACT, tag=tag)
        g = Frame(chart, dual_labels, ABSTRACT, tag=(tag + "*") if tag else "")
        Frame.link(f, g)
        return f, g

    def is_chart_kind(self) -> bool:
        return self.kind in (TANGENT, COTANGENT)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Frame):
            return NotImplemented
        if self.kind == ABSTRACT or other.kind == ABSTRACT:
            return self is other
        return self.kind == other.kind and self.chart == other.chart

    def __hash__(self):
        if self.kind == ABSTRACT:
            return object.__hash__(self)
        return hash((self.kind, self.chart))

    def __repr__(self):
        return f"Frame({self.kind}, {list(self.labels)})"


_CHART_FRAMES: dict = {}


def chart_frames(chart: Chart):
    """The linked (tangent, cotangent) frame pair of a chart (cached)."""
    key = chart.coordinates
    pair = _CHART_FRAMES.get(key)
    if pair is None:
        tangent = Frame(chart, [f"@{n}" for n in chart.coordinates], TANGENT)
        cotangent = Frame(chart, [f"d{n}" for n in chart.coordinates], COTANGENT)
        Frame.link(tangent, cotangent)
        pair = (tangent, cotangent)
        _CHART_FRAMES[key] = pair
    return pair


def tangent_frame(chart: Chart) -> Frame:
    return chart_frames(chart)[0]


def cotangent_frame(chart: Chart) -> Frame:
    return chart_frames(chart)[1]


def merge_indices(left, right):
    """Merge two strictly increasing tuples; (sign, merged) or None on overlap."""
    sign = 1
    i, j = 0, 0
    out = []
    nl, nr = len(left), len(right)
    while i < nl and j < nr:
        a, b = left[i], right[j]
        if a == b:
            return None
        if a < b:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
            if (nl - i) % 2:
                sign = -sign
    out.extend(left[i:])
    out.extend(right[j:])
    return sign, tuple(out)


class GradedElement:
    """Mixed-degree exterior algebra element over a frame."""

    __slots__ = ("frame", "components")

    def __init__(self, frame: Frame, components: dict):
        self.frame = frame
        self.components = components

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(frame: Frame) -> "GradedElement":
        return GradedElement(frame, {})

    @staticmethod
    def from_scalar(frame: Frame, s: ScalarField) -> "GradedElement":
        if s.is_zero():
            return GradedElement(frame, {})
        return GradedElement(frame, {(): s})

    @staticmethod
    def monomial(frame: Frame, indices, coeff=None) -> "GradedElement":
        chart = frame.chart
        c = chart.one() if coeff is None else chart.scalar(coeff)
        idx = tuple(indices)
        if len(set(idx)) != len(idx):
            return GradedElement(frame, {})
        order = tuple(sorted(idx))
        sign = _permutation_sign(idx)
        if sign < 0:
            c = -c
        if c.is_zero():
            return GradedElement(frame, {})
        return GradedElement(frame, {order: c})

    @staticmethod
    def basis_vector(frame: Frame, k: int) -> "GradedElement":
        return GradedElement.monomial(frame, (k,))

    @staticmethod
    def from_terms(frame: Frame, terms) -> "GradedElement":
        out: dict = {}
        for idx, c in terms:
            if c.is_zero():
                continue
            prev = out.get(idx)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        return GradedElement(frame, out)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self):
        return bool(self.components)

    def degrees(self):
        return sorted({len(k) for k in self.components})

    def is_homogeneous(self) -> bool:
        return len({len(k) for k in self.components}) <= 1

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise DegreeMismatch(f"element is not homogeneous (degrees {ds})")
        return ds[0]

    def degree_part(self, k: int) -> "GradedElement":
        return GradedElement(
            self.frame, {i: c for i, c in self.components.items() if len(i) == k}
        )

    def coefficient(self, indices) -> ScalarField:
        return self.components.get(tuple(indices), self.frame.chart.zero())

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.frame == other.frame and self.components == other.components

    def __hash__(self):
        return hash((id(self.frame), frozenset(self.components.items())))

    # -- linear operations ----------------------------------------------------

    def _check_frame(self, other: "GradedElement"):
        if self.frame != other.frame:
            raise FrameMismatch(
                f"elements over different frames: {self.frame!r} vs {other.frame!r}"
            )

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check_frame(other)
        out = dict(self.components)
        for idx, c in other.components.items():
            prev = out.get(idx)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        return GradedElement(self.frame, out)

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.frame, {i: -c for i, c in self.components.items()})

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def scale(self, s) -> "GradedElement":
        s = self.frame.chart.scalar(s)
        if s.is_zero():
            return GradedElement(self.frame, {})
        return GradedElement(self.frame, {i: c * s for i, c in self.components.items()})

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    # -- exterior product --------------------------------------------------------

    def wedge(self, other: "GradedElement") -> "GradedElement":
        self._check_frame(other)
        out: dict = {}
        for ia, ca in self.components.items():
            for ib, cb in other.components.items():
                merged = merge_indices(ia, ib)
                if merged is None:
                    continue
                sign, idx = merged
                c = ca * cb
                if sign < 0:
                    c = -c
                prev = out.get(idx)
                s = c if prev is None else prev + c
                if s.is_zero():
                    out.pop(idx, None)
                else:
                    out[idx] = s
        return GradedElement(self.frame, out)

    def __xor__(self, other):
        return self.wedge(other)

    # -- frame changes ---------------------------------------------------------

    def conjugate(self) -> "GradedElement":
        """Coefficient conjugation; only meaningful over real chart frames."""
        if not self.frame.is_chart_kind():
            raise FrameMismatch("conjugation over an abstract frame needs a target")
        return GradedElement(
            self.frame, {i: c.conjugate() for i, c in self.components.items()}
        )

    def substitute(self, target: Frame, rows, conjugate_coeffs: bool = False):
        """Map each frame label through a degree-1 image and re-expand.

        rows[k] is the image of basis element k as a degree-1 element over
        the target frame; coefficients are conjugated first when requested.
        Degree-0 components pass through unchanged.
        """
        out = GradedElement.zero(target)
        for idx, c in self.components.items():
            if conjugate_coeffs:
                c = c.conjugate()
            term = GradedElement.from_scalar(target, c)
            for k in idx:
                term = term.wedge(rows[k])
                if term.is_zero():
                    break
            out = out + term
        return out

    def __repr__(self):
        return f"GradedElement({serialize_graded(self)!r})"

    def __str__(self):
        return serialize_graded(self)


def _permutation_sign(seq) -> int:
    sign = 1
    items = list(seq)
    n = len(items)
    for a in range(n):
        for b in range(a + 1, n):
            if items[a] > items[b]:
                sign = -sign
    return sign


# -- pairings and contraction ---------------------------------------------------


def det_pair(xi: GradedElement, x: GradedElement) -> ScalarField:
    """Determinant pairing of equal-degree elements over dual frames."""
    if xi.frame.dual != x.frame:
        raise FrameMismatch("det_pair needs elements over mutually dual frames")
    chart = x.frame.chart
    if xi.is_zero() or x.is_zero():
        return chart.zero()
    if not (xi.is_homogeneous() and x.is_homogeneous()):
        raise DegreeMismatch("det_pair needs homogeneous operands")
    if xi.degree() != x.degree():
        raise DegreeMismatch(
            f"det_pair degrees differ: {xi.degree()} vs {x.degree()}"
        )
    total = chart.zero()
    small, big = xi.components, x.components
    if len(small) > len(big):
        small, big = big, small
    for idx, c in small.items():
        d = big.get(idx)
        if d is not None:
            total = total + c * d
    return total


def _contract_terms(x_components: dict, phi_components: dict, frame: Frame):
    out: dict = {}
    chart = frame.chart
    for ix, cx in x_components.items():
        k = len(ix)
        xset = set(ix)
        for ip, cp in phi_components.items():
            if len(ip) < k or not xset.issubset(ip):
                continue
            rest = tuple(j for j in ip if j not in xset)
            merged = merge_indices(ix, rest)
            sign, _ = merged
            c = cx * cp
            if sign < 0:
                c = -c
            prev = out.get(rest)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(rest, None)
            else:
                out[rest] = s
    return GradedElement(frame, out)


def contract(x: GradedElement, phi: GradedElement) -> GradedElement:
    """Interior product, the det_pair adjoint of left wedge.

    det_pair(contract(x, phi), y) = det_pair(phi, x wedge y) for all y.
    Requires deg(phi) >= deg(x) on homogeneous parts.
    """
    if x.frame.dual != phi.frame:
        raise FrameMismatch("contract needs phi over the dual of x's frame")
    if x.is_zero() or phi.is_zero():
        return GradedElement.zero(phi.frame)
    if x.is_homogeneous() and phi.is_homogeneous():
        if phi.degree() < x.degree():
            raise DegreeMismatch(
                f"cannot contract degree {x.degree()} into degree {phi.degree()}"
            )
    return _contract_terms(x.components, phi.components, phi.frame)


def interior(x: GradedElement, phi: GradedElement) -> GradedElement:
    """Lenient contraction on mixed degrees (lower-degree parts drop out)."""
    if x.frame.dual != phi.frame:
        raise FrameMismatch("interior needs phi over the dual of x's frame")
    return _contract_terms(x.components, phi.components, phi.frame)


def _top_indices(frame: Frame):
    return tuple(range(frame.rank))


def omega_sharp(x: GradedElement, omega: GradedElement) -> GradedElement:
    """Contraction against a nowhere-vanishing top form over the dual frame."""
    if omega.is_zero() or omega.components.get(_top_indices(omega.frame)) is None:
        raise ZeroTopSection("omega must be a nonzero top-degree section")
    if set(omega.components) != {_top_indices(omega.frame)}:
        raise DegreeMismatch("omega must be homogeneous of top degree")
    return interior(x, omega)


def v_sharp(xi: GradedElement, v: GradedElement) -> GradedElement:
    """Contraction against a nowhere-vanishing top polyvector."""
    if v.is_zero() or v.components.get(_top_indices(v.frame)) is None:
        raise ZeroTopSection("v must be a nonzero top-degree section")
    if set(v.components) != {_top_indices(v.frame)}:
        raise DegreeMismatch("v must be homogeneous of top degree")
    return interior(xi, v)


# -- chart calculus -----------------------------------------------------------


def de_rham_d(phi: GradedElement) -> GradedElement:
    """Exterior derivative of a form over the cotangent chart frame."""
    frame = phi.frame
    if frame.kind != COTANGENT:
        raise NotChartFrame("the exterior derivative acts on cotangent chart forms")
    chart = frame.chart
    terms = []
    for idx, c in phi.components.items():
        for k in range(chart.dim):
            dc = c.partial(k)
            if dc.is_zero():
                continue
            merged = merge_indices((k,), idx)
            if merged is None:
                continue
            sign, nidx = merged
            terms.append((nidx, dc if sign > 0 else -dc))
    return GradedElement.from_terms(frame, terms)


def vector_bracket(x: GradedElement, y: GradedElement) -> GradedElement:
    """Lie bracket of vector fields over the tangent chart frame."""
    frame = x.frame
    if frame.kind != TANGENT or y.frame.kind != TANGENT:
        raise NotChartFrame("vector_bracket needs tangent chart vector fields")
    chart = frame.chart
    xs = [x.coefficient((k,)) for k in range(chart.dim)]
    ys = [y.coefficient((k,)) for k in range(chart.dim)]
    terms = []
    for k in range(chart.dim):
        acc = chart.zero()
        for l in range(chart.dim):
            acc = acc + xs[l] * ys[k].partial(l) - ys[l] * xs[k].partial(l)
        if not acc.is_zero():
            terms.append(((k,), acc))
    return GradedElement.from_terms(frame, terms)


def apply_vector(x: GradedElement, f: ScalarField) -> ScalarField:
    """Derivation action of a tangent vector field on a scalar."""
    if x.frame.kind != TANGENT:
        raise NotChartFrame("apply_vector needs a tangent chart vector field")
    chart = x.frame.chart
    acc = chart.zero()
    for (k,), c in x.components.items():
        acc = acc + c * f.partial(k)
    return acc


def lie_derivative(x: GradedElement, phi: GradedElement) -> GradedElement:
    """Lie derivative along a vector field.

    On forms this is the Cartan formula; on polyvectors it is the bracket
    extension (a derivation of the wedge through the vector field bracket).
    """
    if x.frame.kind != TANGENT:
        raise NotChartFrame("lie_derivative needs a tangent chart vector field")
    if phi.frame.kind == COTANGENT:
        return interior(x, de_rham_d(phi)) + de_rham_d(interior(x, phi))
    if phi.frame.kind == TANGENT:
        return _lie_derivative_polyvector(x, phi)
    raise NotChartFrame("lie_derivative needs a chart frame element")


def _lie_derivative_polyvector(x: GradedElement, phi: GradedElement) -> GradedElement:
    frame = phi.frame
    chart = frame.chart
    basis_images = []
    for j in range(chart.dim):
        imgs = []
        for k in range(chart.dim):
            coeff = -x.coefficient((k,)).partial(j)
            if not coeff.is_zero():
                imgs.append(((k,), coeff))
        basis_images.append(GradedElement.from_terms(frame, imgs))
    out = GradedElement.zero(frame)
    for idx, c in phi.components.items():
        lead = GradedElement.from_scalar(frame, apply_vector(x, c))
        for j in idx:
            lead = lead.wedge(GradedElement.basis_vector(frame, j))
        out = out + lead
        for pos in range(len(idx)):
            piece = GradedElement.from_scalar(frame, c)
            for p, j in enumerate(idx):
                piece = piece.wedge(
                    basis_images[j] if p == pos else GradedElement.basis_vector(frame, j)
                )
            out = out + piece
    return out


# -- text grammar ----------------------------------------------------------------
#
# element := term (('+'|'-') term)*
# term    := factor ('*' factor)*      with at most one frame factor
# factor  := e '[' NAME ('^' NAME)* ']' | e '[' ']' | scalar tokens


def parse_graded(frame: Frame, text: str) -> GradedElement:
    tokens = tokenize(text)
    terms = _split_terms(tokens)
    out = GradedElement.zero(frame)
    for sign, toks in terms:
        idx, scalar_tokens = _extract_frame_atom(frame, toks)
        if scalar_tokens:
            parser = _ScalarParser(frame.chart, scalar_tokens + [Token("END", None, -1)])
            coeff = parser.parse()
        else:
            coeff = frame.chart.one()
        if sign < 0:
            coeff = -coeff
        if idx is None:
            out = out + GradedElement.from_scalar(frame, coeff)
        else:
            out = out + GradedElement.monomial(frame, idx, coeff)
    return out


def _split_terms(tokens):
    terms = []
    current = []
    sign = 1
    depth = 0
    expect_operand = True
    for tok in tokens:
        if tok.kind == "END":
            break
        if tok.kind == "OP":
            if tok.value in "([":
                depth += 1
            elif tok.value in ")]":
                depth -= 1
            elif tok.value in "+-" and depth == 0 and not expect_operand:
                terms.append((sign, current))
                current = []
                sign = 1 if tok.value == "+" else -1
                expect_operand = True
                continue
            elif tok.value in "+-" and depth == 0 and expect_operand and not current:
                if tok.value == "-":
                    sign = -sign
                continue
            expect_operand = tok.value in "+-*/^(["
        else:
            expect_operand = False
        current.append(tok)
    terms.append((sign, current))
    return [(s, t) for s, t in terms if t]


def _extract_frame_atom(frame: Frame, toks):
    """Pull the single e[...] factor out of a term's token list."""
    label_to_index = {lab: k for k, lab in enumerate(frame.labels)}
    idx = None
    j = 0
    out = []
    found = False
    while j < len(toks):
        tok = toks[j]
        if (
            tok.kind == "NAME"
            and tok.value == "e"
            and j + 1 < len(toks)
            and toks[j + 1].kind == "OP"
            and toks[j + 1].value == "["
        ):
            if found:
                raise ScenarioError(
                    "more than one frame factor in a term", location=tok.pos
                )
            found = True
            j += 2
            labels = []
            expect_name = True
            while j < len(toks):
                t = toks[j]
                if t.kind == "OP" and t.value == "]":
                    j += 1
                    break
                if expect_name:
                    if t.kind != "NAME":
                        raise ScenarioError("expected frame label", location=t.pos)
                    labels.append(t.value)
                    expect_name = False
                else:
                    if t.kind != "OP" or t.value != "^":
                        raise ScenarioError("expected '^' or ']'", location=t.pos)
                    expect_name = True
                j += 1
            else:
                raise ScenarioError("unterminated frame factor", location=tok.pos)
            indices = []
            for lab in labels:
                if lab not in label_to_index:
                    raise ScenarioError(
                        f"unknown frame label {lab!r} (labels: {', '.join(frame.labels)})",
                        location=tok.pos,
                    )
                indices.append(label_to_index[lab])
            if len(set(indices)) != len(indices):
                raise ScenarioError("repeated frame label in a factor", location=tok.pos)
            idx = tuple(indices)
            if out and out[-1].kind == "OP" and out[-1].value == "*":
                out.pop()
            elif j < len(toks) and toks[j].kind == "OP" and toks[j].value == "*":
                j += 1
            continue
        out.append(tok)
        j += 1
    return idx, out


def _coeff_factor_str(s: ScalarField) -> str:
    text = serialize_scalar(s)
    if " + " in text or " - " in text or "/" in text:
        return f"({text})"
    return text


def serialize_graded(el: GradedElement) -> str:
    if el.is_zero():
        return "0"
    frame = el.frame
    rendered = []
    for idx in sorted(el.components, key=lambda t: (len(t), t)):
        c = el.components[idx]
        if not idx:
            rendered.append(serialize_scalar(c))
            continue
        atom = "e[" + "^".join(frame.labels[k] for k in idx) + "]"
        if c == frame.chart.one():
            rendered.append(atom)
        elif c == -frame.chart.one():
            rendered.append(f"-{atom}")
        else:
            rendered.append(f"{_coeff_factor_str(c)}*{atom}")
    out = rendered[0]
    for t in rendered[1:]:
        if t.startswith("-"):
            out += f" - {t[1:]}"
        else:
            out += f" + {t}"
    return out
