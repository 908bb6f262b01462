"""Scenario files, the builtin example catalog, and the suite runner.

A scenario is a JSON document naming a chart, a structure source (an
automorphism matrix or a pure-spinor expression), a twist 3-form, the
suites to run, and the battery depth.  Builtins cover the standard
examples plus one negative control whose whole purpose is to fail.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .courant import standard_courant, check_courant_axioms
from .errors import KernelError, NotClosed, ScenarioError
from .gcs import (
    GCSContext,
    bialgebroid_checks,
    check_eigenbundle_consistency,
    check_gcs,
    spinor_identity_checks,
    verify_corollaries,
    verify_main_theorem,
    verify_modular_prop,
    verify_module_structures,
)
from .multivector import (
    GradedElement,
    cotangent_frame,
    de_rham_d,
    parse_graded,
    serialize_graded,
)
from .report import BASE_CONVENTIONS, CheckResult, Report
from .scalars import Chart, parse_scalar, serialize_scalar

SUITES = (
    "courant-axioms",
    "bialgebroid",
    "spinor-identities",
    "main-theorem",
    "modular-prop",
    "module-structures",
    "corollaries",
)

SCENARIO_VERSION = 1


@dataclass
class Scenario:
    name: str
    chart: Chart
    h_text: str
    structure_kind: str  # "pure-spinor" | "j-matrix" | "none"
    structure_data: object  # expression string or matrix of strings
    suites: tuple
    max_degree: int = 2
    allow_nonclosed_h: bool = False

    def h_form(self) -> GradedElement:
        return parse_graded(cotangent_frame(self.chart), self.h_text)

    def spinor(self) -> GradedElement:
        if self.structure_kind != "pure-spinor":
            raise ScenarioError("scenario has no pure spinor")
        return parse_graded(cotangent_frame(self.chart), self.structure_data)

    def j_rows(self):
        if self.structure_kind != "j-matrix":
            raise ScenarioError("scenario has no automorphism matrix")
        return [
            [parse_scalar(self.chart, entry) for entry in row]
            for row in self.structure_data
        ]

    def to_document(self) -> dict:
        doc = {
            "version": SCENARIO_VERSION,
            "name": self.name,
            "chart": {
                "dim": self.chart.dim,
                "coordinates": list(self.chart.coordinates),
            },
            "h_form": self.h_text,
            "suites": list(self.suites),
            "max_degree": self.max_degree,
        }
        if self.structure_kind == "pure-spinor":
            doc["structure"] = {"pure_spinor": self.structure_data}
        elif self.structure_kind == "j-matrix":
            doc["structure"] = {"j_matrix": self.structure_data}
        else:
            doc["structure"] = None
        if self.allow_nonclosed_h:
            doc["allow_nonclosed_h"] = True
        return doc

    def canonical_json(self) -> str:
        return json.dumps(self.to_document(), indent=2) + "\n"


def _require(cond, message, location=None):
    if not cond:
        raise ScenarioError(message, location=location)


def scenario_from_document(doc: dict) -> Scenario:
    _require(isinstance(doc, dict), "scenario must be a JSON object")
    version = doc.get("version")
    _require(
        version == SCENARIO_VERSION,
        f"unsupported scenario version {version!r} (expected {SCENARIO_VERSION})",
    )
    name = doc.get("name", "unnamed")
    _require(isinstance(name, str) and name, "scenario needs a nonempty name")
    chart_doc = doc.get("chart")
    _require(isinstance(chart_doc, dict), "scenario needs a chart object")
    coords = chart_doc.get("coordinates")
    _require(
        isinstance(coords, list) and all(isinstance(c, str) for c in coords),
        "chart.coordinates must be a list of names",
    )
    try:
        chart = Chart(coords)
    except ValueError as exc:
        raise ScenarioError(f"invalid chart: {exc}") from exc
    dim = chart_doc.get("dim", chart.dim)
    _require(dim == chart.dim, "chart.dim disagrees with the coordinate list")

    h_text = doc.get("h_form", "0")
    _require(isinstance(h_text, str), "h_form must be an expression string")

    structure = doc.get("structure")
    if structure is None:
        kind, data = "none", None
    else:
        _require(isinstance(structure, dict), "structure must be an object or null")
        if "pure_spinor" in structure:
            kind, data = "pure-spinor", structure["pure_spinor"]
            _require(isinstance(data, str), "structure.pure_spinor must be a string")
        elif "j_matrix" in structure:
            kind, data = "j-matrix", structure["j_matrix"]
            m2 = 2 * chart.dim
            _require(
                isinstance(data, list)
                and len(data) == m2
                and all(isinstance(r, list) and len(r) == m2 for r in data)
                and all(isinstance(e, str) for r in data for e in r),
                f"structure.j_matrix must be a {m2}x{m2} matrix of expressions",
            )
        else:
            raise ScenarioError("structure needs pure_spinor or j_matrix")

    suites = doc.get("suites", list(SUITES))
    _require(
        isinstance(suites, list) and all(isinstance(s, str) for s in suites),
        "suites must be a list of suite names",
    )
    for s in suites:
        _require(s in SUITES, f"unknown suite {s!r} (choices: {', '.join(SUITES)})")
    max_degree = doc.get("max_degree", 2)
    _require(
        isinstance(max_degree, int) and 0 <= max_degree <= 6,
        "max_degree must be an integer between 0 and 6",
    )
    allow_nonclosed = bool(doc.get("allow_nonclosed_h", False))

    scenario = Scenario(
        name=name,
        chart=chart,
        h_text=h_text,
        structure_kind=kind,
        structure_data=data,
        suites=tuple(dict.fromkeys(suites)),
        max_degree=max_degree,
        allow_nonclosed_h=allow_nonclosed,
    )
    validate_scenario(scenario)
    return scenario


def validate_scenario(scenario: Scenario):
    """Static validation: expressions parse, the twist is closed, GCS suites
    have an even-dimensional chart and a structure."""
    chart = scenario.chart
    h = scenario.h_form()  # raises ScenarioError on bad syntax
    if h.components and any(len(k) != 3 for k in h.components):
        raise ScenarioError("h_form must be homogeneous of degree 3")
    if not scenario.allow_nonclosed_h:
        dh = de_rham_d(h)
        if not dh.is_zero():
            raise ScenarioError(
                f"h_form is not closed: d(H) = {serialize_graded(dh)} (NotClosed)"
            )
    gcs_suites = [s for s in scenario.suites if s != "courant-axioms"]
    if gcs_suites:
        if scenario.structure_kind == "none":
            raise ScenarioError(
                f"suites {', '.join(gcs_suites)} need a structure (pure_spinor "
                "or j_matrix)"
            )
        if chart.dim % 2:
            raise ScenarioError("structure suites need an even-dimensional chart")
    if scenario.structure_kind == "pure-spinor":
        scenario.spinor()
    elif scenario.structure_kind == "j-matrix":
        scenario.j_rows()


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"invalid JSON: {exc.msg}", location=f"line {exc.lineno}, column {exc.colno}"
        ) from exc
    return scenario_from_document(doc)


# -- builtin catalog -----------------------------------------------------------------


def _builtin_documents():
    r2 = {"dim": 2, "coordinates": ["x1", "x2"]}
    r4 = {"dim": 4, "coordinates": ["x1", "x2", "x3", "x4"]}
    all_suites = list(SUITES)
    return {
        "symplectic-r2": {
            "version": 1,
            "name": "symplectic-r2",
            "chart": r2,
            "structure": {"pure_spinor": "1 + i*e[dx1^dx2]"},
            "h_form": "0",
            "suites": all_suites,
            "max_degree": 2,
        },
        "complex-r2": {
            "version": 1,
            "name": "complex-r2",
            "chart": r2,
            "structure": {"pure_spinor": "e[dx1] + i*e[dx2]"},
            "h_form": "0",
            "suites": all_suites,
            "max_degree": 2,
        },
        "rescaled-symplectic-r2": {
            "version": 1,
            "name": "rescaled-symplectic-r2",
            "chart": r2,
            "structure": {
                "pure_spinor": "(1 + x1^2) + (1 + x1^2)*i*e[dx1^dx2]"
            },
            "h_form": "0",
            "suites": all_suites,
            "max_degree": 2,
        },
        "twisted-b-field-r4": {
            "version": 1,
            "name": "twisted-b-field-r4",
            "chart": r4,
            # exp(B + i w) with B = x1 dx2^dx3 and w = dx1^dx2 + dx3^dx4;
            # the twist is -dB, the sign the derivative oracle forces
            "structure": {
                "pure_spinor": (
                    "1 + x1*e[dx2^dx3] + i*e[dx1^dx2] + i*e[dx3^dx4]"
                    " - e[dx1^dx2^dx3^dx4]"
                )
            },
            "h_form": "-e[dx1^dx2^dx3]",
            "suites": all_suites,
            "max_degree": 2,
        },
        "broken-jacobi": {
            "version": 1,
            "name": "broken-jacobi",
            "chart": r4,
            "structure": None,
            "h_form": "x1*e[dx2^dx3^dx4]",
            "suites": ["courant-axioms"],
            "max_degree": 2,
            "allow_nonclosed_h": True,
        },
    }


def builtin_names():
    return sorted(_builtin_documents())


def load_builtin(name: str) -> Scenario:
    docs = _builtin_documents()
    if name not in docs:
        raise ScenarioError(
            f"unknown builtin {name!r} (available: {', '.join(sorted(docs))})"
        )
    return scenario_from_document(docs[name])


def builtin_catalog():
    """(name, one-line description) pairs for the list subcommand."""
    return [
        ("broken-jacobi", "negative control: non-closed twist breaks the Jacobi axiom"),
        ("complex-r2", "complex structure from the spinor dx1 + i dx2"),
        ("rescaled-symplectic-r2", "symplectic spinor rescaled by 1 + x1^2"),
        ("symplectic-r2", "constant symplectic structure, spinor exp(i dx1^dx2)"),
        ("twisted-b-field-r4", "B-field transform of a symplectic structure, twist -dB"),
    ]


# -- suite runner ------------------------------------------------------------------


def run_scenario(scenario: Scenario, degree: int = None) -> Report:
    """Execute the selected suites and assemble the deterministic report."""
    report = Report(conventions=dict(BASE_CONVENTIONS))
    degree = scenario.max_degree if degree is None else degree
    chart = scenario.chart
    h = scenario.h_form()

    if "courant-axioms" in scenario.suites:
        data = standard_courant(chart, h)
        dh = de_rham_d(h)
        if not dh.is_zero():
            report.add_note(
                f"twist is not closed (d(H) = {serialize_graded(dh)}); the axiom "
                "battery is expected to expose the failure"
            )
        report.extend(check_courant_axioms(data, degree=degree))

    needs_ctx = [s for s in scenario.suites if s != "courant-axioms"]
    if needs_ctx:
        try:
            if scenario.structure_kind == "pure-spinor":
                ctx = GCSContext(chart, h, u=scenario.spinor())
            else:
                ctx = GCSContext(chart, h, j_rows=scenario.j_rows())
        except KernelError as exc:
            report.extend(
                [
                    CheckResult(
                        "validation",
                        "structure-pipeline",
                        False,
                        f"{type(exc).__name__}: {exc}",
                    )
                ]
            )
            return report
        report.extend(check_gcs(ctx, h, chart, degree=degree))
        report.extend(check_eigenbundle_consistency(ctx))
        for suite in scenario.suites:
            if suite == "bialgebroid":
                report.extend(bialgebroid_checks(ctx, degree=min(degree, 2)))
            elif suite == "spinor-identities":
                report.extend(spinor_identity_checks(ctx, degree=degree))
            elif suite == "main-theorem":
                report.extend(verify_main_theorem(ctx, max_degree=degree))
            elif suite == "modular-prop":
                report.extend(verify_modular_prop(ctx))
            elif suite == "module-structures":
                report.extend(verify_module_structures(ctx))
            elif suite == "corollaries":
                report.extend(verify_corollaries(ctx, max_degree=3))
        for c in report.checks:
            if c.name == "bivector-proportional-to-structure-bivector" and c.detail:
                report.conventions["measured-bivector-constant"] = c.detail.replace(
                    "measured constant: ", ""
                )
            if c.name == "modular-field-against-half-projection" and c.detail:
                report.conventions["measured-modular-field-relation"] = c.detail
    return report
