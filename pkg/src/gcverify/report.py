"""Check results and deterministic report rendering.

Reports are byte-identical across runs: checks are sorted by (suite, name),
all content is derived from exact values, and wall-clock timing is never
part of the document (the CLI prints it to stderr instead).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SUITE_ORDER = (
    "validation",
    "courant-axioms",
    "bialgebroid",
    "spinor-identities",
    "main-theorem",
    "modular-prop",
    "module-structures",
    "corollaries",
)


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    witness: str = ""
    detail: str = ""

    def status(self) -> str:
        return "pass" if self.passed else "FAIL"


class CaseCheck:
    """Accumulates per-case outcomes into one named check."""

    def __init__(self, suite: str, name: str):
        self.suite = suite
        self.name = name
        self.total = 0
        self.failures = 0
        self.first_witness = ""
        self.detail = ""

    def case(self, ok: bool, label: str, residual: str = ""):
        self.total += 1
        if not ok:
            self.failures += 1
            if not self.first_witness:
                self.first_witness = (
                    f"{label}: residual {residual}" if residual else label
                )

    def result(self) -> CheckResult:
        witness = ""
        if self.failures:
            witness = f"{self.first_witness} ({self.failures} of {self.total} cases fail)"
        detail = self.detail or f"{self.total} cases"
        return CheckResult(self.suite, self.name, self.failures == 0, witness, detail)


@dataclass
class Report:
    checks: list = field(default_factory=list)
    conventions: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def extend(self, results):
        self.checks.extend(results)

    def add_note(self, text: str):
        if text not in self.notes:
            self.notes.append(text)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted_checks(self):
        def key(c: CheckResult):
            try:
                s = SUITE_ORDER.index(c.suite)
            except ValueError:
                s = len(SUITE_ORDER)
            return (s, c.name)

        return sorted(self.checks, key=key)

    # -- renderings ------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        lines.append("== conventions ==")
        for k in sorted(self.conventions):
            lines.append(f"  {k}: {self.conventions[k]}")
        if self.notes:
            lines.append("== notes ==")
            for n in self.notes:
                lines.append(f"  {n}")
        lines.append("== checks ==")
        for c in self.sorted_checks():
            line = f"  [{c.status()}] {c.suite}: {c.name}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
            if c.witness:
                lines.append(f"         witness: {c.witness}")
        n_fail = sum(1 for c in self.checks if not c.passed)
        verdict = "ALL CHECKS PASS" if n_fail == 0 else f"{n_fail} CHECK(S) FAIL"
        lines.append(f"== result: {verdict} ({len(self.checks)} checks) ==")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "version": 1,
            "status": "pass" if self.passed else "fail",
            "conventions": {k: self.conventions[k] for k in sorted(self.conventions)},
            "notes": list(self.notes),
            "checks": [
                {
                    "suite": c.suite,
                    "name": c.name,
                    "status": "pass" if c.passed else "fail",
                    "witness": c.witness,
                    "detail": c.detail,
                }
                for c in self.sorted_checks()
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


BASE_CONVENTIONS = {
    "coefficient-field": "exact rational functions over Q(i); zero tolerance",
    "contraction": "det-pair adjoint with the multivector on the left: "
    "<contract(X, phi), Y> = <phi, X^Y>; hence contract(X^Y) = contract(Y) o contract(X)",
    "pairing-normalization": "natural pairing carries 1/2; eigenbundle duality "
    "pairing carries the factor 2 and every algebroid-side dual pairing uses it",
    "clifford-multi-action": "left-to-right nesting: (z1^...^zk).rho = z1.(...(zk.rho))",
    "schouten-sign": "graded antisymmetry [P,Q] = -(-1)^((p-1)(q-1))[Q,P] with "
    "[P,Q^R] = [P,Q]^R + (-1)^((p-1)q) Q^[P,R] and [X,f] = anchor(X)f",
    "courant-axiom-6": "the unbound section in the metric-invariance axiom is read as z3",
    "dorfman-symmetric-part": "bracket normalized so that <<z1,z2>> + <<z2,z1>> = 2 D<z1,z2>",
    "twist-sign": "the 3-form term in the twisted brackets is contract(x1, contract(x2, H)), "
    "the derived bracket of d + H^; the opposite nesting breaks closure of "
    "twisted-closed annihilators",
}
