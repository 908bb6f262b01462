"""Exact symbolic kernel and verification CLI for generalized complex
geometry on a single coordinate chart.

Everything is computed over the field of rational functions with Gaussian
rational coefficients, so every identity check is exact: a check passes
only when the residual is structurally zero.
"""

from .errors import KernelError
from .scalars import (
    Chart,
    ScalarField,
    field_arith,
    parse_scalar,
    partial,
    serialize_scalar,
)
from .multivector import (
    Frame,
    GradedElement,
    chart_frames,
    contract,
    cotangent_frame,
    de_rham_d,
    det_pair,
    interior,
    lie_derivative,
    omega_sharp,
    parse_graded,
    serialize_graded,
    tangent_frame,
    v_sharp,
)
from .courant import (
    CourantData,
    GenSection,
    check_courant_axioms,
    courant_twisted,
    dorfman_twisted,
    double_of_bialgebroid,
    is_dirac,
    natural_pairing,
    standard_courant,
)
from .algebroid import (
    HalfDensityModule,
    LieAlgebroidStructure,
    bv_del,
    check_bialgebroid,
    check_lie_algebroid,
    modular_cocycle,
    modular_vector_field,
    poisson_from_bialgebroid,
    schouten,
    tangent_algebroid,
    tilde_d_square,
    tilde_del,
    tilde_dstar,
    trivial_cotangent_algebroid,
)
from .spinor import (
    SpinorDecomposition,
    annihilator,
    canonical_iso,
    clifford_act,
    clifford_act_multi,
    d_h,
    mukai,
    transpose,
)
from .gcs import (
    GCSContext,
    bialgebroid_of,
    check_gcs,
    eigenbundle,
    from_pure_spinor,
    pure_spinor_of,
    verify_corollaries,
    verify_main_theorem,
    verify_modular_prop,
    verify_module_structures,
)
from .report import CheckResult, Report
from .scenario import (
    Scenario,
    builtin_names,
    load_builtin,
    load_scenario,
    run_scenario,
)

__all__ = [
    "Chart",
    "ScalarField",
    "field_arith",
    "partial",
    "parse_scalar",
    "serialize_scalar",
    "Frame",
    "GradedElement",
    "chart_frames",
    "tangent_frame",
    "cotangent_frame",
    "contract",
    "det_pair",
    "de_rham_d",
    "lie_derivative",
    "interior",
    "omega_sharp",
    "v_sharp",
    "parse_graded",
    "serialize_graded",
    "GenSection",
    "CourantData",
    "natural_pairing",
    "dorfman_twisted",
    "courant_twisted",
    "standard_courant",
    "double_of_bialgebroid",
    "check_courant_axioms",
    "is_dirac",
    "LieAlgebroidStructure",
    "HalfDensityModule",
    "tangent_algebroid",
    "trivial_cotangent_algebroid",
    "schouten",
    "check_lie_algebroid",
    "check_bialgebroid",
    "bv_del",
    "modular_cocycle",
    "modular_vector_field",
    "poisson_from_bialgebroid",
    "tilde_dstar",
    "tilde_del",
    "tilde_d_square",
    "SpinorDecomposition",
    "annihilator",
    "canonical_iso",
    "clifford_act",
    "clifford_act_multi",
    "d_h",
    "mukai",
    "transpose",
    "GCSContext",
    "from_pure_spinor",
    "pure_spinor_of",
    "eigenbundle",
    "check_gcs",
    "bialgebroid_of",
    "verify_main_theorem",
    "verify_modular_prop",
    "verify_module_structures",
    "verify_corollaries",
    "CheckResult",
    "Report",
    "Scenario",
    "builtin_names",
    "load_builtin",
    "load_scenario",
    "run_scenario",
    "KernelError",
]
