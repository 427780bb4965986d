"""Exact-arithmetic analysis of multilinear forms and the finitely
presented bialgebras / Hopf algebras they generate, with a degree-truncated
noncommutative rewriting engine to certify identities in the quotients."""

from .exactnum import (
    Matrix,
    Scalar,
    SingularMatrixError,
    format_matrix,
    format_rational,
    is_invertible,
    kernel_basis,
    mat_inv,
    mat_mul,
    mat_vec,
    parse_rational,
    rat,
    rref,
    solve_affine,
)
from .forms import (
    AmbiguousTwistError,
    InternalConsistencyError,
    MultilinearForm,
    NotInvariantError,
    PolarSolution,
    TwistReport,
    analyze,
    base_change,
    check_condition_i_prime,
    check_invariance,
    flattening,
    in_polar,
    is_one_site_nondegenerate,
    is_q_cyclic,
    make_bilinear,
    make_orthogonal,
    make_signature,
    pi_q,
    polar,
    polar_contraction,
    q_inverse_from_polar,
    twisting_element,
)
from .ncalg import (
    Alphabet,
    Generator,
    MissingImageError,
    NcPoly,
    TensorSquare,
    coproduct_image,
    matric_family,
    parse_generator_token,
    parse_poly,
    poly_to_str,
    substitute,
)
from .rewrite import (
    NotCertifiedError,
    RewriteSystem,
    Rule,
    complete,
    ideal_member,
    normal_form,
    unresolved_overlaps,
)
from .hopf import (
    CheckResult,
    HomCandidate,
    HopfStructure,
    Presentation,
    ProbeReport,
    Provenance,
    RepresentationReport,
    Status,
    all_pass,
    bilinear_iso_suite,
    build_ahmn,
    build_bw,
    build_hb,
    build_hw,
    build_hww,
    check_antipode,
    check_coproduct,
    check_counit,
    check_hom,
    check_left_inverse_identity,
    check_representation,
    default_degree,
    derived_relations_suite,
    diagonal_iso_suite,
    hopf_axiom_suite,
    hw_to_hww_hom,
    m2_iso_homs,
    manin_suite,
    noninjectivity_probe,
    pair_reduction_suite,
    system_for,
    theta_iso_homs,
    unitriangular_free_images,
    worst_status,
)
from .formats import (
    FormFileError,
    dump_form,
    dump_presentation,
    form_from_obj,
    form_to_obj,
    load_form,
    load_form_text,
    parse_presentation,
    parse_tensor,
    save_form,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AmbiguousTwistError",
    "CheckResult",
    "FormFileError",
    "Generator",
    "HomCandidate",
    "HopfStructure",
    "InternalConsistencyError",
    "Matrix",
    "MissingImageError",
    "MultilinearForm",
    "NcPoly",
    "NotCertifiedError",
    "NotInvariantError",
    "PolarSolution",
    "Presentation",
    "ProbeReport",
    "Provenance",
    "RepresentationReport",
    "RewriteSystem",
    "Rule",
    "Scalar",
    "SingularMatrixError",
    "Status",
    "TensorSquare",
    "TwistReport",
    "all_pass",
    "analyze",
    "base_change",
    "bilinear_iso_suite",
    "build_ahmn",
    "build_bw",
    "build_hb",
    "build_hw",
    "build_hww",
    "check_antipode",
    "check_condition_i_prime",
    "check_coproduct",
    "check_counit",
    "check_hom",
    "check_invariance",
    "check_left_inverse_identity",
    "check_representation",
    "complete",
    "coproduct_image",
    "default_degree",
    "derived_relations_suite",
    "diagonal_iso_suite",
    "dump_form",
    "dump_presentation",
    "flattening",
    "form_from_obj",
    "form_to_obj",
    "format_matrix",
    "format_rational",
    "hopf_axiom_suite",
    "hw_to_hww_hom",
    "ideal_member",
    "in_polar",
    "is_invertible",
    "is_one_site_nondegenerate",
    "is_q_cyclic",
    "kernel_basis",
    "load_form",
    "load_form_text",
    "m2_iso_homs",
    "make_bilinear",
    "make_orthogonal",
    "make_signature",
    "manin_suite",
    "mat_inv",
    "mat_mul",
    "mat_vec",
    "matric_family",
    "noninjectivity_probe",
    "normal_form",
    "pair_reduction_suite",
    "parse_generator_token",
    "parse_poly",
    "parse_presentation",
    "parse_rational",
    "parse_tensor",
    "pi_q",
    "polar",
    "polar_contraction",
    "poly_to_str",
    "q_inverse_from_polar",
    "rat",
    "rref",
    "save_form",
    "solve_affine",
    "substitute",
    "system_for",
    "theta_iso_homs",
    "twisting_element",
    "unitriangular_free_images",
    "unresolved_overlaps",
    "worst_status",
    "__version__",
]
