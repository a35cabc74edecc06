"""Numerical laboratory for operator-valued kernels over finite Hilbert bundles.

The package builds minimal Hilbert and Krein linearisations of
positive-semidefinite and Hermitian kernels, reproducing-kernel views,
and representations of finite star-semigroupoids acting on the base.
Everything is finite dimensional and checked against explicit residual
tolerances; every verification returns records suitable for reports.
"""

from . import errors
from .bundle import (
    HilbertBundle,
    PartIndex,
    Section,
    delta_section,
    part_index,
    section_from_dict,
)
from .hilbert_lin import (
    HilbertLinearisation,
    HilbertRepresentation,
    RkhsView,
    invariant_representation,
    minimal_linearisation,
    partial_isometry_report,
    representation_laws,
    rkhs,
    unitary_equivalence,
    verify_factorization,
    verify_reproducing,
)
from .kernel import (
    OpKernel,
    Partition,
    adjoint_kernel,
    bounded_shift_constant,
    conv_blocks,
    dominates,
    identity_kernel,
    is_invariant,
    is_partially_hermitian,
    is_partially_psd,
    kernel_from_part_grams,
    kernel_inner,
    kernel_lincomb,
    partition_from_action,
    partition_from_anchor,
    shift_map,
    shift_maps,
    single_partition,
    zero_kernel,
)
from .krein_core import (
    InducedKrein,
    KreinSpace,
    gap_uniqueness,
    hilbert_space,
    induced_krein,
    krein_adjoint,
    krein_space,
    lift_operator,
)
from .krein_lin import (
    KreinLinearisation,
    KreinRepresentation,
    RkKreinView,
    canonical_dominant,
    fundamental_reducibility_check,
    gram_operator,
    invariant_krein_representation,
    j_unitary_equivalence,
    jordan_split,
    krein_linearisation,
    krein_representation_laws,
    rk_krein_space,
    uniqueness_report,
    verify_krein_factorization,
)
from .numlin import DEFAULT_TOL, Tolerances
from .reports import Record, Report, report_to_json, save_report
from .sgpd import (
    Classification,
    LeftAction,
    StarSemigroupoid,
    classify,
    generate,
    group_action,
    group_as_groupoid,
    pair_groupoid,
    partial_bijections,
    self_action,
    symbol_action,
    validate,
    validate_action,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "HilbertBundle", "PartIndex", "Section",
    "delta_section", "part_index", "section_from_dict",
    "OpKernel", "Partition",
    "adjoint_kernel", "bounded_shift_constant", "conv_blocks", "dominates",
    "identity_kernel", "is_invariant", "is_partially_hermitian",
    "is_partially_psd", "kernel_from_part_grams", "kernel_inner",
    "kernel_lincomb", "partition_from_action", "partition_from_anchor",
    "shift_map", "shift_maps", "single_partition", "zero_kernel",
    "HilbertLinearisation", "HilbertRepresentation", "RkhsView",
    "invariant_representation", "minimal_linearisation",
    "partial_isometry_report", "representation_laws", "rkhs",
    "unitary_equivalence", "verify_factorization", "verify_reproducing",
    "InducedKrein", "KreinSpace",
    "gap_uniqueness", "hilbert_space", "induced_krein", "krein_adjoint",
    "krein_space", "lift_operator",
    "KreinLinearisation", "KreinRepresentation", "RkKreinView",
    "canonical_dominant", "fundamental_reducibility_check", "gram_operator",
    "invariant_krein_representation", "j_unitary_equivalence", "jordan_split",
    "krein_linearisation", "krein_representation_laws", "rk_krein_space",
    "uniqueness_report", "verify_krein_factorization",
    "DEFAULT_TOL", "Tolerances",
    "Record", "Report", "report_to_json", "save_report",
    "Classification", "LeftAction", "StarSemigroupoid",
    "classify", "generate", "group_action", "group_as_groupoid",
    "pair_groupoid", "partial_bijections", "self_action", "symbol_action",
    "validate", "validate_action",
    "__version__",
]
