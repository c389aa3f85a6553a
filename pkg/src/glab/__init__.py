"""Finite groupoids, their reduced C*-algebras, Schur multipliers and structure checks."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import (
    ArrowFunction,
    GroupoidMismatch,
    RepBlock,
    SubspaceBasis,
    adjoint,
    algebra_closure,
    bimodule_closure,
    conditional_expectation,
    convolve,
    decompose_partition_of_unity,
    delta,
    fourier_coefficients,
    from_coeffs,
    indicator,
    is_normalizer,
    normalizer_from_bisection,
    random_function,
    reduced_norm,
    rep_block,
    rep_blocks,
    sup_norm,
    support,
)
from .gamma2 import Gamma2Error, Gamma2Result, gamma2
from .groupoid import (
    CapExceeded,
    FiniteGroupoid,
    GroupAction,
    GroupoidError,
    cover_by_bisections,
    cyclic_group,
    disjoint_union,
    enumerate_subgroupoids,
    equivalence_relation,
    group_groupoid,
    invariant_subsets,
    is_bisection,
    is_principal,
    is_subgroupoid,
    isotropy,
    pair_groupoid,
    restrict,
    symmetric_group,
    transformation_groupoid,
    trivial_groupoid,
    validate_groupoid,
)
from .multipliers import (
    CBNorm,
    FejerNet,
    MultiplierSymbol,
    UnitMeasure,
    apply_multiplier,
    average_multiplier,
    check_bounded_fejer,
    check_fejer_net,
    lift_group_multiplier,
    multiplier_cb_norm,
    multiplier_op_norm,
    schur_symbol,
    weak_amenability_certificate,
)
from .theorems import (
    NonPrincipalWarning,
    Report,
    bimodule_spectrum,
    check_bimodule_theorem,
    check_fejer_implies_inner_exact,
    check_galois,
    check_inner_exact,
    check_support_containment,
    functions_supported_in,
    galois_extract,
    intermediate_algebra_census,
)
