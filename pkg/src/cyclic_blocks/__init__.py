"""Subgroups of ``(P[n], xor)`` whose nonzero elements meet every cyclic block translate."""

from .euclid import DomainError, EuclidDecomposition, euclid_decompose, least_positive_residue
from .kernel import (
    GeneratorSet,
    TriangularityError,
    build_generator,
    build_generator_set,
    canonicalize,
    closed_form_generators,
    combo_from_indices,
    combo_indices,
    generator_set_from_json,
    span_element,
)
from .oracle import (
    OracleBudget,
    OracleResult,
    TranslateFamily,
    check_theorems,
    kernel_family,
    oracle_v,
    oracle_vbar,
)
from .subsets import (
    EmptySetError,
    SubsetMask,
    cyclic_translates,
    hits_all_blocks,
    max_cyclic_gap,
    sym_diff,
)
from .verifier import Budget, CosetReport, GuardError, VerificationReport, verify_coset_partition, verify_group

__version__ = "0.1.0"
