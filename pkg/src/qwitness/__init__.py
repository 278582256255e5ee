"""Witness-set compressibility and randomness analysis of question-derived bitstrings."""

from .classify import (
    RandomnessClass,
    RandomnessRegime,
    SchmidtSpectrum,
    classify,
    conditional_information,
    entanglement_entropy,
    schmidt,
)
from .cover import (
    CompressibilityVerdict,
    CoverKind,
    CoverSolution,
    Regime,
    compressibility_verdict,
    exact_cover,
    min_set_cover,
    paradox_detect,
    unique_witness_assignment,
)
from .errors import DomainError, QubitCapError
from .number_theory import (
    is_integer_ratio,
    is_prime,
    mobius,
    mobius_sieve,
    prime_pi,
    primes_upto,
    recurrence_orbit,
    squarefree_support,
)
from .pipeline import AnalyzeOptions, RandomnessReport, analyze, cross_check, relation_for
from .quantum import (
    CountEstimate,
    MarkedOracle,
    RegisterLayout,
    StateVector,
    apply_marking,
    grover_amplify,
    grover_iterations_optimal,
    grover_trace,
    post_select_flag,
    prepare_superposition,
    quantum_count,
)
from .sequences import (
    BitString,
    IdentityIn,
    IsComposite,
    IsEven,
    IsPrime,
    MobiusPlusOne,
    Question,
    RecurrenceMembership,
    SatisfyingSet,
    Sequence,
    answer,
    build_bitstring,
    satisfying_set,
)
from .witnesses import (
    CoverageReport,
    WitnessRelation,
    coverage_check,
    relation_composite,
    relation_identity,
    relation_mobius,
    relation_recurrence,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyzeOptions",
    "BitString",
    "CompressibilityVerdict",
    "CountEstimate",
    "CoverKind",
    "CoverSolution",
    "CoverageReport",
    "DomainError",
    "IdentityIn",
    "IsComposite",
    "IsEven",
    "IsPrime",
    "MarkedOracle",
    "MobiusPlusOne",
    "Question",
    "QubitCapError",
    "RandomnessClass",
    "RandomnessRegime",
    "RandomnessReport",
    "RecurrenceMembership",
    "Regime",
    "RegisterLayout",
    "SatisfyingSet",
    "SchmidtSpectrum",
    "Sequence",
    "StateVector",
    "WitnessRelation",
    "analyze",
    "answer",
    "apply_marking",
    "build_bitstring",
    "classify",
    "compressibility_verdict",
    "conditional_information",
    "coverage_check",
    "cross_check",
    "entanglement_entropy",
    "exact_cover",
    "grover_amplify",
    "grover_iterations_optimal",
    "grover_trace",
    "is_integer_ratio",
    "is_prime",
    "min_set_cover",
    "mobius",
    "mobius_sieve",
    "paradox_detect",
    "post_select_flag",
    "prepare_superposition",
    "prime_pi",
    "primes_upto",
    "quantum_count",
    "recurrence_orbit",
    "relation_composite",
    "relation_for",
    "relation_identity",
    "relation_mobius",
    "relation_recurrence",
    "satisfying_set",
    "schmidt",
    "squarefree_support",
    "unique_witness_assignment",
]
