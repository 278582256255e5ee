"""End-to-end analysis: from (sequence, question) to a randomness report.

The classical path (bitstring, witness relation, covers, verdict) is
authoritative; the quantum stage re-derives the marked-pair count by phase
estimation and the satisfying set by amplification, as cross-checks. The
witness deadlock, when detected, is resolved by self-pairing witnesses and
both the raw and the resolved classifications are reported.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from math import asin, sin, sqrt

from .classify import RandomnessRegime, classify, schmidt
from .cover import (
    DEFAULT_EXACT_THRESHOLD,
    CoverSolution,
    CompressibilityVerdict,
    Regime,
    compressibility_verdict,
    exact_cover,
    min_set_cover,
    paradox_detect,
    unique_witness_assignment,
)
from .errors import DomainError, QubitCapError
from .quantum import (
    DEFAULT_PHASE_BITS,
    DEFAULT_QUBIT_CAP,
    CountEstimate,
    MarkedOracle,
    RegisterLayout,
    apply_marking,
    classical_marked_count,
    counting_error_bound,
    grover_iterations_optimal,
    grover_trace,
    post_select_flag,
    prepare_superposition,
    quantum_count,
)
from .sequences import (
    IdentityIn,
    IsComposite,
    IsEven,
    IsPrime,
    MobiusPlusOne,
    Question,
    RecurrenceMembership,
    Sequence,
    build_bitstring,
    satisfying_set,
)
from .witnesses import (
    WitnessRelation,
    coverage_check,
    relation_composite,
    relation_identity,
    relation_mobius,
    relation_recurrence,
)

APPLIED_PREFACTOR = "1/sqrt(n*m)"
NOMINAL_PREFACTOR = "1/sqrt(2^(n+m))"


@dataclass(frozen=True)
class AnalyzeOptions:
    qubit_cap: int = DEFAULT_QUBIT_CAP
    phase_bits: int = DEFAULT_PHASE_BITS
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD
    run_quantum: bool = True


@dataclass(frozen=True)
class RelationSummary:
    oracle: str
    target_count: int
    candidate_count: int
    uncovered: tuple[int, ...]
    multiply_witnessed_targets: int
    shared_witnesses: int
    oracle_matches_question: bool


@dataclass(frozen=True)
class ClassifiedState:
    basis: str  # oracle | assigned | resolved | trivial-empty
    regime: str
    entropy_bits: float
    schmidt_rank: int
    schmidt_coefficients: tuple[float, ...]
    blocks: tuple[tuple[int, tuple[int, ...]], ...] | None


@dataclass(frozen=True)
class QuantumBlock:
    skipped: bool
    reason: str | None = None
    s_qubits: int | None = None
    w_qubits: int | None = None
    total_qubits: int | None = None
    support: int | None = None
    marked_pairs: int | None = None
    shortcut_count: int | None = None  # classical tally; not a quantum result
    counting: CountEstimate | None = None
    grover_iterations: int | None = None
    grover_success: float | None = None
    grover_closed_form: float | None = None
    post_support_matches_pairs: bool | None = None
    applied_prefactor: str = APPLIED_PREFACTOR
    nominal_prefactor: str = NOMINAL_PREFACTOR


@dataclass(frozen=True)
class RandomnessReport:
    sequence_label: str
    sequence_elements: tuple[int, ...]
    question: str
    bitstring: str
    bit_popcount: int
    q: int  # target count of the witness relation (what the oracle marks)
    relation: RelationSummary
    min_cover: CoverSolution
    exact_cover_solution: CoverSolution
    assignment_exists: bool
    assignment: tuple[tuple[int, int], ...] | None
    paradox: bool
    paradox_narrative: str
    resolution_applied: bool
    verdict: CompressibilityVerdict
    compression_ratio: Fraction | None
    quantum: QuantumBlock
    randomness: ClassifiedState | None
    randomness_raw: ClassifiedState | None
    randomness_assigned: ClassifiedState | None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        """Canonical, JSON-ready view with a stable field order."""

        def cover_dict(sol: CoverSolution) -> dict:
            return {
                "kind": sol.kind.value,
                "m": sol.m,
                "chosen": list(sol.chosen),
                "certificate": sol.certificate,
            }

        def class_dict(cls: ClassifiedState | None) -> dict | None:
            if cls is None:
                return None
            return {
                "basis": cls.basis,
                "regime": cls.regime,
                "entropy_bits": cls.entropy_bits,
                "schmidt_rank": cls.schmidt_rank,
                "schmidt_coefficients": list(cls.schmidt_coefficients),
                "blocks": None
                if cls.blocks is None
                else [[w, list(elems)] for w, elems in cls.blocks],
            }

        counting = self.quantum.counting
        return {
            "sequence": {
                "label": self.sequence_label,
                "length": len(self.sequence_elements),
                "elements": list(self.sequence_elements),
            },
            "question": self.question,
            "bitstring": self.bitstring,
            "bit_popcount": self.bit_popcount,
            "q": self.q,
            "witness_relation": {
                "oracle": self.relation.oracle,
                "target_count": self.relation.target_count,
                "candidate_count": self.relation.candidate_count,
                "uncovered": list(self.relation.uncovered),
                "multiply_witnessed_targets": self.relation.multiply_witnessed_targets,
                "shared_witnesses": self.relation.shared_witnesses,
                "oracle_matches_question": self.relation.oracle_matches_question,
            },
            "covers": {
                "min_cover": cover_dict(self.min_cover),
                "exact_cover": cover_dict(self.exact_cover_solution),
                "unique_witness_assignment": {
                    "exists": self.assignment_exists,
                    "assignment": None
                    if self.assignment is None
                    else [[t, w] for t, w in self.assignment],
                },
            },
            "paradox": {
                "detected": self.paradox,
                "narrative": self.paradox_narrative,
                "resolution_applied": self.resolution_applied,
            },
            "compressibility": {
                "m": self.verdict.m,
                "q": self.verdict.q,
                "regime": self.verdict.regime.value,
                "paradox": self.verdict.paradox,
                "notes": self.verdict.notes,
                "compression_ratio": None
                if self.compression_ratio is None
                else {
                    "num": self.compression_ratio.numerator,
                    "den": self.compression_ratio.denominator,
                },
            },
            "quantum": {
                "skipped": self.quantum.skipped,
                "reason": self.quantum.reason,
                "s_qubits": self.quantum.s_qubits,
                "w_qubits": self.quantum.w_qubits,
                "total_qubits": self.quantum.total_qubits,
                "support": self.quantum.support,
                "marked_pairs": self.quantum.marked_pairs,
                "classical_shortcut_count": self.quantum.shortcut_count,
                "counting": None
                if counting is None
                else {
                    "estimated_m": counting.estimated_m,
                    "phase_bits": counting.phase_bits,
                    "phase": {
                        "num": counting.phase.numerator,
                        "den": counting.phase.denominator,
                    },
                    "probability": counting.probability,
                    "exact": counting.exact,
                },
                "grover": {
                    "iterations": self.quantum.grover_iterations,
                    "success_probability": self.quantum.grover_success,
                    "closed_form": self.quantum.grover_closed_form,
                },
                "post_support_matches_pairs": self.quantum.post_support_matches_pairs,
                "prefactor": {
                    "applied": self.quantum.applied_prefactor,
                    "nominal": self.quantum.nominal_prefactor,
                },
            },
            "randomness": {
                "primary": class_dict(self.randomness),
                "raw": class_dict(self.randomness_raw),
                "assigned": class_dict(self.randomness_assigned),
            },
            "notes": list(self.notes),
        }


def relation_for(
    seq: Sequence, question: Question, satisfying
) -> tuple[WitnessRelation, bool]:
    """The witness relation a question induces, plus whether its target set
    coincides with the question's ground truth."""
    if isinstance(question, RecurrenceMembership):
        # congruence oracle: marks residues, not orbit members
        return relation_recurrence(seq, question.p, question.q), False
    if isinstance(question, IsComposite):
        return relation_composite(seq), True
    if isinstance(question, MobiusPlusOne):
        return relation_mobius(seq), True
    if isinstance(question, IsEven):
        return relation_recurrence(seq, 2, 0), True
    if isinstance(question, (IsPrime, IdentityIn)):
        return relation_identity(satisfying), True
    raise DomainError(f"no witness relation defined for {question!r}")


def _post_selected(s_values, relation: WitnessRelation, cap: int):
    """Post-selected marked state of a relation, or (None, reason)."""
    if not relation.candidates:
        return None, "no candidate witnesses"
    if not relation.pairs():
        return None, "nothing is marked"
    try:
        RegisterLayout.for_values(s_values, relation.candidates, cap)
    except QubitCapError as exc:
        return None, str(exc)
    oracle = MarkedOracle.from_relation(s_values, relation)
    state = post_select_flag(apply_marking(prepare_superposition(s_values, relation.candidates, cap), oracle))
    return state, None


def _classified(state, relation: WitnessRelation, basis: str) -> ClassifiedState:
    cls = classify(state, relation)
    spectrum = schmidt(state)
    return ClassifiedState(
        basis=basis,
        regime=cls.regime.value,
        entropy_bits=cls.entropy_bits,
        schmidt_rank=spectrum.rank,
        schmidt_coefficients=spectrum.coefficients,
        blocks=cls.blocks,
    )


_TRIVIAL_EMPTY = ClassifiedState(
    basis="trivial-empty",
    regime=RandomnessRegime.NO_RANDOMNESS.value,
    entropy_bits=0.0,
    schmidt_rank=0,
    schmidt_coefficients=(),
    blocks=(),
)


def _run_quantum(seq: Sequence, relation: WitnessRelation, options: AnalyzeOptions):
    """Counting + amplification cross-checks; returns (block, post-selected state)."""
    if not options.run_quantum:
        return QuantumBlock(skipped=True, reason="disabled by options"), None
    if not relation.candidates:
        return QuantumBlock(skipped=True, reason="no candidate witnesses"), None
    try:
        layout = RegisterLayout.for_values(seq.elements, relation.candidates, options.qubit_cap)
    except QubitCapError as exc:
        return QuantumBlock(skipped=True, reason=str(exc)), None
    oracle = MarkedOracle.from_relation(seq.elements, relation)
    n_support = oracle.support
    m_marked = classical_marked_count(oracle)
    counting = quantum_count(oracle, n_support, options.phase_bits)
    if m_marked == 0:
        return (
            QuantumBlock(
                skipped=False,
                s_qubits=layout.s_qubits,
                w_qubits=layout.w_qubits,
                total_qubits=layout.total_qubits,
                support=n_support,
                marked_pairs=0,
                shortcut_count=0,
                counting=counting,
            ),
            None,
        )
    iterations = grover_iterations_optimal(n_support, m_marked)
    prepared = prepare_superposition(seq.elements, relation.candidates, options.qubit_cap)
    trace = grover_trace(prepared, oracle, iterations)
    theta = asin(sqrt(m_marked / n_support))
    closed_form = sin((2 * iterations + 1) * theta) ** 2
    post = post_select_flag(apply_marking(prepared, oracle))
    post_pairs = {(s, w) for s, w, _f, _a in post.nonzero_pairs()}
    block = QuantumBlock(
        skipped=False,
        s_qubits=layout.s_qubits,
        w_qubits=layout.w_qubits,
        total_qubits=layout.total_qubits,
        support=n_support,
        marked_pairs=m_marked,
        shortcut_count=m_marked,
        counting=counting,
        grover_iterations=iterations,
        grover_success=trace[-1],
        grover_closed_form=closed_form,
        post_support_matches_pairs=post_pairs == set(relation.pairs()),
    )
    return block, post


def _assigned_relation(
    restricted: WitnessRelation,
    assignment: dict[int, int] | None,
    cover: CoverSolution,
) -> WitnessRelation | None:
    """One witness per target: the injective assignment when it exists, else
    the smallest chosen cover witness of each target."""
    if not restricted.targets:
        return None
    index = {w: j for j, w in enumerate(restricted.candidates)}
    rows = []
    if assignment is not None:
        for t in restricted.targets:
            rows.append((index[assignment[t]],))
    else:
        chosen = set(cover.chosen)
        for t, row in zip(restricted.targets, restricted.incidence):
            usable = [restricted.candidates[j] for j in row if restricted.candidates[j] in chosen]
            if not usable:
                return None
            rows.append((index[min(usable)],))
    return WitnessRelation(
        targets=restricted.targets,
        candidates=restricted.candidates,
        incidence=tuple(rows),
        oracle_descriptor=restricted.oracle_descriptor + " (one witness per target)",
    )


@contextmanager
def _stage(name: str):
    """Attribute domain errors to the pipeline stage raising them."""
    try:
        yield
    except DomainError as exc:
        raise DomainError(f"{name} stage: {exc}") from exc


def analyze(
    seq: Sequence, question: Question, options: AnalyzeOptions = AnalyzeOptions()
) -> RandomnessReport:
    """Run the whole pipeline and assemble the report."""
    with _stage("bitstring"):
        bits = build_bitstring(seq, question)
        satisfying = satisfying_set(seq, question)
    with _stage("witness relation"):
        relation, faithful = relation_for(seq, question, satisfying)
        coverage = coverage_check(relation)
    notes: list[str] = []
    if coverage.uncovered:
        notes.append(
            f"uncovered targets {list(coverage.uncovered)} excluded from minimization"
        )
    restricted = (
        relation.restrict_targets(set(relation.targets) - set(coverage.uncovered))
        if coverage.uncovered
        else relation
    )

    with _stage("minimization"):
        min_cov = min_set_cover(restricted, options.exact_threshold)
        exact_cov = exact_cover(restricted)
        uwa_ok, assignment = unique_witness_assignment(restricted)
        paradox, narrative = paradox_detect(restricted, options.exact_threshold)
        verdict = compressibility_verdict(
            restricted, len(restricted.targets), options.exact_threshold
        )

    resolution_applied = False
    resolved_relation = None
    if paradox:
        resolution_applied = True
        resolved_relation = relation_identity(satisfying)
        verdict = CompressibilityVerdict(
            m=satisfying.q,
            q=satisfying.q,
            regime=Regime.INCOMPRESSIBLE,
            paradox=True,
            notes=f"witness deadlock: {narrative}; resolved by self-pairing witnesses",
        )
        notes.append("self-pairing resolution applied over the full satisfying set")

    ratio = Fraction(verdict.m, verdict.q) if verdict.q else None

    with _stage("quantum"):
        quantum_block, raw_state = _run_quantum(seq, relation, options)

    raw_class = None
    assigned_class = None
    cover_class = None
    primary = None
    with _stage("classification"):
        if raw_state is not None:
            raw_class = _classified(raw_state, relation, basis="oracle")
        if (
            options.run_quantum
            and raw_class is not None
            and raw_class.regime == RandomnessRegime.NON_CANONICAL.value
        ):
            # two one-witness-per-element readings of a multi-witness support:
            # the injective assignment when it saturates, and the cover-based
            # choice, whose block structure always agrees with the verdict
            def classify_sub(sub, label):
                if sub is None:
                    return None
                state, reason = _post_selected(seq.elements, sub, options.qubit_cap)
                if state is None:
                    notes.append(f"{label} classification skipped: {reason}")
                    return None
                return _classified(state, sub, basis="assigned")

            cover_class = classify_sub(
                _assigned_relation(restricted, None, min_cov), "assigned"
            )
            if uwa_ok:
                assigned_class = classify_sub(
                    _assigned_relation(restricted, assignment, min_cov), "assigned"
                )
            else:
                assigned_class = cover_class
        if not relation.pairs() and satisfying.q == 0:
            primary = _TRIVIAL_EMPTY
        elif options.run_quantum:
            if resolution_applied:
                state, reason = _post_selected(
                    seq.elements, resolved_relation, options.qubit_cap
                )
                if state is not None:
                    primary = _classified(state, resolved_relation, basis="resolved")
                else:
                    notes.append(f"resolved classification skipped: {reason}")
            elif raw_class is not None and raw_class.regime != RandomnessRegime.NON_CANONICAL.value:
                primary = raw_class
            else:
                primary = cover_class
            if primary is None and raw_state is None and not quantum_block.skipped:
                notes.append("classification skipped: no marked support")
        else:
            notes.append("classification skipped: quantum stage disabled")

    summary = RelationSummary(
        oracle=relation.oracle_descriptor,
        target_count=len(relation.targets),
        candidate_count=len(relation.candidates),
        uncovered=coverage.uncovered,
        multiply_witnessed_targets=len(coverage.multiply_witnessed),
        shared_witnesses=len(coverage.shared_witnesses),
        oracle_matches_question=faithful,
    )
    return RandomnessReport(
        sequence_label=seq.label,
        sequence_elements=seq.elements,
        question=question.describe(),
        bitstring=bits.text(),
        bit_popcount=bits.popcount(),
        q=len(relation.targets),
        relation=summary,
        min_cover=min_cov,
        exact_cover_solution=exact_cov,
        assignment_exists=uwa_ok,
        assignment=None if assignment is None else tuple(assignment.items()),
        paradox=paradox,
        paradox_narrative=narrative,
        resolution_applied=resolution_applied,
        verdict=verdict,
        compression_ratio=ratio,
        quantum=quantum_block,
        randomness=primary,
        randomness_raw=raw_class,
        randomness_assigned=assigned_class,
        notes=tuple(notes),
    )


def cross_check(report: RandomnessReport) -> list[str]:
    """Consistency findings; an empty list means every check passed.

    A skipped quantum stage contributes an informational note, not an error.
    """
    findings: list[str] = []
    v = report.verdict
    expected = (
        Regime.COMPRESSIBLE
        if v.m < v.q
        else Regime.INCOMPRESSIBLE
        if v.m == v.q
        else Regime.OVERCOMPLETE
    )
    if v.regime is not expected:
        findings.append(f"regime inconsistent with m,q: {v.regime.value} for m={v.m}, q={v.q}")

    if (
        report.relation.oracle_matches_question
        and not report.relation.uncovered
        and report.bit_popcount != report.q
    ):
        findings.append(
            f"bitstring popcount {report.bit_popcount} differs from target count {report.q}"
        )

    qb = report.quantum
    if qb.skipped:
        findings.append(f"quantum stage skipped: {qb.reason}")
        return findings

    if qb.counting is not None:
        est = qb.counting.estimated_m
        if qb.counting.exact:
            if est != qb.marked_pairs:
                findings.append(
                    f"exact counting estimate {est} differs from marked pairs {qb.marked_pairs}"
                )
        else:
            bound = counting_error_bound(qb.support, qb.marked_pairs, qb.counting.phase_bits)
            if abs(est - qb.marked_pairs) > bound:
                findings.append(
                    f"counting estimate {est} outside the error bound {bound} "
                    f"around {qb.marked_pairs}"
                )
    if qb.grover_success is not None and abs(qb.grover_success - qb.grover_closed_form) > 1e-9:
        findings.append("amplified probability deviates from the closed form")
    if qb.post_support_matches_pairs is False:
        findings.append("post-selected support differs from the relation's marked pairs")

    primary = report.randomness
    if primary is not None and primary.basis != "trivial-empty":
        if primary.regime == RandomnessRegime.NO_RANDOMNESS.value and v.m != 1:
            findings.append(f"NoRandomness requires m = 1, got m = {v.m}")
        if primary.regime == RandomnessRegime.MAXIMAL.value and v.m != v.q:
            findings.append(f"Maximal requires m = q, got m = {v.m}, q = {v.q}")
    return findings
