import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwitness.cover import (
    CoverKind,
    Regime,
    compressibility_verdict,
    exact_cover,
    min_set_cover,
    paradox_detect,
    unique_witness_assignment,
)
from qwitness.errors import DomainError
from qwitness.number_theory import squarefree_support
from qwitness.sequences import SatisfyingSet, Sequence
from qwitness.witnesses import (
    WitnessRelation,
    relation_composite,
    relation_identity,
    relation_mobius,
    relation_recurrence,
)


def make_relation(targets, candidates, rows):
    """rows maps target -> iterable of witness values."""
    index = {w: j for j, w in enumerate(candidates)}
    return WitnessRelation(
        targets=tuple(targets),
        candidates=tuple(candidates),
        incidence=tuple(tuple(sorted(index[w] for w in rows[t])) for t in targets),
        oracle_descriptor="test fixture",
    )


MOBIUS_TRIPLE = make_relation(
    (15, 21, 35), (3, 5, 7), {15: (3, 5), 21: (3, 7), 35: (5, 7)}
)


def brute_force_min_cover(rel):
    values = rel.candidates
    rows = [set(rel.candidates[j] for j in row) for row in rel.incidence]
    for size in range(len(values) + 1):
        for sub in itertools.combinations(values, size):
            picked = set(sub)
            if all(row & picked for row in rows):
                return size
    return None


def brute_force_exact_covers(rel):
    values = rel.candidates
    rows = [set(rel.candidates[j] for j in row) for row in rel.incidence]
    out = []
    for size in range(len(values) + 1):
        for sub in itertools.combinations(values, size):
            picked = set(sub)
            if all(len(row & picked) == 1 for row in rows):
                out.append(sub)
    return out


def random_relation(rng, max_targets=12, max_candidates=12):
    nt = rng.randint(1, max_targets)
    nc = rng.randint(1, max_candidates)
    targets = tuple(range(1, nt + 1))
    candidates = tuple(range(101, 101 + nc))
    rows = {}
    for t in targets:
        k = rng.randint(1, nc)
        rows[t] = rng.sample(candidates, k)
    return make_relation(targets, candidates, rows)


class TestMinSetCover:
    def test_mobius_triple(self):
        sol = min_set_cover(MOBIUS_TRIPLE)
        assert sol.m == 2
        assert sol.chosen == (3, 5)  # lexicographically smallest of the size-2 covers
        assert sol.kind is CoverKind.EXACT_MINIMUM

    def test_identity_forces_full_set(self):
        sol = min_set_cover(relation_identity(SatisfyingSet((1, 6, 10, 14))))
        assert sol.m == 4
        assert sol.chosen == (1, 6, 10, 14)

    def test_composite_100(self):
        sol = min_set_cover(relation_composite(Sequence.from_range(2, 100)))
        assert sol.m == 4
        assert sol.chosen == (2, 3, 5, 7)

    def test_uncovered_target_rejected_by_name(self):
        rel = relation_mobius(Sequence.from_values(squarefree_support(10), "sf"))
        with pytest.raises(DomainError, match="target 1"):
            min_set_cover(rel)

    def test_greedy_above_threshold(self):
        rel = relation_composite(Sequence.from_range(2, 100))
        sol = min_set_cover(rel, exact_threshold=10)
        assert sol.kind is CoverKind.GREEDY
        assert sol.m >= 4  # never better than the optimum

    def test_empty_targets(self):
        sol = min_set_cover(relation_identity(SatisfyingSet(())))
        assert sol.m == 0 and sol.kind is CoverKind.EXACT_MINIMUM

    def test_matches_brute_force_on_random_corpus(self):
        rng = random.Random(7)
        for _ in range(60):
            rel = random_relation(rng, max_targets=8, max_candidates=8)
            sol = min_set_cover(rel)
            assert sol.m == brute_force_min_cover(rel)
            chosen = set(sol.chosen)
            for row in rel.incidence:
                assert chosen & {rel.candidates[j] for j in row}


class TestExactCover:
    def test_mobius_triple_has_none(self):
        sol = exact_cover(MOBIUS_TRIPLE)
        assert sol.kind is CoverKind.NO_COVER
        assert brute_force_exact_covers(MOBIUS_TRIPLE) == []

    def test_identity_pairing(self):
        sol = exact_cover(relation_identity(SatisfyingSet((1, 6))))
        assert sol.kind is CoverKind.EXACT_COVER
        assert sol.m == 2

    def test_shared_single_witness_wins(self):
        rel = make_relation((6, 10), (2, 3, 5), {6: (2, 3), 10: (2, 5)})
        sol = exact_cover(rel)
        assert sol.kind is CoverKind.EXACT_COVER
        assert sol.chosen == (2,)
        assert sol.m == 1

    def test_matches_brute_force_on_random_corpus(self):
        rng = random.Random(11)
        for _ in range(60):
            rel = random_relation(rng, max_targets=7, max_candidates=7)
            sol = exact_cover(rel)
            brute = brute_force_exact_covers(rel)
            if sol.kind is CoverKind.NO_COVER:
                assert brute == []
            else:
                assert brute
                assert sol.m == min(len(b) for b in brute)
                rows = [set(rel.candidates[j] for j in row) for row in rel.incidence]
                assert all(len(row & set(sol.chosen)) == 1 for row in rows)


class TestUniqueWitnessAssignment:
    def test_mobius_triple_saturates(self):
        ok, assignment = unique_witness_assignment(MOBIUS_TRIPLE)
        assert ok
        assert sorted(assignment) == [15, 21, 35]
        assert len(set(assignment.values())) == 3
        for t, w in assignment.items():
            assert w in MOBIUS_TRIPLE.witnesses_of(t)

    def test_pigeonhole_failure(self):
        rel = relation_recurrence(Sequence.from_range(1, 10), 2, 1)
        ok, assignment = unique_witness_assignment(rel)
        assert not ok and assignment is None

    def test_identity(self):
        rel = relation_identity(SatisfyingSet((3, 9)))
        ok, assignment = unique_witness_assignment(rel)
        assert ok and assignment == {3: 3, 9: 9}

    def test_agrees_with_networkx(self):
        nx = pytest.importorskip("networkx")
        rng = random.Random(13)
        for _ in range(60):
            rel = random_relation(rng)
            graph = nx.Graph()
            graph.add_nodes_from((0, t) for t in rel.targets)
            graph.add_nodes_from((1, c) for c in rel.candidates)
            for i, row in enumerate(rel.incidence):
                for j in row:
                    graph.add_edge((0, rel.targets[i]), (1, rel.candidates[j]))
            matching = nx.algorithms.bipartite.maximum_matching(
                graph, top_nodes=[(0, t) for t in rel.targets]
            )
            size = sum(1 for node in matching if node[0] == 0)
            ok, assignment = unique_witness_assignment(rel)
            assert ok == (size == len(rel.targets))
            if ok:
                assert len(assignment) == len(rel.targets)
                assert len(set(assignment.values())) == len(rel.targets)


class TestParadoxDetect:
    def test_mobius_triple(self):
        detected, narrative = paradox_detect(MOBIUS_TRIPLE)
        assert detected
        assert "strands" in narrative

    def test_composite_has_single_witness_targets(self):
        detected, narrative = paradox_detect(relation_composite(Sequence.from_range(2, 100)))
        assert not detected
        assert "single witness" in narrative

    def test_identity_never(self):
        detected, _ = paradox_detect(relation_identity(SatisfyingSet((1, 6, 10))))
        assert not detected

    def test_small_exact_cover_defuses(self):
        # every target doubly witnessed, but one witness covers all exactly once
        rel = make_relation((6, 10), (2, 3, 5), {6: (2, 3), 10: (2, 5)})
        detected, narrative = paradox_detect(rel)
        assert not detected
        assert "exact cover" in narrative

    def test_mobius_supports_beyond_thirteen(self):
        for n in (13, 20, 25):
            rel = relation_mobius(Sequence.from_values(squarefree_support(n), "sf"))
            covered = rel.restrict_targets(
                t for t, row in zip(rel.targets, rel.incidence) if row
            )
            detected, _ = paradox_detect(covered)
            assert detected, f"support({n}) should deadlock"

    def test_mobius_support_ten_does_not(self):
        rel = relation_mobius(Sequence.from_values(squarefree_support(10), "sf"))
        covered = rel.restrict_targets((6, 10, 14))
        detected, _ = paradox_detect(covered)
        assert not detected  # {2} covers each of 6, 10, 14 exactly once


class TestCompressibilityVerdict:
    def test_recurrence(self):
        rel = relation_recurrence(Sequence.from_range(1, 20), 2, 1)
        v = compressibility_verdict(rel, 10)
        assert (v.m, v.q, v.regime, v.paradox) == (1, 10, Regime.COMPRESSIBLE, False)

    def test_composite(self):
        rel = relation_composite(Sequence.from_range(2, 100))
        v = compressibility_verdict(rel, 74)
        assert (v.m, v.q, v.regime) == (4, 74, Regime.COMPRESSIBLE)

    def test_mobius_deadlock_resolves_incompressible(self):
        rel = relation_mobius(Sequence.from_values(squarefree_support(25), "sf"))
        covered = rel.restrict_targets(
            t for t, row in zip(rel.targets, rel.incidence) if row
        )
        v = compressibility_verdict(covered, len(covered.targets))
        assert v.paradox
        assert v.m == v.q == len(covered.targets)
        assert v.regime is Regime.INCOMPRESSIBLE

    def test_q_cross_checked(self):
        with pytest.raises(DomainError):
            compressibility_verdict(MOBIUS_TRIPLE, 4)

    def test_empty_relation(self):
        v = compressibility_verdict(relation_identity(SatisfyingSet(())), 0)
        assert v.m == v.q == 0
        assert v.regime is Regime.INCOMPRESSIBLE


@given(st.integers(min_value=0, max_value=2**32))
@settings(max_examples=30)
def test_random_seeds_greedy_never_beats_exact(seed):
    rng = random.Random(seed)
    rel = random_relation(rng, max_targets=7, max_candidates=7)
    exact = min_set_cover(rel)
    greedy = min_set_cover(rel, exact_threshold=0)
    assert greedy.kind is CoverKind.GREEDY
    assert greedy.m >= exact.m
    single = exact_cover(rel)
    if single.kind is CoverKind.EXACT_COVER:
        assert single.m >= exact.m
