"""Minimum set cover, exact cover, matchings, and the compressibility verdict.

The minimum-witness problem splits into two formal problems: the smallest set
of witnesses covering every target (set cover), and the smallest covering
every target exactly once (exact cover). Their divergence on a relation is
what ``paradox_detect`` reports; the verdict resolves it by falling back to
self-pairing witnesses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import ceil

from .errors import DomainError
from .witnesses import WitnessRelation, coverage_check

DEFAULT_EXACT_THRESHOLD = 24


class CoverKind(enum.Enum):
    EXACT_MINIMUM = "ExactMinimumCover"
    GREEDY = "GreedyCover"
    EXACT_COVER = "ExactCover"
    NO_COVER = "NoCoverExists"


class Regime(enum.Enum):
    COMPRESSIBLE = "Compressible"
    INCOMPRESSIBLE = "Incompressible"
    OVERCOMPLETE = "Overcomplete"


@dataclass(frozen=True)
class CoverSolution:
    chosen: tuple[int, ...]  # witness values, ascending
    m: int
    kind: CoverKind
    certificate: str = ""

    def __post_init__(self):
        if self.m != len(self.chosen):
            raise DomainError("cover size must equal the number of chosen witnesses")


@dataclass(frozen=True)
class CompressibilityVerdict:
    m: int
    q: int
    regime: Regime
    paradox: bool
    notes: str = ""


def _masks(rel: WitnessRelation) -> tuple[int, list[int]]:
    """Per-candidate bitmask of covered target indices, plus the full mask."""
    masks = [0] * len(rel.candidates)
    for i, row in enumerate(rel.incidence):
        for j in row:
            masks[j] |= 1 << i
    return (1 << len(rel.targets)) - 1, masks


def _require_covered(rel: WitnessRelation) -> None:
    uncovered = coverage_check(rel).uncovered
    if uncovered:
        raise DomainError(
            f"target {uncovered[0]} has no witness; remove uncovered targets first"
        )


def _greedy_cover(full: int, masks: list[int], values) -> list[int]:
    covered = 0
    chosen: list[int] = []
    while covered != full:
        best, best_gain = None, 0
        for j, mask in enumerate(masks):
            gain = (mask & ~covered).bit_count()
            if gain > best_gain or (gain == best_gain and gain and values[j] < values[best]):
                best, best_gain = j, gain
        if best_gain == 0:
            raise DomainError("greedy cover stuck on an uncoverable target")
        chosen.append(best)
        covered |= masks[best]
    return chosen


def _min_cover_size(full: int, masks: list[int], upper: int) -> int:
    """Exact minimum cover size by branch and bound with a coverage lower bound."""
    order = sorted(range(len(masks)), key=lambda j: -masks[j].bit_count())
    masks_o = [masks[j] for j in order]
    best = upper

    def covering_of(bit: int) -> list[int]:
        return [j for j, m in enumerate(masks_o) if m >> bit & 1]

    def dfs(covered: int, used: int) -> None:
        nonlocal best
        if covered == full:
            best = min(best, used)
            return
        if used + 1 >= best:
            return
        remaining = full & ~covered
        max_gain = max((m & remaining).bit_count() for m in masks_o)
        if max_gain == 0:
            return
        if used + ceil(remaining.bit_count() / max_gain) >= best:
            return
        # branch on the scarcest uncovered target
        bit, scarcity = -1, None
        r = remaining
        while r:
            b = (r & -r).bit_length() - 1
            n = sum(1 for m in masks_o if m >> b & 1)
            if scarcity is None or n < scarcity:
                bit, scarcity = b, n
            r &= r - 1
        for j in sorted(covering_of(bit), key=lambda j: -(masks_o[j] & remaining).bit_count()):
            dfs(covered | masks_o[j], used + 1)

    dfs(0, 0)
    return best


def _lexmin_cover(full: int, masks: list[int], size: int) -> list[int] | None:
    """Lexicographically smallest cover of exactly ``size`` candidates.

    Candidates are assumed sorted ascending by witness value, so an
    include-first depth-first search yields the smallest chosen tuple.
    """
    n = len(masks)
    suffix_union = [0] * (n + 1)
    for j in range(n - 1, -1, -1):
        suffix_union[j] = suffix_union[j + 1] | masks[j]

    def dfs(j: int, covered: int, chosen: list[int]) -> list[int] | None:
        if covered == full:
            return list(chosen)
        if j == n or len(chosen) == size:
            return None
        if covered | suffix_union[j] != full:
            return None
        remaining = full & ~covered
        max_gain = max((masks[k] & remaining).bit_count() for k in range(j, n))
        if max_gain == 0 or len(chosen) + ceil(remaining.bit_count() / max_gain) > size:
            return None
        chosen.append(j)
        hit = dfs(j + 1, covered | masks[j], chosen)
        if hit is not None:
            return hit
        chosen.pop()
        return dfs(j + 1, covered, chosen)

    return dfs(0, 0, [])


def min_set_cover(
    rel: WitnessRelation, exact_threshold: int = DEFAULT_EXACT_THRESHOLD
) -> CoverSolution:
    """Minimum-cardinality witness subset covering all targets.

    Exact (branch and bound, lexicographically smallest witness set) up to
    ``exact_threshold`` targets; greedy above it, and tagged as such so a
    heuristic result is never presented as optimal.
    """
    _require_covered(rel)
    if not rel.targets:
        return CoverSolution((), 0, CoverKind.EXACT_MINIMUM, "empty target set")
    full, masks = _masks(rel)
    values = rel.candidates
    if len(rel.targets) > exact_threshold:
        chosen = _greedy_cover(full, masks, values)
        return CoverSolution(
            tuple(sorted(values[j] for j in chosen)),
            len(chosen),
            CoverKind.GREEDY,
            f"heuristic: {len(rel.targets)} targets exceed the exactness threshold "
            f"{exact_threshold}",
        )
    greedy = _greedy_cover(full, masks, values)
    size = _min_cover_size(full, masks, upper=len(greedy))
    chosen = _lexmin_cover(full, masks, size)
    assert chosen is not None and len(chosen) == size
    return CoverSolution(
        tuple(values[j] for j in chosen),
        size,
        CoverKind.EXACT_MINIMUM,
        "branch-and-bound proved no smaller cover exists",
    )


def exact_cover(rel: WitnessRelation) -> CoverSolution:
    """Smallest witness subset covering every target exactly once, if any.

    Exhaustive backtracking over disjoint candidate masks; returns
    NoCoverExists when single coverage is impossible.
    """
    _require_covered(rel)
    if not rel.targets:
        return CoverSolution((), 0, CoverKind.EXACT_COVER, "empty target set")
    full, masks = _masks(rel)
    values = rel.candidates
    best: list[int] | None = None

    def dfs(covered: int, chosen: list[int]) -> None:
        nonlocal best
        if covered == full:
            pick = sorted(values[j] for j in chosen)
            if best is None or (len(pick), pick) < (len(best), best):
                best = pick
            return
        if best is not None and len(chosen) + 1 > len(best):
            return
        remaining = full & ~covered
        bit = (remaining & -remaining).bit_length() - 1
        usable = [j for j, m in enumerate(masks) if (m >> bit & 1) and not (m & covered)]
        for j in usable:
            chosen.append(j)
            dfs(covered | masks[j], chosen)
            chosen.pop()

    dfs(0, [])
    if best is None:
        return CoverSolution(
            (), 0, CoverKind.NO_COVER, "every covering subset covers some target twice"
        )
    return CoverSolution(tuple(best), len(best), CoverKind.EXACT_COVER)


def unique_witness_assignment(
    rel: WitnessRelation,
) -> tuple[bool, dict[int, int] | None]:
    """Injective target-to-witness assignment saturating all targets, if one exists.

    Augmenting-path maximum matching; returns (True, {target: witness}) when
    the matching saturates every target.
    """
    match_of: dict[int, int] = {}  # candidate index -> target index

    def augment(i: int, seen: set[int]) -> bool:
        for j in rel.incidence[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_of or augment(match_of[j], seen):
                match_of[j] = i
                return True
        return False

    matched = sum(augment(i, set()) for i in range(len(rel.targets)))
    if matched != len(rel.targets):
        return False, None
    assignment = {rel.targets[i]: rel.candidates[j] for j, i in match_of.items()}
    return True, dict(sorted(assignment.items()))


def _simulate_discard(rel: WitnessRelation) -> tuple[bool, str]:
    """Replay the discard rule: drop redundant witnesses until single coverage.

    Only witnesses whose removal strands nobody are discarded (smallest first,
    scanning targets ascending). Returns (reached single coverage, narrative).
    """
    active: dict[int, set[int]] = {
        t: set(rel.candidates[j] for j in row)
        for t, row in zip(rel.targets, rel.incidence)
    }
    discarded: list[int] = []
    while True:
        multi = [t for t in rel.targets if len(active[t]) > 1]
        if not multi:
            kept = sorted({w for ws in active.values() for w in ws})
            chain = f"discarded {discarded}" if discarded else "nothing to discard"
            return True, f"{chain}; single coverage reached with witnesses {kept}"
        progressed = False
        for t in multi:
            for w in sorted(active[t]):
                stranded = [u for u, ws in active.items() if ws == {w}]
                if stranded:
                    continue
                for ws in active.values():
                    ws.discard(w)
                discarded.append(w)
                progressed = True
                break
            if progressed:
                break
        if not progressed:
            t = multi[0]
            blockers = "; ".join(
                f"discarding {w} strands {sorted(u for u, ws in active.items() if ws == {w})}"
                for w in sorted(active[t])
            )
            prefix = f"after discarding {discarded}, " if discarded else ""
            return False, (
                f"{prefix}target {t} still holds witnesses "
                f"{sorted(active[t])}: {blockers}"
            )


def paradox_detect(
    rel: WitnessRelation, exact_threshold: int = DEFAULT_EXACT_THRESHOLD
) -> tuple[bool, str]:
    """Detect the witness deadlock: cover says compress, discard rule cannot.

    True iff the minimum cover is smaller than the target count (a shared
    witness exists), every target is multiply witnessed (an apparent excess),
    and yet no exact cover smaller than the target count exists, so the
    discard rule strands targets instead of shrinking the pool.
    """
    _require_covered(rel)
    if not rel.targets:
        return False, "no targets"
    least = min(len(row) for row in rel.incidence)
    if least < 2:
        t = next(t for t, row in zip(rel.targets, rel.incidence) if len(row) == least)
        return False, f"target {t} has a single witness; nothing to discard there"
    q = len(rel.targets)
    cover = min_set_cover(rel, exact_threshold)
    if cover.m >= q:
        return False, f"minimum cover {cover.m} is not below the target count {q}"
    exact = exact_cover(rel)
    if exact.kind is CoverKind.EXACT_COVER and exact.m < q:
        return False, (
            f"exact cover {list(exact.chosen)} reaches single coverage with "
            f"{exact.m} < {q} witnesses"
        )
    _, narrative = _simulate_discard(rel)
    return True, narrative


def compressibility_verdict(
    rel: WitnessRelation, q: int, exact_threshold: int = DEFAULT_EXACT_THRESHOLD
) -> CompressibilityVerdict:
    """Compare the witness count m against q and name the regime.

    A detected deadlock is resolved the only way the construction allows:
    every target witnesses itself, so m becomes q and the bitstring counts as
    incompressible.
    """
    if q != len(rel.targets):
        raise DomainError(
            f"q = {q} does not match the relation's {len(rel.targets)} targets"
        )
    if not rel.targets:
        return CompressibilityVerdict(
            0, 0, Regime.INCOMPRESSIBLE, False, "empty target set; trivially settled"
        )
    paradox, narrative = paradox_detect(rel, exact_threshold)
    if paradox:
        return CompressibilityVerdict(
            q,
            q,
            Regime.INCOMPRESSIBLE,
            True,
            f"witness deadlock: {narrative}; resolved by self-pairing witnesses",
        )
    cover = min_set_cover(rel, exact_threshold)
    if cover.m < q:
        regime = Regime.COMPRESSIBLE
    elif cover.m == q:
        regime = Regime.INCOMPRESSIBLE
    else:
        regime = Regime.OVERCOMPLETE
    note = "" if cover.kind is CoverKind.EXACT_MINIMUM else f"cover is {cover.kind.value}"
    return CompressibilityVerdict(cover.m, q, regime, False, note)
