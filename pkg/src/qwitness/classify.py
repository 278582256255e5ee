"""Randomness regimes of the post-selected marked state.

The regime is read off the entanglement between the s and w registers across
the post-selected state. A single shared witness leaves a product state (no
randomness); one witness per element gives a maximally entangled pairing
(maximal randomness); witnesses shared by blocks of elements sit in between.
States where some element carries several witnesses fall outside that family
and are labelled NonCanonical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import log2

import numpy as np

from .errors import DomainError
from .quantum import StateVector
from .witnesses import WitnessRelation

RANK_TOL = 1e-10
_AMP_TOL = 1e-12
_UNIFORM_TOL = 1e-9


class RandomnessRegime(enum.Enum):
    NO_RANDOMNESS = "NoRandomness"
    PARTIAL = "Partial"
    MAXIMAL = "Maximal"
    NON_CANONICAL = "NonCanonical"


@dataclass(frozen=True)
class SchmidtSpectrum:
    coefficients: tuple[float, ...]  # descending singular values
    rank: int


@dataclass(frozen=True)
class RandomnessClass:
    regime: RandomnessRegime
    entropy_bits: float
    blocks: tuple[tuple[int, tuple[int, ...]], ...] | None  # (witness, elements)


def _flag_matrix(state: StateVector) -> np.ndarray:
    """Amplitudes as an (s, w) matrix on whichever flag slice carries the state."""
    layout = state.layout
    grid = state.amplitudes.reshape(1 << layout.s_qubits, 1 << layout.w_qubits, 2)
    mass = [float(np.sum(np.abs(grid[:, :, f]) ** 2)) for f in (0, 1)]
    if mass[0] > _AMP_TOL and mass[1] > _AMP_TOL:
        raise DomainError("flag register carries weight on both values; post-select first")
    if mass[0] <= _AMP_TOL and mass[1] <= _AMP_TOL:
        raise DomainError("zero state has no Schmidt decomposition")
    return grid[:, :, 1] if mass[1] > mass[0] else grid[:, :, 0]


def schmidt(state: StateVector) -> SchmidtSpectrum:
    """Singular values across the s|w cut, descending; squared sum is 1."""
    matrix = _flag_matrix(state)
    # zero rows/columns do not move singular values; trim for cheap SVDs
    rows = np.flatnonzero(np.abs(matrix).sum(axis=1) > 0)
    cols = np.flatnonzero(np.abs(matrix).sum(axis=0) > 0)
    sv = np.linalg.svd(matrix[np.ix_(rows, cols)], compute_uv=False)
    sv = np.clip(sv, 0.0, None)
    total = float(np.sum(sv**2))
    if abs(total - 1.0) > 1e-10:
        raise DomainError(f"Schmidt coefficients squared sum to {total}, not 1")
    rank = int(np.sum(sv > RANK_TOL))
    return SchmidtSpectrum(tuple(float(x) for x in sv), max(rank, 1))


def entanglement_entropy(spectrum: SchmidtSpectrum) -> float:
    """-sum(lambda * log2(lambda)) over the squared coefficients."""
    out = 0.0
    for c in spectrum.coefficients:
        lam = c * c
        if lam > 0.0:
            out -= lam * log2(lam)
    return max(out, 0.0)


def _marked_pairs(state: StateVector) -> list[tuple[int, int, complex]]:
    matrix = _flag_matrix(state)
    out = []
    for s, w in zip(*np.nonzero(np.abs(matrix) > _AMP_TOL)):
        out.append((int(s), int(w), complex(matrix[s, w])))
    return out


def classify(state: StateVector, relation: WitnessRelation) -> RandomnessClass:
    """Name the regime of a post-selected marked state.

    Blocks are recovered by grouping the occupied (s, w) pairs by witness
    value. One block is NoRandomness, all-singleton blocks are Maximal,
    anything in between is Partial. A state whose support pairs some element
    with several witnesses, or whose amplitudes are not uniform, is not of
    that family and comes back NonCanonical.
    """
    pairs = _marked_pairs(state)
    if not pairs:
        raise DomainError("empty marked support")
    allowed = set(relation.pairs())
    for s, w, _ in pairs:
        if (s, w) not in allowed:
            raise DomainError(f"occupied pair ({s}, {w}) is not marked by the relation")
    spectrum = schmidt(state)
    entropy = entanglement_entropy(spectrum)
    by_s: dict[int, set[int]] = {}
    by_w: dict[int, list[int]] = {}
    for s, w, _ in pairs:
        by_s.setdefault(s, set()).add(w)
        by_w.setdefault(w, []).append(s)
    if any(len(ws) > 1 for ws in by_s.values()):
        return RandomnessClass(RandomnessRegime.NON_CANONICAL, entropy, None)
    mags = [abs(a) for *_, a in pairs]
    if max(mags) - min(mags) > _UNIFORM_TOL:
        return RandomnessClass(RandomnessRegime.NON_CANONICAL, entropy, None)
    blocks = tuple(
        (w, tuple(sorted(elems))) for w, elems in sorted(by_w.items())
    )
    n_blocks = len(blocks)
    n_elements = len(by_s)
    if n_blocks == n_elements:
        regime = RandomnessRegime.MAXIMAL
    elif n_blocks == 1:
        regime = RandomnessRegime.NO_RANDOMNESS
    else:
        regime = RandomnessRegime.PARTIAL
    return RandomnessClass(regime, entropy, blocks)


def conditional_information(state: StateVector, w: int) -> list[tuple[int, float]]:
    """The conditional distribution over s given the w register reads ``w``."""
    matrix = _flag_matrix(state)
    if w >= matrix.shape[1]:
        raise DomainError(f"witness value {w} outside the register range")
    column = np.abs(matrix[:, w]) ** 2
    total = float(column.sum())
    if total <= _AMP_TOL:
        raise DomainError(f"witness value {w} unseen in the marked support")
    return [(int(s), float(column[s] / total)) for s in np.flatnonzero(column > _AMP_TOL)]
