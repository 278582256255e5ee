"""Sequences, yes/no questions, and the answer bitstring they induce.

A question applied elementwise to a sequence yields a bitstring; the elements
answering 1 form the satisfying set whose size q is what the witness
machinery downstream compresses against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError
from .number_theory import (
    _check_u64,
    is_prime,
    mobius,
    recurrence_orbit,
)


@dataclass(frozen=True)
class Sequence:
    """A finite, strictly ascending sequence of positive 64-bit integers."""

    elements: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        if not self.elements:
            raise DomainError("sequence must be non-empty")
        object.__setattr__(self, "elements", tuple(self.elements))
        for e in self.elements:
            _check_u64(e, "sequence element")
            if e < 1:
                raise DomainError(f"sequence element {e} must be >= 1")
        for a, b in zip(self.elements, self.elements[1:]):
            if b <= a:
                raise DomainError(f"sequence must be strictly ascending ({a} !< {b})")

    @classmethod
    def from_range(cls, lo: int, hi: int) -> "Sequence":
        if hi < lo:
            raise DomainError(f"empty range [{lo}, {hi}]")
        return cls(tuple(range(lo, hi + 1)), label=f"range[{lo},{hi}]")

    @classmethod
    def from_values(cls, values, label: str = "list") -> "Sequence":
        return cls(tuple(values), label=label)

    @property
    def max(self) -> int:
        return self.elements[-1]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


class Question:
    """Base for the supported yes/no questions. Subclasses implement evaluate()."""

    def evaluate(self, s: int) -> int:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class RecurrenceMembership(Question):
    """Does s belong to the orbit x_0 = 1, x_{k+1} = p*x_k + q?

    Ground truth is genuine orbit membership; the congruence oracle used by
    the witness relation answers a different question on purpose.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.p < 2:
            raise DomainError("recurrence multiplier p must be >= 2")
        if not 0 <= self.q < self.p:
            raise DomainError("recurrence offset q must satisfy 0 <= q < p")

    def evaluate(self, s: int) -> int:
        # orbit values ascend, so s is a member iff the last value <= s hits it
        return 1 if recurrence_orbit(self.p, self.q, s)[-1] == s else 0

    def describe(self) -> str:
        return f"recurrence(p={self.p},q={self.q})"


@dataclass(frozen=True)
class IsComposite(Question):
    def evaluate(self, s: int) -> int:
        return 1 if s > 1 and not is_prime(s) else 0

    def describe(self) -> str:
        return "composite"


@dataclass(frozen=True)
class MobiusPlusOne(Question):
    """Is mu(s) = +1? Only defined on squarefree arguments."""

    def evaluate(self, s: int) -> int:
        m = mobius(s)
        if m == 0:
            raise DomainError(f"mobius({s}) = 0; element outside the question's domain")
        return 1 if m > 0 else 0

    def describe(self) -> str:
        return "mobius-plus-one"


@dataclass(frozen=True)
class IsEven(Question):
    def evaluate(self, s: int) -> int:
        return 1 if s % 2 == 0 else 0

    def describe(self) -> str:
        return "even"


@dataclass(frozen=True)
class IsPrime(Question):
    def evaluate(self, s: int) -> int:
        return 1 if is_prime(s) else 0

    def describe(self) -> str:
        return "prime"


@dataclass(frozen=True)
class IdentityIn(Question):
    """Is s a member of a fixed target set?"""

    targets: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "targets", frozenset(self.targets))

    def evaluate(self, s: int) -> int:
        return 1 if s in self.targets else 0

    def describe(self) -> str:
        return f"identity({len(self.targets)} targets)"


@dataclass(frozen=True)
class BitString:
    """The answer bits of a question across a sequence, in element order."""

    bits: tuple[int, ...]
    elements: tuple[int, ...]
    source: tuple[str, str]  # (sequence label, question descriptor)

    def __post_init__(self):
        if len(self.bits) != len(self.elements):
            raise DomainError("one bit per element required")
        if any(b not in (0, 1) for b in self.bits):
            raise DomainError("bits must be 0 or 1")

    def text(self) -> str:
        return "".join(str(b) for b in self.bits)

    def popcount(self) -> int:
        return sum(self.bits)

    def to_csv(self) -> str:
        lines = ["element,bit"]
        lines += [f"{e},{b}" for e, b in zip(self.elements, self.bits)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SatisfyingSet:
    """Elements answering 1, in sequence order."""

    elements: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.elements)


def answer(question: Question, s: int) -> int:
    """The exact truth value of the question on s (1 true, 0 false)."""
    _check_u64(s, "s")
    return question.evaluate(s)


def build_bitstring(seq: Sequence, question: Question) -> BitString:
    """Answer the question for every element; domain errors name the element."""
    bits = []
    for s in seq.elements:
        try:
            bits.append(answer(question, s))
        except DomainError as exc:
            raise DomainError(f"element {s}: {exc}") from exc
    return BitString(tuple(bits), seq.elements, (seq.label, question.describe()))


def satisfying_set(seq: Sequence, question: Question) -> SatisfyingSet:
    bs = build_bitstring(seq, question)
    return SatisfyingSet(tuple(e for e, b in zip(bs.elements, bs.bits) if b))
