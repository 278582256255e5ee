#!/usr/bin/env python3
"""Run the three canonical examples end to end and print compact summaries.

Usage: python scripts/run_worked_examples.py
"""

from qwitness import (
    IsComposite,
    MobiusPlusOne,
    RecurrenceMembership,
    Sequence,
    analyze,
    cross_check,
    squarefree_support,
)


def show(title, report):
    v = report.verdict
    print(f"== {title}")
    print(f"   bitstring ({len(report.bitstring)} bits): {report.bitstring}")
    print(f"   q = {v.q}, m = {v.m}, regime = {v.regime.value}, paradox = {v.paradox}")
    if report.compression_ratio is not None:
        print(f"   compression ratio m/q = {report.compression_ratio}")
    qb = report.quantum
    if not qb.skipped:
        print(
            f"   quantum: support {qb.support}, marked {qb.marked_pairs}, "
            f"counted {qb.counting.estimated_m:.3f} "
            f"(exact={qb.counting.exact}), grover p = {qb.grover_success:.6f} "
            f"after {qb.grover_iterations} rounds"
        )
    cls = report.randomness
    if cls is not None:
        print(
            f"   randomness [{cls.basis}]: {cls.regime}, "
            f"rank {cls.schmidt_rank}, entropy {cls.entropy_bits:.6f} bits"
        )
    if report.randomness_raw is not None and report.randomness_raw != cls:
        print(f"   raw marked state: {report.randomness_raw.regime}")
    findings = cross_check(report)
    print(f"   cross-check findings: {findings or 'none'}")
    print()


def main():
    show(
        "affine recurrence on [1..20], x -> 2x + 1",
        analyze(Sequence.from_range(1, 20), RecurrenceMembership(2, 1)),
    )
    show(
        "compositeness on [2..100]",
        analyze(Sequence.from_range(2, 100), IsComposite()),
    )
    show(
        "Mobius +1 on the first 25 squarefree integers",
        analyze(
            Sequence.from_values(squarefree_support(25), label="squarefree[25]"),
            MobiusPlusOne(),
        ),
    )


if __name__ == "__main__":
    main()
