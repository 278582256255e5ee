"""Command-line front end: analyze | witness | simulate.

Configuration can come from a JSON file (--config) mirroring the flag names
with underscores; explicit flags win. Report bodies are canonical: stable
field order, floats at 12 significant digits, rationals as {num, den}, and no
wall-clock metadata, so identical configs produce byte-identical files.

Exit codes: 0 success, 2 domain error, 3 qubit cap exceeded, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from math import asin, sqrt

from . import __version__
from .cover import exact_cover, min_set_cover, unique_witness_assignment
from .errors import DomainError, QubitCapError
from .pipeline import AnalyzeOptions, RandomnessReport, analyze, cross_check, relation_for
from .quantum import (
    MarkedOracle,
    RegisterLayout,
    classical_marked_count,
    grover_amplify,
    grover_iterations_optimal,
    grover_trace,
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
from .number_theory import squarefree_support
from .witnesses import coverage_check

ENV_QUBIT_CAP = "QWITNESS_QUBIT_CAP"

_DEFAULTS = {
    "qubit_cap": 24,
    "phase_bits": 6,
    "exact_threshold": 24,
    "format": "json",
    "no_quantum": False,
    "jobs": 1,
}

_QUESTIONS = ("recurrence", "composite", "mobius-plus-one", "even", "prime", "identity")


@dataclass(frozen=True)
class RunConfig:
    sequence: Sequence
    question: Question
    qubit_cap: int
    phase_bits: int
    exact_threshold: int
    out: str | None
    format: str
    no_quantum: bool
    jobs: int

    def options(self) -> AnalyzeOptions:
        return AnalyzeOptions(
            qubit_cap=self.qubit_cap,
            phase_bits=self.phase_bits,
            exact_threshold=self.exact_threshold,
            run_quantum=not self.no_quantum,
        )


def _merged(args: argparse.Namespace) -> dict:
    """Layer defaults < config file < explicit flags."""
    merged = dict(_DEFAULTS)
    merged["qubit_cap_explicit"] = False
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise DomainError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DomainError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise DomainError("config file must hold a JSON object")
        unknown = set(loaded) - (
            set(_DEFAULTS) | {"range", "list", "squarefree", "question", "p", "q", "out"}
        )
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        if "qubit_cap" in loaded:
            merged["qubit_cap_explicit"] = True
        merged.update(loaded)
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            if key == "qubit_cap":
                merged["qubit_cap_explicit"] = True
            merged[key] = value
    return merged


def _build_sequence(merged: dict) -> Sequence:
    picked = [k for k in ("range", "list", "squarefree") if merged.get(k) is not None]
    if len(picked) != 1:
        raise DomainError(
            "exactly one of --range, --list, --squarefree must be given, "
            f"got {picked or 'none'}"
        )
    if picked[0] == "range":
        lo, hi = merged["range"]
        return Sequence.from_range(int(lo), int(hi))
    if picked[0] == "list":
        values = merged["list"]
        if isinstance(values, str):
            values = [int(v) for v in values.split(",") if v != ""]
        return Sequence.from_values([int(v) for v in values], label="list")
    n = int(merged["squarefree"])
    return Sequence.from_values(squarefree_support(n), label=f"squarefree[{n}]")


def _build_question(merged: dict, seq: Sequence) -> Question:
    kind = merged.get("question")
    if kind is None:
        raise DomainError("--question is required")
    if kind not in _QUESTIONS:
        raise DomainError(f"unknown question {kind!r}; pick one of {_QUESTIONS}")
    p, q = merged.get("p"), merged.get("q")
    if kind == "recurrence":
        if p is None or q is None:
            raise DomainError("the recurrence question needs --p and --q")
        return RecurrenceMembership(int(p), int(q))
    if p is not None or q is not None:
        raise DomainError(f"--p/--q only apply to the recurrence question, not {kind!r}")
    if kind == "composite":
        return IsComposite()
    if kind == "mobius-plus-one":
        return MobiusPlusOne()
    if kind == "even":
        return IsEven()
    if kind == "prime":
        return IsPrime()
    return IdentityIn(frozenset(seq.elements))


def build_config(args: argparse.Namespace) -> RunConfig:
    merged = _merged(args)
    seq = _build_sequence(merged)
    question = _build_question(merged, seq)
    qubit_cap = int(merged["qubit_cap"])
    ceiling = os.environ.get(ENV_QUBIT_CAP)
    if ceiling is not None:
        # the environment ceiling clamps the default but refuses an explicit
        # request above it
        if merged["qubit_cap_explicit"] and qubit_cap > int(ceiling):
            raise QubitCapError(
                f"requested qubit cap {qubit_cap} exceeds the {ENV_QUBIT_CAP} "
                f"ceiling {ceiling}"
            )
        qubit_cap = min(qubit_cap, int(ceiling))
    fmt = merged["format"]
    if fmt not in ("json", "csv", "both"):
        raise DomainError(f"unknown format {fmt!r}")
    out = merged.get("out")
    if fmt == "both" and out is None:
        raise DomainError("--format both needs --out to place the two files")
    jobs = int(merged["jobs"])
    if jobs < 1:
        raise DomainError("--jobs must be >= 1")
    phase_bits = int(merged["phase_bits"])
    if phase_bits < 1:
        raise DomainError("--phase-bits must be >= 1")
    exact_threshold = int(merged["exact_threshold"])
    if exact_threshold < 0:
        raise DomainError("--exact-threshold must be >= 0")
    return RunConfig(
        sequence=seq,
        question=question,
        qubit_cap=qubit_cap,
        phase_bits=phase_bits,
        exact_threshold=exact_threshold,
        out=out,
        format=fmt,
        no_quantum=bool(merged["no_quantum"]),
        jobs=jobs,
    )


def _round_floats(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_round_floats(v) for v in value]
    return value


def emit_json(body_key: str, body: dict, command: str, config: RunConfig) -> str:
    envelope = {
        "meta": {
            "generator": f"qwitness {__version__}",
            "command": command,
            "options": {
                "qubit_cap": config.qubit_cap,
                "phase_bits": config.phase_bits,
                "exact_threshold": config.exact_threshold,
                "no_quantum": config.no_quantum,
                "jobs": config.jobs,
            },
        },
        body_key: _round_floats(body),
    }
    return json.dumps(envelope, indent=2) + "\n"


def _write(path: str | None, payload: str) -> None:
    if path is None:
        sys.stdout.write(payload)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)


def _csv_path(out: str) -> str:
    base, _ext = os.path.splitext(out)
    return base + ".csv"


def cmd_analyze(config: RunConfig) -> int:
    report: RandomnessReport = analyze(config.sequence, config.question, config.options())
    body = report.to_dict()
    body["findings"] = cross_check(report)
    if config.format in ("json", "both"):
        _write(config.out, emit_json("report", body, "analyze", config))
    if config.format in ("csv", "both"):
        bits = build_bitstring(config.sequence, config.question)
        path = config.out if config.format == "csv" else _csv_path(config.out)
        _write(path, bits.to_csv())
    return 0


def cmd_witness(config: RunConfig) -> int:
    satisfying = satisfying_set(config.sequence, config.question)
    relation, _faithful = relation_for(config.sequence, config.question, satisfying)
    coverage = coverage_check(relation)
    restricted = (
        relation.restrict_targets(set(relation.targets) - set(coverage.uncovered))
        if coverage.uncovered
        else relation
    )
    min_cov = min_set_cover(restricted, config.exact_threshold)
    exact_cov = exact_cover(restricted)
    uwa_ok, assignment = unique_witness_assignment(restricted)
    body = {
        "relation": relation.to_json_dict(),
        "coverage": {
            "uncovered": list(coverage.uncovered),
            "multiply_witnessed": [list(x) for x in coverage.multiply_witnessed],
            "shared_witnesses": [list(x) for x in coverage.shared_witnesses],
        },
        "covers": {
            "min_cover": {
                "kind": min_cov.kind.value,
                "m": min_cov.m,
                "chosen": list(min_cov.chosen),
            },
            "exact_cover": {
                "kind": exact_cov.kind.value,
                "m": exact_cov.m,
                "chosen": list(exact_cov.chosen),
            },
            "unique_witness_assignment": {
                "exists": uwa_ok,
                "assignment": None
                if assignment is None
                else [[t, w] for t, w in assignment.items()],
            },
        },
    }
    _write(config.out, emit_json("witness", body, "witness", config))
    return 0


def cmd_simulate(config: RunConfig) -> int:
    satisfying = satisfying_set(config.sequence, config.question)
    relation, _faithful = relation_for(config.sequence, config.question, satisfying)
    if not relation.candidates:
        raise DomainError("nothing to amplify: the relation has no candidate witnesses")
    layout = RegisterLayout.for_values(
        config.sequence.elements, relation.candidates, config.qubit_cap
    )
    oracle = MarkedOracle.from_relation(config.sequence.elements, relation)
    marked = classical_marked_count(oracle)
    if marked == 0:
        raise DomainError("nothing to amplify: no marked configurations")
    iterations = grover_iterations_optimal(oracle.support, marked)
    prepared = prepare_superposition(
        config.sequence.elements, relation.candidates, config.qubit_cap
    )
    trace = grover_trace(prepared, oracle, iterations)
    amplified = grover_amplify(prepared, oracle, iterations)
    counting = quantum_count(oracle, oracle.support, config.phase_bits)
    body = {
        "layout": {
            "s_qubits": layout.s_qubits,
            "w_qubits": layout.w_qubits,
            "flag_qubits": layout.flag_qubits,
            "total_qubits": layout.total_qubits,
        },
        "support": oracle.support,
        "marked_pairs": marked,
        "optimal_iterations": iterations,
        "grover_trace": trace,
        "grover_angle": asin(sqrt(marked / oracle.support)),
        "counting": {
            "estimated_m": counting.estimated_m,
            "phase_bits": counting.phase_bits,
            "phase": {"num": counting.phase.numerator, "den": counting.phase.denominator},
            "probability": counting.probability,
            "exact": counting.exact,
        },
        # nonzero amplitudes of the amplified state as (basis index, re, im)
        "amplified_state": amplified.to_json_entries(),
    }
    _write(config.out, emit_json("simulate", body, "simulate", config))
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file mirroring the flags; flags win")
    parser.add_argument("--range", nargs=2, type=int, metavar=("A", "B"),
                        help="analyze the integers A..B inclusive")
    parser.add_argument("--list", dest="list", metavar="V1,V2,...",
                        help="explicit comma-separated ascending elements")
    parser.add_argument("--squarefree", type=int, metavar="N",
                        help="the first N squarefree integers")
    parser.add_argument("--question", choices=_QUESTIONS)
    parser.add_argument("--p", type=int, help="recurrence multiplier")
    parser.add_argument("--q", type=int, help="recurrence offset / residue")
    parser.add_argument("--qubit-cap", dest="qubit_cap", type=int,
                        help="register budget for the quantum stage (default 24)")
    parser.add_argument("--phase-bits", dest="phase_bits", type=int,
                        help="counting precision t (default 6)")
    parser.add_argument("--exact-threshold", dest="exact_threshold", type=int,
                        help="max targets for exact minimization; greedy with "
                             "an explicit tag above it (default 24)")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv", "both"))
    parser.add_argument("--no-quantum", dest="no_quantum", action="store_const",
                        const=True, help="classical stages only")
    parser.add_argument("--jobs", type=int,
                        help="worker budget for batch drivers (>= 1; single "
                             "analyses run serially)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwitness",
        description="Witness-set compressibility and randomness analysis of "
                    "question-derived bitstrings",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("analyze", "full report: bitstring, covers, verdict, quantum cross-checks"),
        ("witness", "emit the witness relation and cover solutions only"),
        ("simulate", "run only the quantum stage on the question's relation"),
    ):
        _add_common(sub.add_parser(name, help=text))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        handler = {"analyze": cmd_analyze, "witness": cmd_witness, "simulate": cmd_simulate}
        return handler[args.command](config)
    except QubitCapError as exc:
        print(f"qwitness: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"qwitness: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qwitness: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
