import json

import pytest

from qwitness.cli import main


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


class TestAnalyze:
    def test_composite_range(self, tmp_path):
        code, out = run(tmp_path, "analyze", "--range", "2", "100", "--question", "composite")
        assert code == 0
        body = load(out)["report"]
        assert body["compressibility"]["m"] == 4
        assert body["compressibility"]["q"] == 74
        assert body["compressibility"]["regime"] == "Compressible"
        assert body["findings"] == []

    def test_mobius_support(self, tmp_path):
        code, out = run(
            tmp_path, "analyze", "--squarefree", "25", "--question", "mobius-plus-one"
        )
        assert code == 0
        body = load(out)["report"]
        assert body["paradox"]["detected"] is True
        assert body["compressibility"]["regime"] == "Incompressible"
        assert body["randomness"]["primary"]["regime"] == "Maximal"

    def test_recurrence(self, tmp_path):
        code, out = run(
            tmp_path, "analyze", "--range", "1", "20",
            "--question", "recurrence", "--p", "2", "--q", "1",
        )
        assert code == 0
        body = load(out)["report"]
        assert body["randomness"]["primary"]["regime"] == "NoRandomness"
        assert body["compressibility"]["m"] == 1

    def test_csv_format(self, tmp_path):
        out = tmp_path / "bits.csv"
        code = main([
            "analyze", "--range", "2", "4", "--question", "composite",
            "--format", "csv", "--out", str(out),
        ])
        assert code == 0
        assert out.read_text() == "element,bit\n2,0\n3,0\n4,1\n"

    def test_both_formats(self, tmp_path):
        out = tmp_path / "report.json"
        code = main([
            "analyze", "--range", "2", "9", "--question", "composite",
            "--format", "both", "--out", str(out),
        ])
        assert code == 0
        assert out.exists()
        assert (tmp_path / "report.csv").exists()

    def test_both_without_out_rejected(self, capsys):
        assert main(["analyze", "--range", "2", "9", "--question", "composite",
                     "--format", "both"]) == 2
        assert "both" in capsys.readouterr().err

    def test_byte_identical_reruns(self, tmp_path):
        args = ["analyze", "--squarefree", "20", "--question", "mobius-plus-one"]
        _, a = run(tmp_path, *args, name="a.json")
        _, b = run(tmp_path, *args, name="b.json")
        assert a.read_bytes() == b.read_bytes()

    def test_round_trip_emission(self, tmp_path):
        _, out = run(tmp_path, "analyze", "--range", "2", "50", "--question", "composite")
        parsed = load(out)
        assert json.dumps(parsed, indent=2) + "\n" == out.read_text()


class TestWitness:
    def test_composite_candidates(self, tmp_path):
        code, out = run(tmp_path, "witness", "--range", "2", "100", "--question", "composite")
        assert code == 0
        body = load(out)["witness"]
        assert body["relation"]["candidates"] == [2, 3, 5, 7]
        assert body["covers"]["min_cover"]["chosen"] == [2, 3, 5, 7]

    def test_mobius_pair_witnesses(self, tmp_path):
        code, out = run(
            tmp_path, "witness", "--squarefree", "25", "--question", "mobius-plus-one"
        )
        assert code == 0
        body = load(out)["witness"]
        rel = body["relation"]
        i35 = rel["targets"].index(35)
        witnesses = [rel["candidates"][j] for j in rel["incidence"][i35]]
        assert witnesses == [5, 7]

    def test_identity_on_explicit_list(self, tmp_path):
        code, out = run(tmp_path, "witness", "--list", "3,7,11", "--question", "identity")
        assert code == 0
        body = load(out)["witness"]
        assert body["relation"]["targets"] == [3, 7, 11]
        assert body["relation"]["candidates"] == [3, 7, 11]
        assert body["relation"]["incidence"] == [[0], [1], [2]]
        assert body["covers"]["unique_witness_assignment"]["exists"] is True


class TestSimulate:
    def test_four_one_trace(self, tmp_path):
        # s = 1..4 with residue oracle mod 4, residue 1: single marked pair
        code, out = run(
            tmp_path, "simulate", "--range", "1", "4",
            "--question", "recurrence", "--p", "4", "--q", "1",
        )
        assert code == 0
        body = load(out)["simulate"]
        assert body["support"] == 4
        assert body["marked_pairs"] == 1
        assert body["grover_trace"][0] == pytest.approx(0.25)
        assert body["grover_trace"][1] == pytest.approx(1.0, abs=1e-9)
        # the amplified state concentrates on the single marked configuration
        entries = body["amplified_state"]
        top = max(entries, key=lambda e: e[1] ** 2 + e[2] ** 2)
        assert top[1] ** 2 + top[2] ** 2 == pytest.approx(1.0, abs=1e-9)

    def test_nothing_to_amplify(self, tmp_path, capsys):
        code = main([
            "simulate", "--list", "2,4,6", "--question", "recurrence",
            "--p", "2", "--q", "1", "--out", str(tmp_path / "x.json"),
        ])
        assert code == 2
        assert "nothing to amplify" in capsys.readouterr().err

    def test_counting_eight_two(self, tmp_path):
        code, out = run(
            tmp_path, "simulate", "--range", "1", "8",
            "--question", "recurrence", "--p", "4", "--q", "1", "--phase-bits", "4",
        )
        assert code == 0
        body = load(out)["simulate"]
        assert body["marked_pairs"] == 2
        assert abs(body["counting"]["estimated_m"] - 2) < 0.5

    def test_cap_exceeded_exits_three(self, tmp_path, capsys):
        code = main([
            "simulate", "--range", "2", "100", "--question", "composite",
            "--qubit-cap", "6", "--out", str(tmp_path / "x.json"),
        ])
        assert code == 3


class TestConfigAndErrors:
    def test_config_file_supplies_defaults(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "range": [2, 100], "question": "composite", "phase_bits": 4,
        }))
        out = tmp_path / "r.json"
        code = main(["analyze", "--config", str(cfg), "--out", str(out)])
        assert code == 0
        doc = load(out)
        assert doc["meta"]["options"]["phase_bits"] == 4
        assert doc["report"]["compressibility"]["m"] == 4

    def test_flags_override_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"range": [2, 100], "question": "composite"}))
        out = tmp_path / "r.json"
        code = main([
            "analyze", "--config", str(cfg), "--range", "2", "50", "--out", str(out),
        ])
        assert code == 0
        assert load(out)["report"]["sequence"]["length"] == 49

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"range": [2, 9], "question": "composite", "bogus": 1}))
        assert main(["analyze", "--config", str(cfg)]) == 2

    def test_two_sequence_specs_rejected(self, capsys):
        code = main([
            "analyze", "--range", "2", "9", "--squarefree", "5", "--question", "composite",
        ])
        assert code == 2

    def test_missing_question_rejected(self, capsys):
        assert main(["analyze", "--range", "2", "9"]) == 2

    def test_p_only_valid_for_recurrence(self, capsys):
        assert main(["analyze", "--range", "2", "9", "--question", "composite",
                     "--p", "2"]) == 2

    def test_non_ascending_list_rejected(self, capsys):
        assert main(["analyze", "--list", "5,2", "--question", "composite"]) == 2

    def test_env_ceiling_enforced(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("QWITNESS_QUBIT_CAP", "10")
        code = main([
            "analyze", "--range", "2", "9", "--question", "composite",
            "--qubit-cap", "20", "--out", str(tmp_path / "r.json"),
        ])
        assert code == 3
        assert "ceiling" in capsys.readouterr().err

    def test_env_ceiling_allows_smaller_cap(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QWITNESS_QUBIT_CAP", "30")
        code, out = run(tmp_path, "analyze", "--range", "2", "9", "--question", "composite")
        assert code == 0

    def test_env_ceiling_clamps_the_default_cap(self, tmp_path, monkeypatch):
        # without an explicit --qubit-cap, the ceiling lowers the default and
        # the quantum stage skips rather than the run failing
        monkeypatch.setenv("QWITNESS_QUBIT_CAP", "5")
        code, out = run(tmp_path, "analyze", "--range", "2", "100", "--question", "composite")
        assert code == 0
        body = load(out)["report"]
        assert body["quantum"]["skipped"] is True
        assert "exceeds cap 5" in body["quantum"]["reason"]

    def test_io_error_exits_four(self, tmp_path, capsys):
        code = main([
            "analyze", "--range", "2", "9", "--question", "composite",
            "--out", str(tmp_path / "missing" / "r.json"),
        ])
        assert code == 4

    def test_no_quantum_flag(self, tmp_path):
        code, out = run(
            tmp_path, "analyze", "--range", "2", "30", "--question", "composite",
            "--no-quantum",
        )
        assert code == 0
        body = load(out)["report"]
        assert body["quantum"]["skipped"] is True
        assert "quantum stage skipped: disabled by options" in body["findings"]
