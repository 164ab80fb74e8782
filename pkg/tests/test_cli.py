import json
import math
import subprocess
import sys

import pytest

from cohdistill import cli


def write_state(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def worked_file(tmp_path):
    return write_state(tmp_path, "worked.json", {"dim": 4, "probs": [0.35, 0.3, 0.25, 0.1]})


def run_json(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestDistill:
    def test_worked_example_report(self, capsys, worked_file):
        code, rep = run_json(capsys, ["distill", worked_file])
        assert code == 0
        probs = {row["q"]: row["probability"] for row in rep["ensemble"]}
        assert abs(probs[4] - 0.4) <= 1e-9
        assert abs(rep["max_success_probability"] - 0.4) <= 1e-9
        assert rep["verification"]["sio_ok"] is True
        assert rep["verification"]["completeness_deviation"] < 1e-12
        assert abs(rep["coherence"]["c_in"] - 2.824208271864) <= 1e-9

    def test_max_coherent_file(self, capsys, tmp_path):
        path = write_state(tmp_path, "mc4.json", {"dim": 4, "amps": [0.5, 0.5, 0.5, 0.5]})
        code, rep = run_json(capsys, ["distill", path])
        assert code == 0
        probs = [row["probability"] for row in rep["ensemble"]]
        assert probs[:3] == [0.0, 0.0, 0.0]
        assert abs(probs[3] - 1.0) <= 1e-9
        assert abs(rep["coherence"]["loss"]) <= 1e-9

    def test_slightly_denormalized_accepted(self, capsys, tmp_path):
        path = write_state(
            tmp_path, "near.json", {"dim": 2, "probs": [0.599999999, 0.4]}
        )
        code, rep = run_json(capsys, ["distill", path])
        assert code == 0
        assert rep["input"]["renormalized"] is True

    def test_unsorted_amps_canonicalized(self, capsys, tmp_path):
        path = write_state(tmp_path, "u.json", {"dim": 2, "amps": [0.6, 0.8]})
        code, rep = run_json(capsys, ["distill", path])
        assert code == 0
        assert rep["input"]["canonical_amps"] == [0.8, 0.6]

    def test_csv_format(self, capsys, worked_file):
        code = cli.main(["distill", worked_file, "--format", "csv"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.splitlines()[0] == "q,probability,output_coherence"
        assert len(out.splitlines()) == 5


class TestNowaste:
    def test_worked_example(self, capsys, worked_file):
        code, rep = run_json(capsys, ["nowaste", worked_file])
        assert code == 0
        assert rep["plan"]["k"] == 2
        assert abs(rep["plan"]["psi_prime_sq"] - 0.2) <= 1e-9
        probs = {row["q"]: row["probability"] for row in rep["ensemble"]}
        assert probs[1] == 0.0
        assert abs(probs[2] - 0.3) <= 1e-9
        assert abs(probs[3] - 0.3) <= 1e-9
        assert abs(probs[4] - 0.4) <= 1e-9
        mid = rep["intermediate"]["probs"]
        assert max(abs(a - b) for a, b in zip(mid, [0.35, 0.35, 0.2, 0.1])) <= 1e-9

    def test_infeasible_exit_code(self, tmp_path, capsys):
        path = write_state(tmp_path, "heavy.json", {"dim": 2, "probs": [0.6, 0.4]})
        assert cli.main(["nowaste", path]) == 4
        assert "top weight too large" in capsys.readouterr().err


class TestEntangle:
    def test_worked_example(self, capsys, worked_file):
        code, rep = run_json(capsys, ["entangle", worked_file])
        assert code == 0
        ent = rep["entanglement"]
        assert abs(ent["max_distilled_source"] - 1.11821) <= 1e-4
        assert abs(ent["max_distilled_intermediate"] - 1.09205) <= 1e-4
        probs = {row["q"]: row["probability"] for row in rep["ensemble"]}
        assert probs[1] == 0.0 and abs(probs[4] - 0.4) <= 1e-9

    def test_schmidt_field_accepted(self, capsys, tmp_path):
        coeffs = [math.sqrt(x) for x in (0.35, 0.3, 0.25, 0.1)]
        path = write_state(tmp_path, "s.json", {"dim": 4, "schmidt": coeffs})
        code, rep = run_json(capsys, ["entangle", path])
        assert code == 0
        assert abs(rep["entanglement"]["max_distilled_source"] - 1.11821) <= 1e-4

    def test_gap_condition_exit_code(self, tmp_path, capsys):
        path = write_state(
            tmp_path, "bad.json", {"dim": 4, "probs": [0.45, 0.25, 0.2, 0.1]}
        )
        assert cli.main(["entangle", path]) == 4
        assert "phi_3^2 - phi_4^2 < phi_1^2 - phi_2^2" in capsys.readouterr().err


class TestStateFileValidation:
    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert cli.main(["distill", str(path)]) == 2

    def test_missing_file(self, tmp_path):
        assert cli.main(["distill", str(tmp_path / "nope.json")]) == 2

    def test_two_value_fields(self, tmp_path):
        path = write_state(
            tmp_path, "two.json", {"dim": 2, "amps": [1.0, 0.0], "probs": [1.0, 0.0]}
        )
        assert cli.main(["distill", path]) == 2

    def test_wrong_length(self, tmp_path):
        path = write_state(tmp_path, "len.json", {"dim": 3, "probs": [0.5, 0.5]})
        assert cli.main(["distill", path]) == 2

    def test_schmidt_rejected_by_distill(self, tmp_path):
        path = write_state(tmp_path, "s.json", {"dim": 2, "schmidt": [1.0, 0.0]})
        assert cli.main(["distill", path]) == 2

    def test_negative_value_invalid(self, tmp_path):
        path = write_state(tmp_path, "neg.json", {"dim": 2, "probs": [1.5, -0.5]})
        assert cli.main(["distill", path]) == 3

    def test_norm_violation_invalid(self, tmp_path):
        path = write_state(tmp_path, "norm.json", {"dim": 2, "probs": [0.7, 0.2]})
        assert cli.main(["distill", path]) == 3

    def test_bad_dim_type(self, tmp_path):
        path = write_state(tmp_path, "dim.json", {"dim": "4", "probs": [1.0]})
        assert cli.main(["distill", path]) == 2


class TestFigure2Command:
    def test_writes_deterministic_csv(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert cli.main(["figure2", "--dim", "3", "--points", "5", "--out", str(out1)]) == 0
        assert cli.main(["figure2", "--dim", "3", "--points", "5", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        lines = out1.read_text().strip().split("\n")
        assert lines[0] == "curve,alpha,c_in,c_out,gap"
        assert len(lines) == 1 + 2 * 5

    def test_unwritable_path(self):
        assert (
            cli.main(
                ["figure2", "--dim", "3", "--points", "2", "--out", "/nonexistent/x.csv"]
            )
            == 5
        )

    def test_bad_dim(self):
        assert cli.main(["figure2", "--dim", "1", "--points", "5"]) == 2


class TestSampleCommand:
    def test_zero_draws_rejected(self, worked_file):
        assert cli.main(["sample", worked_file, "--n", "0"]) == 2

    def test_reproducible_counts(self, capsys, worked_file):
        _, rep1 = run_json(capsys, ["sample", worked_file, "--n", "50000", "--seed", "7"])
        _, rep2 = run_json(capsys, ["sample", worked_file, "--n", "50000", "--seed", "7"])
        assert [r["count"] for r in rep1["counts"]] == [r["count"] for r in rep2["counts"]]

    def test_degenerate_entries_reported_exact(self, capsys, tmp_path):
        third = 1.0 / 3.0
        path = write_state(tmp_path, "mc.json", {"dim": 3, "probs": [third] * 3})
        # uniform probs: only the top outcome can occur
        code, rep = run_json(capsys, ["sample", path, "--n", "1000", "--seed", "1"])
        assert code == 0
        for row in rep["counts"]:
            assert row["z"] is None
            assert row["exact_match"] is True

    def test_worked_statistics(self, capsys, tmp_path):
        path = write_state(
            tmp_path, "chi.json", {"dim": 4, "probs": [0.35, 0.35, 0.2, 0.1]}
        )
        code, rep = run_json(capsys, ["sample", path, "--n", "1000000", "--seed", "7"])
        assert code == 0
        assert rep["max_abs_z"] < 4.0
        assert rep["counts"][0]["count"] == 0

    def test_bad_seed(self, worked_file):
        assert cli.main(["sample", worked_file, "--n", "10", "--seed", str(1 << 64)]) == 2


class TestVerifyCommand:
    def test_worked_state_passes(self, capsys, worked_file):
        code, rep = run_json(capsys, ["verify", worked_file])
        assert code == 0
        assert rep["all_passed"] is True
        names = {c["name"] for c in rep["checks"]}
        assert "channel_completeness" in names
        assert "strictly_incoherent" in names

    def test_support_deficient_state(self, capsys, tmp_path):
        path = write_state(tmp_path, "b.json", {"dim": 3, "probs": [1.0, 0.0, 0.0]})
        code, rep = run_json(capsys, ["verify", path])
        assert code == 0
        names = {c["name"] for c in rep["checks"]}
        assert "channel_completeness_on_support" in names


class TestOutputFile:
    def test_report_written_to_file(self, tmp_path, worked_file):
        out = tmp_path / "report.json"
        assert cli.main(["distill", worked_file, "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["command"] == "distill"

    def test_unwritable_report_path(self, worked_file):
        assert cli.main(["distill", worked_file, "--out", "/nonexistent/r.json"]) == 5


def test_module_entrypoint_subprocess(worked_file):
    proc = subprocess.run(
        [sys.executable, "-m", "cohdistill", "nowaste", worked_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["plan"]["k"] == 2
