import json

import pytest
from click.testing import CliRunner

from ptflab import MultilinearPolynomial, middle_layers_witness
from ptflab.cli import SuiteRow, _bundle_exit_code, main


@pytest.fixture()
def runner():
    return CliRunner()


def write_majority(tmp_path):
    path = tmp_path / "maj3.json"
    path.write_text(middle_layers_witness(3, 1).to_json() + "\n")
    return str(path)


# ---------------------------------------------------------------------------
# analyze


def test_analyze_majority(runner, tmp_path):
    result = runner.invoke(main, ["analyze", "--input", write_majority(tmp_path), "--seed", "1"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["as"] == {"method": "enumeration", "value": 1.5}
    assert report["gl_bound"] == 1.5
    assert report["gl_ratio"] == 1.0
    assert report["alpha"]["method"] == "enumeration"
    assert all(check["passed"] for check in report["checks"])


def test_analyze_constant(runner, tmp_path):
    path = tmp_path / "const.json"
    path.write_text(MultilinearPolynomial.constant(2, 5.0).to_json() + "\n")
    result = runner.invoke(main, ["analyze", "--input", str(path), "--seed", "1"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["as"]["value"] == 0.0
    assert report["alpha"]["value"] == 0.0
    assert report["gl_bound"] is None


def test_analyze_generated_instance(runner):
    result = runner.invoke(
        main, ["analyze", "--n", "6", "--d", "2", "--terms", "8", "--seed", "3"]
    )
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["polynomial"] == {
        "n": 6,
        "degree": report["polynomial"]["degree"],
        "terms": 8,
        "source": "generated",
        "seed": 3,
    }


def test_analyze_estimates_alpha_above_exact_cap(runner, tmp_path):
    p = MultilinearPolynomial(14, {1 << i: 1.0 for i in range(14)})
    path = tmp_path / "p14.json"
    path.write_text(p.to_json() + "\n")
    result = runner.invoke(
        main, ["analyze", "--input", str(path), "--seed", "2", "--samples", "2000"]
    )
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["alpha"]["method"] == "monte_carlo"
    assert report["alpha"]["samples"] == 2000
    assert report["alpha"]["std_error"] >= 0.0


def test_analyze_csv_format(runner, tmp_path):
    result = runner.invoke(
        main, ["analyze", "--input", write_majority(tmp_path), "--seed", "1", "--format", "csv"]
    )
    assert result.exit_code == 0
    lines = result.stdout_bytes.decode().strip().split("\r\n")
    assert len(lines) == 2
    header = lines[0].split(",")
    values = dict(zip(header, lines[1].split(",")))
    assert values["as_exact"] == "1.5"
    assert values["gl_bound"] == "1.5"


def test_analyze_requires_input_or_generator(runner):
    result = runner.invoke(main, ["analyze", "--seed", "1"])
    assert result.exit_code == 2


def test_analyze_malformed_file_exits_2(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    result = runner.invoke(main, ["analyze", "--input", str(path)])
    assert result.exit_code == 2


def test_analyze_infeasible_exits_3(runner, tmp_path):
    p = MultilinearPolynomial(30, {1 << i: 1.0 for i in range(30)})
    path = tmp_path / "big.json"
    path.write_text(p.to_json() + "\n")
    result = runner.invoke(main, ["analyze", "--input", str(path), "--samples", "0", "--seed", "1"])
    assert result.exit_code == 3


def test_analyze_echoes_seed_to_stderr(runner, tmp_path):
    result = runner.invoke(main, ["analyze", "--input", write_majority(tmp_path), "--seed", "9"])
    assert "seed: 9" in result.stderr


# ---------------------------------------------------------------------------
# random


def test_random_same_seed_is_byte_identical(runner, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        result = runner.invoke(
            main,
            ["random", "--n", "8", "--d", "2", "--terms", "10", "--seed", "42", "--out", str(out)],
        )
        assert result.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_random_env_seed_override(runner, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    r1 = runner.invoke(
        main,
        ["random", "--n", "8", "--d", "2", "--terms", "10", "--seed", "42", "--out", str(out1)],
    )
    r2 = runner.invoke(
        main,
        ["random", "--n", "8", "--d", "2", "--terms", "10", "--out", str(out2)],
        env={"PTFLAB_SEED": "42"},
    )
    assert r1.exit_code == r2.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_random_writes_requested_term_count(runner):
    result = runner.invoke(main, ["random", "--n", "8", "--d", "2", "--terms", "10", "--seed", "1"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    masks = {tuple(t["vars"]) for t in data["terms"]}
    assert len(masks) == 10
    assert all(len(v) <= 2 for v in masks)
    poly = MultilinearPolynomial.from_json(result.stdout)
    assert poly.term_count == 10


def test_random_degree_zero_constant(runner):
    result = runner.invoke(main, ["random", "--n", "5", "--d", "0", "--terms", "1", "--seed", "1"])
    assert result.exit_code == 0
    poly = MultilinearPolynomial.from_json(result.stdout)
    assert poly.degree == 0


def test_random_unsatisfiable_sparsity_exits_3(runner):
    result = runner.invoke(main, ["random", "--n", "4", "--d", "1", "--terms", "99", "--seed", "1"])
    assert result.exit_code == 3


# ---------------------------------------------------------------------------
# suite


def test_suite_gl_passes(runner, tmp_path):
    out = tmp_path / "gl.json"
    result = runner.invoke(main, ["suite", "--suite", "gl", "--seed", "7", "--out", str(out)])
    assert result.exit_code == 0
    bundle = json.loads(out.read_text())
    assert bundle["suite"] == "gl"
    tight = [r for r in bundle["rows"] if r["check"] == "gl_tightness_d1"]
    assert len(tight) == 7
    assert all(r["status"] == "pass" for r in tight)
    assert bundle["summary"]["failed"] == 0


def test_suite_rows_are_self_describing(runner, tmp_path):
    out = tmp_path / "gl.json"
    runner.invoke(main, ["suite", "--suite", "gl", "--seed", "7", "--out", str(out)])
    bundle = json.loads(out.read_text())
    assert bundle["seed"] == 7
    for row in bundle["rows"]:
        assert row["kind"] in ("identity", "hard", "info")
        assert row["status"] in ("pass", "fail", "info")


def test_suite_csv_format(runner, tmp_path):
    out = tmp_path / "gl.csv"
    result = runner.invoke(
        main, ["suite", "--suite", "gl", "--seed", "7", "--format", "csv", "--out", str(out)]
    )
    assert result.exit_code == 0
    lines = out.read_bytes().decode().strip().split("\r\n")
    assert lines[0] == "check,instance,kind,status,value,reference,detail"
    assert len(lines) > 7


def test_suite_repeat_is_byte_identical(runner, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        result = runner.invoke(
            main, ["suite", "--suite", "anticoncentration", "--seed", "11",
                   "--samples", "20000", "--out", str(out)],
        )
        assert result.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_suite_unknown_name_exits_2(runner):
    result = runner.invoke(main, ["suite", "--suite", "nosuch"])
    assert result.exit_code == 2


def test_suite_rejects_nonpositive_samples(runner):
    result = runner.invoke(main, ["suite", "--suite", "gl", "--samples", "0", "--seed", "1"])
    assert result.exit_code == 2


# ---------------------------------------------------------------------------
# exit-code policy


def test_bundle_exit_code_mapping():
    ok = SuiteRow("c", "i", "hard", "pass")
    info = SuiteRow("c", "i", "info", "info")
    hard_fail = SuiteRow("c", "i", "hard", "fail")
    identity_fail = SuiteRow("c", "i", "identity", "fail")
    assert _bundle_exit_code([ok, info]) == 0
    assert _bundle_exit_code([ok, hard_fail]) == 1
    assert _bundle_exit_code([hard_fail, identity_fail]) == 4
