import json

import pytest

from strohhacker import admissibility, cli
from strohhacker.cli import EXIT_FAIL, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, UsageError, main, parse_values


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def data_lines(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


# ── values ────────────────────────────────────────────
def test_parse_values():
    assert parse_values("1..4", integer=True) == [1, 2, 3, 4]
    assert parse_values("1,3", integer=True) == [1, 3]
    assert parse_values("0.1..0.9/5") == pytest.approx([0.1, 0.3, 0.5, 0.7, 0.9])
    assert parse_values("0.25") == [0.25]
    assert parse_values("") == []
    assert parse_values(None) == []


def test_parse_values_rejects_garbage():
    with pytest.raises(UsageError):
        parse_values("one..two")
    with pytest.raises(UsageError):
        parse_values("0..1/0")


# ── thresholds ────────────────────────────────────────
def test_t25_threshold_table(capsys):
    code, out = run(capsys, "thresholds", "--theorem", "T25", "--p", "1..4", "--format", "csv")
    assert code == EXIT_OK
    lines = data_lines(out)
    assert lines[0] == ",".join(cli.THRESHOLD_COLUMNS)
    assert [line.split(",")[4] for line in lines[1:]] == ["0.5", "0.707106781187", "0.866025403784", "1"]


def test_t31_corollary_bound(capsys):
    code, out = run(capsys, "thresholds", "--theorem", "T31", "--p", "2", "--b", "2", "--beta", "1",
                    "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert rows[0]["bound"] == pytest.approx(0.5)


def test_empty_sweep(capsys):
    code, out = run(capsys, "thresholds", "--theorem", "T22", "--p", "", "--format", "csv")
    assert code == EXIT_OK
    assert data_lines(out) == [",".join(cli.THRESHOLD_COLUMNS)]


def test_domain_errors_are_rows(capsys):
    code, out = run(capsys, "thresholds", "--theorem", "T22", "--p", "1", "--level", "0.5,1",
                    "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert rows[0]["error"] is None and rows[0]["bound"] == pytest.approx(0)
    assert rows[1]["bound"] is None and rows[1]["error"].startswith("DomainError")


def test_table_header_carries_version_and_seed(capsys):
    code, out = run(capsys, "thresholds", "--theorem", "T38", "--p", "1", "--b", "1", "--seed", "7")
    assert code == EXIT_OK
    assert out.startswith("# strohhacker ")
    assert "seed=7" in out.splitlines()[0]


def test_repeated_runs_are_byte_identical(capsys):
    argv = ["thresholds", "--theorem", "T33", "--p", "1..3", "--b", "0,0.5", "--beta", "0.25,0.75",
            "--format", "json"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


def test_params_file(tmp_path, capsys):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"theorem": "T32", "p": [1], "b": 0.0, "gamma": 0.5}))
    code, out = run(capsys, "thresholds", "--params", str(params), "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["rows"][0]["bound"] == pytest.approx(0)


def test_csv_carries_run_meta(capsys):
    code, out = run(capsys, "admissible", "--theorem", "T25", "--p", "1", "--format", "csv", "--seed", "4")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("# strohhacker ")
    assert "seed=4" in lines[0]
    assert lines[1] == f"# {admissibility.REGION_NOTE}"
    assert lines[2] == ",".join(cli.ADMISSIBLE_COLUMNS)
    assert len(lines) == 4


def test_params_file_sets_defaulted_options(tmp_path, capsys):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"seed": 7, "format": "json", "p": 2}))
    code, out = run(capsys, "thresholds", "--theorem", "T25", "--params", str(params))
    assert code == EXIT_OK
    body = json.loads(out)
    assert body["meta"]["seed"] == 7
    assert body["rows"][0]["p"] == 2


def test_command_line_beats_params_file(tmp_path, capsys):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"seed": 7, "format": "json"}))
    code, out = run(capsys, "thresholds", "--theorem", "T25", "--params", str(params), "--seed", "3")
    assert code == EXIT_OK
    assert json.loads(out)["meta"]["seed"] == 3


def test_params_file_with_bad_values(tmp_path, capsys):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"format": "yaml"}))
    assert main(["thresholds", "--theorem", "T25", "--params", str(params)]) == EXIT_USAGE
    params.write_text(json.dumps({"seed": "seven"}))
    assert main(["thresholds", "--theorem", "T25", "--params", str(params)]) == EXIT_USAGE


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out = run(capsys, "thresholds", "--theorem", "T25", "--p", "1", "--format", "csv",
                    "--output", str(target))
    assert code == EXIT_OK
    assert out == ""
    assert data_lines(target.read_text())[1].split(",")[4] == "0.5"


# ── usage ─────────────────────────────────────────────
@pytest.mark.parametrize("argv", [
    ["thresholds", "--theorem", "T99"],
    ["thresholds", "--p", "1"],
    ["thresholds", "--theorem", "T25", "--p", "x"],
    ["admissible", "--theorem", "LemmaPhi"],
    ["sharpness", "--theorem", "T25", "--p", "1,2"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


# ── admissible ────────────────────────────────────────
def test_admissible_sweep_passes(capsys):
    code, out = run(capsys, "admissible", "--theorem", "T22", "--p", "1..3", "--beta", "0.1..0.9/9",
                    "--format", "json")
    assert code == EXIT_OK
    body = json.loads(out)
    assert len(body["rows"]) == 27
    assert all(row["certified"] for row in body["rows"])
    assert max(row["margin"] for row in body["rows"]) < 1e-3
    assert body["meta"]["notes"]


def test_admissible_out_of_domain_row(capsys):
    code, out = run(capsys, "admissible", "--theorem", "T22", "--p", "1", "--beta", "0.5,1",
                    "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert rows[0]["certified"]
    assert rows[1]["error"].startswith("DomainError")


def test_admissible_infeasible(capsys):
    code, _ = run(capsys, "admissible", "--theorem", "T37", "--p", "1", "--b", "0", "--gamma", "0.5")
    assert code == EXIT_INFEASIBLE


def test_admissible_pole(capsys):
    code, _ = run(capsys, "admissible", "--theorem", "T22", "--p", "1", "--beta", "0")
    assert code == EXIT_FAIL


def test_admissible_curve(capsys):
    code, out = run(capsys, "admissible", "--theorem", "T25", "--p", "1", "--samples", "101",
                    "--curve", "--format", "csv")
    assert code == EXIT_OK
    lines = data_lines(out)
    assert lines[0] == ",".join(cli.CURVE_COLUMNS)
    assert len(lines) == 102


# ── verify / sharpness ────────────────────────────────
def test_verify_monomials(capsys):
    code, out = run(capsys, "verify", "--theorem", "T25", "--p", "1..3", "--corpus", "monomials",
                    "--levels", "6", "--angular-count", "256")
    assert code == EXIT_OK
    assert out.rstrip().endswith("violations: 0")


def test_verify_infeasible_t37(capsys):
    code, _ = run(capsys, "verify", "--theorem", "T37", "--p", "1", "--b", "0", "--gamma", "0.5",
                  "--corpus", "monomials")
    assert code == EXIT_INFEASIBLE


def test_verify_corpus_round_trip(tmp_path, capsys):
    manifest = tmp_path / "corpus.json"
    argv = ["verify", "--theorem", "T32", "--p", "1", "--b", "0.5", "--gamma", "0.5", "--size", "3",
            "--levels", "6", "--angular-count", "256", "--format", "csv"]
    code, generated = run(capsys, *argv, "--corpus-out", str(manifest))
    assert code == EXIT_OK
    code, reloaded = run(capsys, *argv, "--corpus", str(manifest))
    assert code == EXIT_OK
    assert generated == reloaded
    assert data_lines(generated)[0] == ",".join(cli.VERIFY_COLUMNS)


def test_verify_missing_manifest(tmp_path, capsys):
    code, _ = run(capsys, "verify", "--theorem", "T25", "--p", "1", "--corpus", str(tmp_path / "nope.json"))
    assert code == EXIT_USAGE


def test_sharpness(capsys):
    code, out = run(capsys, "sharpness", "--theorem", "T25", "--p", "1", "--budget", "5", "--format", "json")
    assert code == EXIT_OK
    result = json.loads(out)["result"]
    assert result["evaluations"] == 5
    assert result["case_id"] == "T25-p1"


# ── minima ────────────────────────────────────────────
def test_minima_of_monomials(capsys):
    code, out = run(capsys, "minima", "--p", "2", "--corpus", "monomials", "--functional",
                    "Starlikeness,PowerRatio", "--levels", "4", "--angular-count", "64", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("# strohhacker ")
    lines = data_lines(out)
    assert lines[0] == ",".join(cli.MINIMA_COLUMNS)
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 2 * 4
    # z f'/f = 2 and f/z^2 = 1 on every circle
    assert {(r[1], r[3]) for r in rows} == {("Starlikeness", "2"), ("PowerRatio", "1")}
    assert [float(r[2]) for r in rows[:4]] == pytest.approx([0.5, 0.75, 0.875, 0.9375])


def test_minima_are_nonincreasing(capsys):
    code, out = run(capsys, "minima", "--p", "1", "--b", "0.5", "--size", "3", "--functional",
                    "Convexity", "--levels", "6", "--angular-count", "256", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert len(rows) == 3 * 6
    by_function = {}
    for row in rows:
        by_function.setdefault(row["function_id"], []).append(row["min_re"])
    for minima in by_function.values():
        assert all(b <= a + 1e-6 for a, b in zip(minima, minima[1:]))


def test_minima_rejects_unknown_functional(capsys):
    assert main(["minima", "--functional", "Curvature"]) == EXIT_USAGE
