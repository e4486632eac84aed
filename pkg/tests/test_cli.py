import json

import pytest

from urtlab.cli import cli_main


def run_cli(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_usage_on_unknown_subcommand(capsys):
    code, _, err = run_cli(capsys, "frobnicate")
    assert code == 1
    assert "usage" in err.lower()


def test_no_arguments_is_invalid(capsys):
    code, _, _ = run_cli(capsys)
    assert code == 1


def test_help_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "--help")
    assert code == 0
    assert "generate" in out


def test_generate_prints_parent_sequence(capsys):
    code, out, err = run_cli(capsys, "generate", "--n", "6", "--seed", "42")
    assert code == 0
    parents = json.loads(out)
    assert len(parents) == 5
    assert all(parents[i] <= i for i in range(5))
    assert "# urtlab generate" in err and '"seed": 42' in err


def test_generate_stats_pipeline(tmp_path, capsys):
    tree_file = tmp_path / "t.urt"
    code, _, _ = run_cli(capsys, "generate", "--model", "preferential", "--n", "500",
                         "--seed", "7", "--out", str(tree_file))
    assert code == 0
    code, out, _ = run_cli(capsys, "stats", "--in", str(tree_file), "--k", "1,2", "--t", "0.5")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 500
    assert payload["model"] == "preferential"
    assert sum(payload["level_sizes"]) == 500
    assert sum(payload["degree_histogram"].values()) == 500
    assert payload["max_degree"] >= 2
    assert len(payload["exceedance_fractions"]) == 2


def test_stats_from_seed(capsys):
    code, out, _ = run_cli(capsys, "stats", "--model", "uniform", "--n", "100", "--seed", "3")
    assert code == 0
    assert json.loads(out)["n"] == 100


def test_stats_without_input_is_invalid(capsys):
    code, _, err = run_cli(capsys, "stats", "--model", "uniform")
    assert code == 1
    assert "error" in err


def test_bijection_forward_and_inverse(capsys):
    code, out, _ = run_cli(capsys, "bijection", "--parents", "0,1")
    assert code == 0
    assert json.loads(out) == [1, 3, 2]
    code, out, _ = run_cli(capsys, "bijection", "--perm", "1,3,2")
    assert code == 0
    assert json.loads(out) == [0, 1]


def test_bijection_fixed_points_and_errors(capsys):
    code, out, _ = run_cli(capsys, "bijection", "--perm", "1,2,3", "--fixed-points")
    assert code == 0
    assert out.strip() == "2"
    code, _, err = run_cli(capsys, "bijection", "--perm", "2,1")
    assert code == 1
    assert "position 1" in err
    code, _, _ = run_cli(capsys, "bijection", "--perm", "1,2", "--parents", "0")
    assert code == 1


def test_moments_prints_exact_fraction(capsys):
    code, out, _ = run_cli(capsys, "moments", "--n", "3", "--k", "0,1")
    assert code == 0
    assert out.strip() == "1/2"
    code, out, _ = run_cli(capsys, "moments", "--n", "9", "--k", "1")
    assert code == 0
    assert out.strip() == "1"


def test_moments_invalid_n(capsys):
    code, _, _ = run_cli(capsys, "moments", "--n", "1", "--k", "1")
    assert code == 1


def test_moments_table_csv(tmp_path, capsys):
    out_file = tmp_path / "m.csv"
    code, _, _ = run_cli(capsys, "moments", "--n", "4", "--k", "0,1", "--table",
                         "--ns", "2,3,4", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "n,k,numerator,denominator"
    assert "3,0-1,1,2" in lines


def test_enumerate_distribution(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--n", "3", "--statistic",
                           "level_degree_count", "--d", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["support"] == {"0": "1/2", "2": "1/2"}
    assert payload["expectation"] == "1/1"


def test_enumerate_guard_exit_code(capsys):
    code, _, err = run_cli(capsys, "enumerate", "--n", "12")
    assert code == 2
    assert "guard" in err


def test_bounds_command(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--i", "1", "--n", "3", "--a", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["s"] == pytest.approx(5 / 6)
    assert payload["exact_tail_geq_a"] == pytest.approx(1 / 6)
    assert payload["upper_tail_bound"] == pytest.approx(0.7116, abs=5e-5)
    assert payload["upper_tail_bound"] >= payload["exact_tail_geq_a"]

    code, out, _ = run_cli(capsys, "bounds", "--n", "1000000", "--t", "0.5", "--eps", "0.1")
    payload = json.loads(out)
    assert code == 0
    assert payload["high_index_bound"] == pytest.approx(0.8710, abs=5e-5)
    assert payload["low_index_bound"] == pytest.approx(0.8913, abs=5e-5)


def test_bounds_domain_error_exit_code(capsys):
    code, _, _ = run_cli(capsys, "bounds", "--n", "100", "--t", "0.5", "--eps", "0.9")
    assert code == 1


def test_bounds_without_work_is_invalid(capsys):
    code, _, _ = run_cli(capsys, "bounds")
    assert code == 1


def test_experiment_json_report(tmp_path, capsys):
    out_file = tmp_path / "r.json"
    code, _, err = run_cli(
        capsys, "experiment", "theorem31", "--n", "200", "--reps", "50",
        "--dmax", "2", "--seed", "42", "--workers", "1", "--out", str(out_file),
    )
    assert code == 0
    assert "# urtlab experiment" in err
    payload = json.loads(out_file.read_text())
    assert payload["schema"] == "urt-report/1"
    assert payload["experiment"] == "first_level_degrees"
    assert payload["seed"] == 42
    assert payload["rows"]


def test_experiment_csv_to_stdout(capsys):
    code, out, _ = run_cli(
        capsys, "experiment", "degree_distribution", "--n", "500", "--reps", "3",
        "--seed", "1", "--dmax", "2", "--workers", "1", "--format", "csv",
    )
    assert code == 0
    assert out.startswith("# schema: urt-report/1")


def test_experiment_invalid_grid(capsys):
    code, _, _ = run_cli(capsys, "experiment", "level_exceedance", "--n", "100",
                         "--reps", "5", "--seed", "1", "--t", "1.5", "--workers", "1")
    assert code == 1


def test_experiment_unknown_id(capsys):
    code, _, _ = run_cli(capsys, "experiment", "mystery", "--n", "100",
                         "--reps", "5", "--seed", "1")
    assert code == 1
