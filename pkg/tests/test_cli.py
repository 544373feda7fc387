"""Command-line interface: tables, formats, exit codes."""

import io
import json

import pytest

from walkers_return.cli import Table, emit_csv, main, parse_csv


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(out):
    table = parse_csv(out)
    return table.columns, table.rows


# ---------------------------------------------------------------------------
# return command


def test_return_hadamard_table(capsys):
    code, out, _ = run_cli(capsys, "return", "--model", "hadamard", "--nmax", "8")
    assert code == 0
    columns, rows = csv_rows(out)
    assert columns == ["n", "r_closed", "r_simulated", "abs_err"]
    by_n = {row[0]: row for row in rows}
    assert by_n[4][1] == pytest.approx(0.125, abs=1e-14)
    assert by_n[3][1] == 0.0
    assert all(row[3] < 1e-10 for row in rows)


def test_return_qw_two_steps(capsys):
    code, out, _ = run_cli(capsys, "return", "--model", "qw", "--alpha-sq", "0.8", "--nmax", "2")
    assert code == 0
    _, rows = csv_rows(out)
    assert rows[-1][1] == pytest.approx(0.2, abs=1e-13)


def test_return_rw_table(capsys):
    code, out, _ = run_cli(capsys, "return", "--model", "rw", "--p", "0.5", "--nmax", "4")
    assert code == 0
    _, rows = csv_rows(out)
    assert rows[-1][1] == pytest.approx(0.375, abs=1e-14)


def test_return_crw_accepts_b_or_d(capsys):
    code_d, out_d, _ = run_cli(
        capsys, "return", "--model", "crw", "--a", "0.7", "--d", "0.6", "--phi1", "0.3", "--nmax", "6"
    )
    code_b, out_b, _ = run_cli(
        capsys, "return", "--model", "crw", "--a", "0.7", "--b", "0.4", "--phi1", "0.3", "--nmax", "6"
    )
    assert code_d == 0 and code_b == 0
    assert out_d == out_b


def test_return_rejects_inconsistent_b_and_d(capsys):
    code, _, err = run_cli(
        capsys, "return", "--model", "crw", "--a", "0.7", "--b", "0.5", "--d", "0.6"
    )
    assert code == 2
    assert "b must equal 1 - d" in err


def test_return_rejects_unknown_model(capsys):
    code, _, err = run_cli(capsys, "return", "--model", "polya3d")
    assert code == 2
    assert "not supported" in err


def test_return_rejects_missing_parameter(capsys):
    code, _, err = run_cli(capsys, "return", "--model", "qw")
    assert code == 2
    assert "--alpha-sq" in err


def test_return_rejects_invalid_alpha(capsys):
    code, _, err = run_cli(capsys, "return", "--model", "qw", "--alpha-sq", "1.5")
    assert code == 2


# ---------------------------------------------------------------------------
# genfunc command


def test_genfunc_rw_value(capsys):
    code, out, _ = run_cli(
        capsys,
        "genfunc", "--model", "rw", "--p", "0.5",
        "--z-start", "0.6", "--z-stop", "0.6", "--z-count", "1",
    )
    assert code == 0
    _, rows = csv_rows(out)
    assert rows[0][1] == pytest.approx(1.25, abs=1e-12)


def test_genfunc_hadamard_at_zero(capsys):
    code, out, _ = run_cli(
        capsys,
        "genfunc", "--model", "hadamard",
        "--z-start", "0", "--z-stop", "0", "--z-count", "1",
    )
    assert code == 0
    _, rows = csv_rows(out)
    assert rows[0][1] == pytest.approx(1.0, abs=1e-14)


def test_genfunc_qw_grid_small_errors(capsys):
    code, out, _ = run_cli(
        capsys,
        "genfunc", "--model", "qw", "--alpha-sq", "0.8",
        "--z-start", "0.1", "--z-stop", "0.7", "--z-count", "5",
    )
    assert code == 0
    _, rows = csv_rows(out)
    assert len(rows) == 5
    assert all(row[3] < 1e-6 + row[4] for row in rows)


def test_genfunc_polya2d(capsys):
    code, out, _ = run_cli(
        capsys,
        "genfunc", "--model", "polya2d",
        "--z-start", "0.3", "--z-stop", "0.6", "--z-count", "2",
    )
    assert code == 0
    _, rows = csv_rows(out)
    assert all(row[3] < 1e-9 + row[4] for row in rows)


def test_genfunc_rejects_z_outside_unit_disk(capsys):
    code, _, err = run_cli(
        capsys,
        "genfunc", "--model", "hadamard",
        "--z-start", "0.5", "--z-stop", "1.0", "--z-count", "2",
    )
    assert code == 2
    assert "inside (-1, 1)" in err


# ---------------------------------------------------------------------------
# dist command


def test_dist_hadamard_two_steps(capsys):
    code, out, _ = run_cli(capsys, "dist", "--model", "hadamard", "--nmax", "2")
    assert code == 0
    _, rows = csv_rows(out)
    probs = {row[0]: row[1] for row in rows}
    assert probs[-2] == pytest.approx(0.25, abs=1e-13)
    assert probs[0] == pytest.approx(0.5, abs=1e-13)
    assert probs[2] == pytest.approx(0.25, abs=1e-13)
    assert sum(p for p in probs.values()) == pytest.approx(1.0, abs=1e-9)


def test_dist_symmetric_crw(capsys):
    code, out, _ = run_cli(
        capsys, "dist", "--model", "crw", "--a", "0.5", "--d", "0.5", "--nmax", "2"
    )
    assert code == 0
    _, rows = csv_rows(out)
    probs = {row[0]: row[1] for row in rows}
    assert probs[-2] == pytest.approx(0.25, abs=1e-14)
    assert probs[0] == pytest.approx(0.5, abs=1e-14)


def test_dist_mass_sums_to_one(capsys):
    code, out, _ = run_cli(
        capsys, "dist", "--model", "rw", "--p", "0.3", "--nmax", "61"
    )
    assert code == 0
    _, rows = csv_rows(out)
    assert sum(row[1] for row in rows) == pytest.approx(1.0, abs=1e-9)


def test_dist_rejects_oversized_time(capsys):
    code, _, err = run_cli(capsys, "dist", "--model", "hadamard", "--nmax", "100001")
    assert code == 2


# ---------------------------------------------------------------------------
# verify command


def test_verify_specfun_suite(capsys):
    code, out, _ = run_cli(capsys, "verify", "specfun")
    assert code == 0
    assert "[PASS]" in out
    assert "[FAIL]" not in out
    assert "landen" in out


def test_verify_qw_suite_reports_oracle_triangle(capsys):
    code, out, _ = run_cli(capsys, "verify", "qw")
    assert code == 0
    assert "oracle-triangle" in out
    assert "[FAIL]" not in out


def test_verify_rejects_unknown_suite(capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "bogus"])
    assert err.value.code == 2


# ---------------------------------------------------------------------------
# output formats


def test_csv_output_round_trips_exactly(capsys):
    code, out, _ = run_cli(capsys, "return", "--model", "qw", "--alpha-sq", "0.37", "--nmax", "12")
    assert code == 0
    parsed = parse_csv(out)
    stream = io.StringIO()
    emit_csv(Table(columns=parsed.columns, rows=parsed.rows), stream)
    assert stream.getvalue() == out


def test_json_output_carries_meta(capsys):
    code, out, _ = run_cli(
        capsys,
        "return", "--model", "hadamard", "--nmax", "4", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["meta"]["model"] == "hadamard"
    assert payload["meta"]["command"] == "return"
    assert "version" in payload["meta"]
    assert payload["rows"][4]["r_closed"] == pytest.approx(0.125, abs=1e-14)


def test_gnuplot_output_two_columns(capsys):
    code, out, _ = run_cli(
        capsys,
        "genfunc", "--model", "rw", "--p", "0.5",
        "--z-start", "0.2", "--z-stop", "0.4", "--z-count", "2", "--gnuplot",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# z gf_closed")
    assert all(len(line.split()) == 2 for line in lines[1:])


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, out, _ = run_cli(
        capsys, "return", "--model", "hadamard", "--nmax", "4", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    parsed = parse_csv(target.read_text())
    assert parsed.rows[4][1] == pytest.approx(0.125, abs=1e-14)


# ---------------------------------------------------------------------------
# tolerance handling


def test_env_tolerance_override_can_fail_the_run(capsys, monkeypatch):
    monkeypatch.setenv("WALKERS_RETURN_TOL", "1e-30")
    code, out, _ = run_cli(capsys, "return", "--model", "hadamard", "--nmax", "8")
    assert code == 1


def test_tol_flag_beats_environment(capsys, monkeypatch):
    monkeypatch.setenv("WALKERS_RETURN_TOL", "1e-30")
    code, _, _ = run_cli(capsys, "return", "--model", "hadamard", "--nmax", "8", "--tol", "1e-8")
    assert code == 0


def test_bad_env_tolerance_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("WALKERS_RETURN_TOL", "not-a-number")
    code, _, err = run_cli(capsys, "return", "--model", "hadamard", "--nmax", "4")
    assert code == 2
