import csv
import io
import json

import pytest

from lambshift.cli import EXIT_NOT_CONVERGED, EXIT_OK, EXIT_USAGE, main


def run_cli(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_rates_ground_state_json(capsys):
    status, out, _ = run_cli(capsys, "rates", "--z", "1", "--n", "1", "--l", "0", "--format", "json")
    assert status == EXIT_OK
    payload = json.loads(out)
    assert payload["partial_rates"] == []
    assert payload["total_rate"] == 0


def test_rates_2p_text_contains_value(capsys):
    status, out, _ = run_cli(capsys, "rates", "--n", "2", "--l", "1")
    assert status == EXIT_OK
    assert "626.81" in out


def test_shift_text_output(capsys):
    status, out, _ = run_cli(capsys, "shift", "--z", "1", "--n", "2", "--l", "1",
                             "--rel-tol", "1e-8")
    assert status == EXIT_OK
    assert "lamb_shift" in out and "MHz" in out
    # three-route consensus value for this state; see the acceptance suite
    # for the comparison against the published table entry
    assert "4.086" in out
    assert "626.81" in out


def test_shift_json_and_csv_digits_identical(capsys):
    args = ("shift", "--n", "2", "--l", "0", "--rel-tol", "1e-8")
    status, out_json, _ = run_cli(capsys, *args, "--format", "json")
    assert status == EXIT_OK
    payload = json.loads(out_json)
    status, out_csv, _ = run_cli(capsys, *args, "--format", "csv")
    assert status == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out_csv)))
    csv_value = [r["value"] for r in rows if r["quantity"] == "lamb_shift"][0]
    assert float(csv_value) == payload["lamb_shift_MHz"]
    assert csv_value == format(payload["lamb_shift_MHz"], ".12g")


def test_invalid_quantum_numbers_exit_2(capsys):
    status, out, err = run_cli(capsys, "shift", "--n", "2", "--l", "2")
    assert status == EXIT_USAGE
    assert out == ""
    assert "L" in err or "quantum" in err


def test_cutoff_without_dipole_rejected(capsys):
    status, _, err = run_cli(capsys, "shift", "--n", "1", "--l", "0", "--cutoff-x", "100")
    assert status == EXIT_USAGE
    assert "--dipole" in err


def test_dipole_needs_cutoff_for_shift(capsys):
    status, _, err = run_cli(capsys, "shift", "--n", "1", "--l", "0", "--dipole")
    assert status == EXIT_USAGE


def test_bethe_command(capsys):
    status, out, _ = run_cli(
        capsys, "bethe", "--n", "1", "--l", "0",
        "--cutoffs", "1e3", "3e3", "1e4", "--format", "json",
    )
    assert status == EXIT_OK
    payload = json.loads(out)
    assert payload["bethe_log"] == pytest.approx(2.98413, abs=2e-3)
    assert payload["converged"] is True


def test_table_csv_covers_every_published_cell(capsys):
    status, out, _ = run_cli(capsys, "table", "--id", "1", "--format", "csv",
                             "--rel-tol", "1e-7")
    assert status == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert set(rows[0].keys()) >= {"table_id", "N", "L", "J", "n", "quantity",
                                   "unit", "computed", "reference", "rel_dev"}
    keys = {(r["N"], r["L"], r["n"], r["quantity"]) for r in rows}
    # the 13 published rows: 7 shift cells + rate cells per open channel
    for N, L in ((1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (4, 0), (4, 1)):
        assert (str(N), str(L), "", "lamb_shift") in keys
        for n in range(1, N):
            assert (str(N), str(L), str(n), "partial_rate") in keys
    with_refs = [r for r in rows if r["reference"] and float(r["reference"]) != 0.0]
    assert with_refs and all(r["rel_dev"] != "" for r in with_refs)


def test_constants_file_flag(tmp_path, capsys):
    path = tmp_path / "c.txt"
    path.write_text("alpha0 = 7.2973525693e-3\nmec2_eV = 510998.95\nhbar_eVs = 6.582119569e-16\n")
    status, out, _ = run_cli(capsys, "rates", "--n", "2", "--l", "1",
                             "--constants-file", str(path))
    assert status == EXIT_OK
    assert "626.81" in out


def test_nonconvergence_exit_3(capsys, monkeypatch):
    import lambshift.cli as cli_mod

    class FakeResult:
        lamb_shift_MHz = 1.0
        tau_phi_term_MHz = 1.0
        pv_term_MHz = 0.0
        partial_rates = ()
        total_rate = 0.0
        converged = False

        def as_dict(self):
            return {"lamb_shift_MHz": 1.0, "converged": False}

    monkeypatch.setattr(cli_mod, "lamb_shift", lambda *a, **k: FakeResult())
    status, out, _ = run_cli(capsys, "shift", "--n", "1", "--l", "0")
    assert status == EXIT_NOT_CONVERGED
    assert out != ""  # report still printed


def test_verify_subcommand_hidden_but_functional(capsys):
    status, out, _ = run_cli(capsys, "verify", "--format", "json")
    assert status == EXIT_OK
    checks = json.loads(out)
    assert all(c["pass"] for c in checks)


def test_verify_not_advertised_in_help(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    help_text = capsys.readouterr().out
    assert "verify" not in help_text
