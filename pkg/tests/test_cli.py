import csv

import pytest

from frisec.cli import cli_main, run_selftest


def test_unknown_flag_nonzero_with_usage(capsys):
    code = cli_main(["fig2", "--bogus"])
    assert code != 0
    assert "usage" in capsys.readouterr().err.lower()


def test_missing_config_names_path(capsys):
    code = cli_main(["run", "--config", "/no/such/file.conf"])
    assert code == 1
    assert "/no/such/file.conf" in capsys.readouterr().err


def test_unknown_config_key_nonzero(tmp_path, capsys):
    path = tmp_path / "bad.conf"
    path.write_text("whatever = 1\n")
    code = cli_main(["run", "--config", str(path)])
    assert code == 1
    assert "whatever" in capsys.readouterr().err


def test_preset_writes_csv(tmp_path, capsys):
    out = tmp_path / "fig4.csv"
    code = cli_main(["fig4", "--trials", "1", "--schemes", "no_surface",
                     "--seed", "3", "--out", str(out)])
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    # one record per sweep point, including the N = N_hat = 16 edge point
    values = sorted(float(r["sweep_value"]) for r in rows)
    assert values == [16.0, 25.0, 50.0, 75.0, 100.0]
    assert all(r["scheme"] == "no_surface" for r in rows)
    assert "wrote 5 records" in capsys.readouterr().out


def test_run_with_config_file(tmp_path, capsys):
    conf = tmp_path / "exp.conf"
    conf.write_text(
        "m = 2\nn = 8\nn_hat = 2\nb = 1\ntrials = 2\nbase_seed = 4\n"
        "schemes = no_surface\nsweep_variable = power\nsweep_values = 20\n")
    out = tmp_path / "records.csv"
    code = cli_main(["run", "--config", str(conf), "--out", str(out)])
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2


def test_cli_trial_flag_overrides_config(tmp_path):
    conf = tmp_path / "exp.conf"
    conf.write_text(
        "m = 2\nn = 8\nn_hat = 2\nb = 1\ntrials = 5\nbase_seed = 4\n"
        "schemes = no_surface\nsweep_variable = power\nsweep_values = 20\n")
    out = tmp_path / "r.csv"
    assert cli_main(["run", "--config", str(conf), "--trials", "1",
                     "--out", str(out)]) == 0
    with open(out) as fh:
        assert len(list(csv.DictReader(fh))) == 1


def test_selftest_smoke():
    # the full 100-instance version runs in the acceptance suite
    assert run_selftest(instances=10, verbose=False) == 0


def test_seed_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("FRIS_SEED", "42")
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert cli_main(["fig2", "--trials", "1", "--schemes", "no_surface",
                     "--out", str(out1)]) == 0
    assert cli_main(["fig2", "--trials", "1", "--schemes", "no_surface",
                     "--seed", "42", "--out", str(out2)]) == 0
    strip = lambda p: [
        ",".join(line.split(",")[:7]) for line in p.read_text().splitlines()]
    assert strip(out1) == strip(out2)
