"""Command-line runner: config parsing, verdicts, exit codes, report files."""
import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from hup_lab import cli
from hup_lab.schema import REPORT_SCHEMA, SUITE_SCHEMA


def _write(tmp_path, text, name="exp.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


HS_CONFIG = """\
[experiment]
kind = "hs_identity"
seed = 7
csv = true

[params]
N = 1
M = 40

[params.region]
kind = "disk"
radius = 1.0
"""

HARMONIC_CONFIG = """\
[experiment]
kind = "hup_rank"
expect = "nullspace"

[params.cone]
kind = "harmonic"
terms = [{alpha = [1, 0], beta = [1, 0], re = 1.0}, {alpha = [0, 1], beta = [0, 1], re = -1.0}]
"""


def test_run_hs_identity_pass(tmp_path, capsys):
    cfg = _write(tmp_path, HS_CONFIG)
    out = tmp_path / "out"
    assert cli.main(["run", str(cfg), "--out", str(out)]) == 0
    doc = json.loads((out / "exp.json").read_text())
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["verdict"] == "PASS" and doc["inputs"]["seed"] == 7
    assert doc["results"]["details"]["rel_err"] < 0.02
    assert "PASS" in capsys.readouterr().out
    summary = dict(line.split(",", 1) for line in (out / "exp-summary.csv").read_text().splitlines())
    assert summary.pop("quantity") == "value"
    assert float(summary["rel_err"]) == doc["results"]["details"]["rel_err"]
    assert not [f for f in os.listdir(out) if f.endswith(".tmp")]


def test_run_harmonic_cone_pass_with_csv(tmp_path):
    cfg = _write(tmp_path, HARMONIC_CONFIG.replace('expect = "nullspace"', 'expect = "nullspace"\ncsv = true'))
    out = tmp_path / "out"
    assert cli.main(["run", str(cfg), "--out", str(out)]) == 0
    doc = json.loads((out / "exp.json").read_text())
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["verdict"] == "PASS"
    assert doc["results"]["residuals"]["chosen_harmonic_distance"] < 1e-8
    spectrum = (out / "exp-spectrum.csv").read_text().splitlines()
    assert spectrum[0] == "index,sigma" and len(spectrum) == 1 + 30


def test_run_h_cone_full_rank_expectation_fails(tmp_path):
    cfg = _write(tmp_path, '[experiment]\nkind = "hup_rank"\nexpect = "full-rank"\n')
    out = tmp_path / "out"
    assert cli.main(["run", str(cfg), "--out", str(out)]) == 1
    doc = json.loads((out / "exp.json").read_text())
    assert doc["verdict"] == "FAIL"
    assert any("harmonic cone" in r for r in doc["verdict_reasons"])


def test_negative_tolerance_is_config_error(tmp_path, capsys):
    cfg = _write(tmp_path, HS_CONFIG + "\n[tolerances]\nrel_err = -0.1\n")
    out = tmp_path / "out"
    assert cli.main(["run", str(cfg), "--out", str(out)]) == 2
    err = capsys.readouterr().err
    assert "tolerances.rel_err" in err and "line" in err
    assert not out.exists()


@pytest.mark.parametrize("text,needle", [
    ('[experiment]\nkind = "hs_identity"\nbogus = 1\n', "experiment.bogus (line 3)"),
    ('[experiment]\nkind = "hs_identity"\n[params]\nNN = 3\n', "params.NN"),
    ('[experiment]\nkind = "nope"\n', "experiment.kind"),
    ('[experiment]\nkind = "hs_identity"\nseed = -1\n', "experiment.seed"),
    ('[experiment]\nkind = "hs_identity"\n[params]\nN = -2\n', "params.N"),
    ('[experiment]\nkind = "hs_identity"\n[params.region]\nkind = "disk"\nradius = -1.0\n', "region"),
    ('[experiment]\nkind = "hup_rank"\nexpect = "maybe"\n', "experiment.expect"),
    ('[experiment]\nkind = "hup_rank"\n[params.cone]\nkind = "harmonic"\n'
     'terms = [{alpha = [2, 0], beta = [0, 0], re = 1.0}, {alpha = [1, 1], beta = [0, 0], re = 1.0}]\n'
     'extra = 1\n', "params.cone.extra"),
    ('[experiment]\nkind = "hup_rank"\n[params.cone]\nkind = "harmonic"\n'
     'terms = [{alpha = [1, 0], beta = [1, 0], re = 1.0}]\n', "harmonic"),
    ('[experiment\nkind = 1\n', "malformed TOML"),
    ('[other]\nx = 1\n', "unknown section"),
])
def test_config_errors_name_the_key(tmp_path, capsys, text, needle):
    cfg = _write(tmp_path, text)
    assert cli.main(["run", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert needle in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_missing_config_file(tmp_path, capsys):
    assert cli.main(["run", str(tmp_path / "missing.toml")]) == 2
    assert "cannot read config" in capsys.readouterr().err


def test_unknown_suite_and_bad_arguments(tmp_path, capsys):
    assert cli.main(["suite", "everything", "--out", str(tmp_path)]) == 2
    assert "unknown suite" in capsys.readouterr().err
    assert cli.main(["suite", "weyl", "--param", "nonsense"]) == 2
    assert cli.main(["suite", "weyl", "--param", "Q=3", "--out", str(tmp_path)]) == 2
    assert cli.main(["suite", "weyl", "--jobs", "0"]) == 2
    assert cli.main(["suite", "weyl", "--seed", "-4", "--out", str(tmp_path)]) == 2
    assert cli.main([]) == 2


def test_suite_identities_pass(tmp_path):
    assert cli.main(["suite", "identities", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "suite-identities.json").read_text())
    jsonschema.validate(doc, SUITE_SCHEMA)
    assert doc["verdict"] == "PASS"
    assert [m["name"] for m in doc["members"]] == ["funk_hecke", "hermite_laguerre_sum", "hecke_bochner", "bessel_form",
                                                     "plancherel"]
    for m in doc["members"]:
        member = json.loads((tmp_path / "identities" / f"{m['name']}.json").read_text())
        jsonschema.validate(member, REPORT_SCHEMA)
        assert m["timing"]["wall_time_s"] >= 0


def test_suite_weyl_truncated_fails_with_diagnostics(tmp_path):
    assert cli.main(["suite", "weyl", "--param", "M=10", "--out", str(tmp_path)]) == 1
    doc = json.loads((tmp_path / "suite-weyl.json").read_text())
    jsonschema.validate(doc, SUITE_SCHEMA)
    planch = next(m for m in doc["members"] if m["name"] == "plancherel")
    assert planch["verdict"] == "FAIL"
    assert any("truncation-dominated" in r for r in planch["verdict_reasons"])
    assert doc["overrides"] == {"M": 10}


def test_suite_hup_reports_h_cone_failure(tmp_path):
    assert cli.main(["suite", "hup", "--out", str(tmp_path)]) == 1
    doc = json.loads((tmp_path / "suite-hup.json").read_text())
    verdicts = {m["name"]: m["verdict"] for m in doc["members"]}
    assert verdicts.pop("hup_rank_H_cone") == "FAIL"
    assert set(verdicts.values()) == {"PASS"}


def test_suite_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli.main(["suite", "hup", "--out", str(a)])
    cli.main(["suite", "hup", "--jobs", "2", "--out", str(b)])
    da = json.loads((a / "suite-hup.json").read_text())
    db = json.loads((b / "suite-hup.json").read_text())
    assert cli.results_blocks(da) == cli.results_blocks(db)


def test_atomic_write_leaves_old_file_on_failure(tmp_path, monkeypatch):
    target = tmp_path / "r.json"
    cli.atomic_write(target, "old\n")

    def boom(*a, **k):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError):
        cli.atomic_write(target, "new\n")
    assert target.read_text() == "old\n"
    assert os.listdir(tmp_path) == ["r.json"]


def test_console_entry_point(tmp_path):
    cfg = _write(tmp_path, '[experiment]\nkind = "laguerre_zeros"\n[params]\nkmax = 6\n')
    proc = subprocess.run([sys.executable, "-m", "hup_lab.cli", "run", str(cfg), "--out", str(tmp_path / "o")],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    assert "laguerre_zeros: PASS" in proc.stdout
    rows = json.loads((tmp_path / "o" / "exp.json").read_text())["results"]["details"]["table"]
    assert [r["count"] for r in rows] == list(range(1, 7))


def test_table_csv_side_output(tmp_path):
    cfg = _write(tmp_path, '[experiment]\nkind = "laguerre_zeros"\ncsv = true\nname = "lz"\n[params]\nkmax = 4\n')
    assert cli.main(["run", str(cfg), "--out", str(tmp_path)]) == 0
    lines = Path(tmp_path / "lz-table.csv").read_text().splitlines()
    assert lines[0] == "count,k,min_abs_derivative,min_gap" and len(lines) == 5
