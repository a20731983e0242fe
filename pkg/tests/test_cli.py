from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from qsample import bounds
from qsample.cli import UsageError, main, parse_range
from qsample.codes import GeneratorMatrix, min_distance
from qsample.ensembles import PacEnsembleParams, gram_profile
from qsample.pgm import pgm_success_xor


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_pgm_pac_sweep(capsys):
    code, out = run(capsys, "pgm", "--kind", "pac", "--d", "16", "--k", "4", "--epsilon", "0.04", "--T", "1:50")
    table = rows(out)
    assert code == 0
    assert len(table) == 50
    assert all(r["satisfied"] == "true" for r in table)
    assert [int(r["t"]) for r in table] == list(range(1, 51))


def test_pgm_codeword_sweep(capsys):
    code, out = run(capsys, "pgm", "--kind", "codeword", "--d", "16", "--k", "4", "--T", "1:16")
    table = rows(out)
    assert code == 0
    assert len(table) == 16
    assert all(r["satisfied"] == "true" for r in table)


def test_row_reproduces_through_library(tmp_path, capsys):
    code_file = tmp_path / "code.json"
    run(capsys, "code", "--n", "16", "--seed", "3", "--out", str(code_file))
    M = GeneratorMatrix.from_json(code_file.read_text())
    _, out = run(capsys, "pgm", "--kind", "pac", "--d", "16", "--epsilon", "0.03", "--T", "7", "--code", str(code_file))
    (row,) = rows(out)
    exact = pgm_success_xor(gram_profile(PacEnsembleParams(16, 0.03, 7, M))).success_probability
    assert float(row["exact_fourier"]) == exact
    assert float(row["bound"]) == bounds.pgm_pac_bound(16, M.k, 7, 0.03, strict=False)


def test_empty_range_is_usage_error(capsys):
    assert main(["pgm", "--T", "5:1"]) == 1
    assert "empty" in capsys.readouterr().err


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["pgm", "--kind", "bogus"])
    assert exc.value.code == 1


def test_parse_range():
    assert parse_range("1:5") == [1, 2, 3, 4, 5]
    assert parse_range("1:10:3") == [1, 4, 7, 10]
    assert parse_range("0.01,0.05") == [0.01, 0.05]
    assert parse_range("7") == [7]
    for bad in ("5:1", "1:5:0", ""):
        with pytest.raises(UsageError):
            parse_range(bad)


def test_info_row(capsys):
    code, out = run(capsys, "info", "--setting", "pac", "--d", "8", "--epsilon", "0.05", "--format", "json")
    (row,) = json.loads(out)
    assert code == 0
    assert row["classical"] == pytest.approx(0.2)
    assert row["quantum_bound"] == pytest.approx(bounds.binary_entropy(0.2) + 0.2 * math.log2(16))


def test_info_violation_exit_code(capsys):
    # agnostic eps=0.2 exceeds the per-example bound; reported and flagged
    code, out = run(capsys, "info", "--setting", "agnostic", "--d", "4", "--epsilon", "0.2")
    assert code == 2
    assert rows(out)[0]["satisfied"] == "false"


def test_code_command(capsys):
    code, out = run(capsys, "code", "--n", "32", "--seed", "7")
    data = json.loads(out)
    assert code == 0
    assert data["k"] == 8 and data["min_distance"] >= 4
    assert min_distance(GeneratorMatrix.from_dict(data)) == data["min_distance"]


def test_fourier_command(capsys):
    code, out = run(capsys, "fourier", "--beta", "1", "--m", "12", "--T", "1")
    table = rows(out)
    assert code == 0
    assert len(table) == 13
    assert all(float(r["max_coefficient"]) <= float(r["bound"]) for r in table)


def test_learn_commands(capsys):
    code, out = run(capsys, "learn", "bv", "--n", "4", "--trials", "200", "--seed", "1")
    assert code == 0 and 0 < float(rows(out)[0]["success_rate"]) < 1
    code, out = run(capsys, "learn", "erm", "--d", "4", "--epsilon", "0.1", "--T", "20,40", "--trials", "50")
    assert code == 0 and len(rows(out)) == 2
    code, out = run(capsys, "learn", "pgm", "--d", "16", "--k", "4", "--epsilon", "0.04", "--T", "5", "--trials", "100")
    assert code == 0 and "analytic" in rows(out)[0]


def test_resource_exit_code(capsys):
    assert main(["learn", "bv", "--n", "20", "--trials", "1"]) == 3


def test_params_file_and_env(tmp_path, capsys, monkeypatch):
    params = tmp_path / "p.json"
    params.write_text(json.dumps({"setting": "agnostic", "d": 4, "epsilon": "0.05"}))
    _, out = run(capsys, "info", "--params", str(params))
    (row,) = rows(out)
    assert row["setting"] == "agnostic" and row["d"] == "4"
    monkeypatch.setenv("QSAMPLE_FORMAT", "json")
    _, out = run(capsys, "info", "--params", str(params))
    assert json.loads(out)[0]["setting"] == "agnostic"
    params.write_text(json.dumps({"bogus": 1}))
    assert main(["info", "--params", str(params)]) == 1


def test_jobs_do_not_change_output(capsys):
    argv = ["pgm", "--kind", "noisy", "--d", "16", "--epsilon", "0.02", "--eta", "0.1", "--T", "1:20"]
    _, serial = run(capsys, *argv, "--jobs", "1")
    _, parallel = run(capsys, *argv, "--jobs", "4")
    assert serial == parallel


def test_reruns_are_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}.csv"
        cmd = [sys.executable, "-m", "qsample", "learn", "sample-complexity", "--d", "4", "--epsilon", "0.1",
               "--delta", "0.2", "--trials", "100", "--seed", "5", "--out", str(path)]
        subprocess.run(cmd, check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_subset(capsys):
    code, out = run(capsys, "verify", "--only", "6,10", "--skip-determinism")
    assert code == 0
    lines = [line for line in out.splitlines() if line.startswith("criterion")]
    assert len(lines) == 2 and all("[PASS]" in line for line in lines)
