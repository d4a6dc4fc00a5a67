"""Batch driver: config parsing, record emission, exit codes."""

import csv
import json

import numpy as np
import pytest

from curvqes.cli import main

BASE_CONFIG = """
[run]
task = solve

[space]
lambda = 1.0
d = 1
p = 0

[potential]
family = 1
a = 0.5
b = 1.0
n = 0
"""


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _run(tmp_path, cfg_text, *args):
    cfg = _write(tmp_path, cfg_text)
    out = tmp_path / "out.txt"
    status = main(["--config", cfg, "--out", str(out), *args])
    return status, out.read_text()


def test_solve_emits_reference_record(tmp_path):
    status, text = _run(tmp_path, BASE_CONFIG)
    assert status == 0
    records = [json.loads(line) for line in text.splitlines()]
    assert len(records) == 1
    rec = records[0]
    assert rec["family"] == 1 and rec["m"] == 1 and rec["n"] == 0
    assert abs(rec["A"] - 2.0) < 1e-12
    assert abs(rec["energy"] - 3.0) < 1e-11
    assert rec["residual"] < 1e-8
    assert rec["normalizable"] is True
    # floats survive a JSON round trip bit-exactly
    assert json.loads(json.dumps(rec))["energy"] == rec["energy"]


def test_verify_gates_and_exit_codes(tmp_path):
    cfg = BASE_CONFIG.replace("task = solve", "task = verify") + "\n[verify]\nfd = true\n"
    status, text = _run(tmp_path, cfg)
    assert status == 0
    rec = json.loads(text.splitlines()[0])
    assert rec["verified"] is True and rec["fd_match"] is True


def test_config_error_exit_code(tmp_path):
    bad = BASE_CONFIG.replace("b = 1.0", "b = 1.0 1.0\nm = 1")
    status, _ = _run(tmp_path, bad)
    assert status == 2
    # unsupported depth is reported as a config error naming the field
    deep = BASE_CONFIG.replace("b = 1.0", "b = 1 1 1 1")
    status, _ = _run(tmp_path, deep)
    assert status == 2
    assert main(["--config", str(tmp_path / "missing.ini")]) == 2


def test_sweep_table(tmp_path):
    cfg = (
        BASE_CONFIG.replace("task = solve", "task = sweep")
        + "\n[sweep]\nparameter = b1\nvalues = 2.0 0.5 1.0\n"
    )
    status, text = _run(tmp_path, cfg)
    assert status == 0
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["b1", "energy", "A", "nodes", "normalizable"]
    swept = [float(r[0]) for r in rows[1:]]
    assert swept == sorted(swept)
    for r in rows[1:]:
        assert float(r[4]) == 1.0


def test_figure_table_origin_normalization(tmp_path):
    cfg = (
        BASE_CONFIG.replace("task = solve", "task = figure")
        + "\n[figure]\nvariants = 1:1.0\npoints = 51\nx_max = 1.5\npsi0 = true\n"
    )
    status, text = _run(tmp_path, cfg)
    assert status == 0
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["x", "V_m1", "psi_m1"]
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    mid = len(data) // 2
    assert abs(data[mid, 0]) < 1e-12  # symmetric grid includes x=0
    assert abs(data[mid, 2] - 1.0) < 1e-9  # psi normalized at the origin
    # even state: psi symmetric
    assert np.allclose(data[:, 2], data[::-1, 2], rtol=0, atol=1e-9)


def test_emit_complex_roots_flag(tmp_path):
    cfg = BASE_CONFIG.replace("n = 0", "n = 2")
    status, text = _run(tmp_path, cfg, "--emit-complex-roots")
    assert status == 0
    records = [json.loads(line) for line in text.splitlines()]
    assert any("energy" in r for r in records)
