"""Command-line interface: exit codes, JSON output, determinism."""

from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

FIXTURE = {
    "n": 3, "m": 1, "sense": "max",
    "c": [5, 4, 3],
    "A": [[3, 5, 2]],
    "b": [18],
    "bands": {
        "K_minus": 0, "K_plus": 2,
        "l": {"0": 0, "1": 0, "2": 0},
        "u": {"0": 3, "1": 2, "2": 1},
        "dev": [
            {"i": 0, "j": 0, "d": {"1": 1.0, "2": 2.0}},
            {"i": 0, "j": 1, "d": {"1": 1.0, "2": 3.0}},
            {"i": 0, "j": 2, "d": {"1": 2.0, "2": 4.0}},
        ],
    },
}

BOXED = {
    "n": 3, "m": 4, "sense": "max",
    "c": [1, 1, 1],
    "A": [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
    "b": [8, 3, 3, 3],
    "bands": {
        "K_minus": 0, "K_plus": 2,
        "l": {"0": 0, "1": 0, "2": 0},
        "u": {"0": 3, "1": 2, "2": 1},
        "dev": [
            {"i": 0, "j": 0, "d": {"1": 4.0, "2": 6.0}},
            {"i": 0, "j": 1, "d": {"1": 2.0, "2": 5.0}},
            {"i": 0, "j": 2, "d": {"1": 1.0, "2": 2.0}},
        ],
    },
}

SP_TRIANGLE = {
    "nodes": 3,
    "edges": [
        {"u": 0, "v": 1, "c": 1, "d": {"1": 2}},
        {"u": 1, "v": 2, "c": 1, "d": {"1": 3}},
        {"u": 0, "v": 2, "c": 3, "d": {"1": 1}},
    ],
    "source": 0, "target": 2,
    "bands": {"u": {"1": 1}},
}


def run_cli(*args, check=None):
    proc = subprocess.run([sys.executable, "-m", "multiband.cli", *args],
                          capture_output=True, text=True)
    if check is not None:
        assert proc.returncode == check, proc.stderr or proc.stdout
    return proc


def write(tmp_path, doc, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


# --- validate -----------------------------------------------------------


def test_validate_ok(tmp_path):
    proc = run_cli("validate", write(tmp_path, FIXTURE), check=0)
    doc = json.loads(proc.stdout)
    assert doc["valid"] is True
    assert doc["violations"] == []
    assert doc["profile"]["p"] == 0
    assert doc["profile"]["theta"] == {"0": 0, "1": 2, "2": 1}


def test_validate_bad_u0(tmp_path):
    bad = json.loads(json.dumps(FIXTURE))
    bad["bands"]["u"]["0"] = 2
    proc = run_cli("validate", write(tmp_path, bad), check=1)
    doc = json.loads(proc.stdout)
    assert doc["valid"] is False
    assert any("u_0 must equal n=3" in v for v in doc["violations"])


def test_validate_nonmonotone_thresholds(tmp_path):
    bad = json.loads(json.dumps(FIXTURE))
    bad["bands"]["dev"][0]["d"] = {"1": 2.0, "2": 2.0}
    proc = run_cli("validate", write(tmp_path, bad), check=1)
    assert any("strictly increasing" in v
               for v in json.loads(proc.stdout)["violations"])


def test_parse_errors_exit_2(tmp_path):
    garbage = tmp_path / "bad.json"
    garbage.write_text("{not json")
    assert run_cli("validate", str(garbage)).returncode == 2
    assert run_cli("solve", str(garbage)).returncode == 2
    assert run_cli("solve", str(tmp_path / "missing.json")).returncode == 2


# --- gen ----------------------------------------------------------------


def test_gen_deterministic_and_valid(tmp_path):
    a = run_cli("gen", "--seed", "42", "--n", "4", "--m", "2", check=0)
    b = run_cli("gen", "--seed", "42", "--n", "4", "--m", "2", check=0)
    assert a.stdout == b.stdout
    path = tmp_path / "gen.json"
    path.write_text(a.stdout)
    run_cli("validate", str(path), check=0)


def test_gen_rejects_bad_flags():
    assert run_cli("gen", "--seed", "1", "--density", "2.0").returncode == 2


# --- solve --------------------------------------------------------------


def test_solve_methods_agree(tmp_path):
    path = write(tmp_path, BOXED)
    compact = run_cli("solve", path, check=0)
    cuts = run_cli("solve", path, "--method", "cutting-plane", check=0)
    dc, du = json.loads(compact.stdout), json.loads(cuts.stdout)
    assert dc["status"] == du["status"] == "optimal"
    assert dc["value"] == pytest.approx(du["value"], abs=1e-6)
    assert dc["method"] == "compact" and du["method"] == "cutting-plane"
    # cutting-plane logs one JSON line per iteration on stderr
    lines = [json.loads(l) for l in cuts.stderr.splitlines() if l.startswith("{")]
    assert lines and all({"iteration", "objective"} <= set(e) for e in lines)
    assert lines == du["stats"]["log"]
    # byte-identical reruns
    assert run_cli("solve", path, check=0).stdout == compact.stdout


def test_solve_binary_methods_agree(tmp_path):
    doc = json.loads(json.dumps(BOXED))
    doc["int_vars"] = [0, 1, 2]
    path = write(tmp_path, doc)
    dc = json.loads(run_cli("solve", path, check=0).stdout)
    du = json.loads(run_cli("solve", path, "--method", "cutting-plane",
                            check=0).stdout)
    assert dc["value"] == pytest.approx(du["value"], abs=1e-6)
    assert all(abs(v - round(v)) < 1e-6 for v in dc["x"])


def test_solve_infeasible_exits_3(tmp_path):
    doc = json.loads(json.dumps(BOXED))
    doc["m"] = 5
    doc["A"] = doc["A"] + [[-1, -1, -1]]
    doc["b"] = doc["b"] + [-20]
    path = write(tmp_path, doc)
    assert run_cli("solve", path).returncode == 3
    assert run_cli("solve", path, "--method", "cutting-plane").returncode == 3


def test_solve_unbounded_exits_4(tmp_path):
    # deviations too small to flip the row coefficients positive: the all-ones
    # ray improves the objective in every scenario
    doc = json.loads(json.dumps(FIXTURE))
    doc["A"] = [[-1, -1, -1]]
    doc["b"] = [0]
    for entry in doc["bands"]["dev"]:
        entry["d"] = {"1": 0.1, "2": 0.2}
    path = write(tmp_path, doc)
    assert run_cli("solve", path).returncode == 4
    assert run_cli("solve", path, "--method", "cutting-plane").returncode == 4


def test_solve_min_sense(tmp_path):
    doc = {
        "n": 2, "m": 1, "sense": "min",
        "c": [2, 3], "A": [[-1, -1]], "b": [-2],
        "bands": {"K_minus": 0, "K_plus": 0, "l": {"0": 0}, "u": {"0": 2},
                  "dev": []},
    }
    proc = run_cli("solve", write(tmp_path, doc), check=0)
    assert json.loads(proc.stdout)["value"] == pytest.approx(4.0)


# --- check / separate ---------------------------------------------------


def test_check_reports_violation(tmp_path):
    path = write(tmp_path, BOXED)
    proc = run_cli("check", path, "--x", "1,1,1", "--exact", check=0)
    doc = json.loads(proc.stdout)
    row = doc["rows"][0]
    assert row["robust"] is False
    assert row["lhs"] == pytest.approx(13.0)
    assert row["agrees"] is True
    assert row["lhs"] == pytest.approx(row["exact_lhs"])
    assert doc["robust"] is False


def test_check_robust_point_exits_0(tmp_path):
    proc = run_cli("check", write(tmp_path, BOXED), "--x", "0,0,0", check=0)
    assert json.loads(proc.stdout)["robust"] is True


def test_check_bad_x_exits_2(tmp_path):
    assert run_cli("check", write(tmp_path, BOXED),
                   "--x", "1,1").returncode == 2
    assert run_cli("check", write(tmp_path, BOXED),
                   "--x", "a,b,c").returncode == 2


def test_separate_emits_cut(tmp_path):
    proc = run_cli("separate", write(tmp_path, BOXED), "--x", "1,1,1", check=0)
    doc = json.loads(proc.stdout)
    assert doc["robust"] is False
    cut = doc["cuts"][0]
    assert cut["row"] == 0
    assert np.asarray(cut["coeffs"]) @ np.ones(3) > cut["rhs"] + 1e-6
    assert cut["violation"] == pytest.approx(5.0)
    assert np.asarray(cut["scenario"]).shape == (4, 3)  # m x n deviations
    assert cut["scenario"][0] == [4.0, 5.0, 1.0]


def test_separate_none_at_robust_point(tmp_path):
    proc = run_cli("separate", write(tmp_path, BOXED), "--x", "0,0,0", check=0)
    doc = json.loads(proc.stdout)
    assert doc["robust"] is True and doc["cuts"] == []


# --- binary-solve -------------------------------------------------------


def test_binary_solve_triangle(tmp_path):
    path = write(tmp_path, SP_TRIANGLE, "sp.json")
    proc = run_cli("binary-solve", path, "--oracle", "sp", check=0)
    doc = json.loads(proc.stdout)
    assert doc["value"] == pytest.approx(4.0)
    assert doc["oracle"] == "sp"
    assert doc["nominal_solves"] >= 1
    assert run_cli("binary-solve", path, "--oracle", "sp",
                   check=0).stdout == proc.stdout


def test_binary_solve_disconnected_exits_3(tmp_path):
    doc = {
        "nodes": 3,
        "edges": [{"u": 0, "v": 1, "c": 1, "d": {}}],
        "source": 0, "target": 2,
    }
    path = write(tmp_path, doc, "disc.json")
    assert run_cli("binary-solve", path, "--oracle", "sp").returncode == 3


# --- bound --------------------------------------------------------------


def _sampled_instance():
    # sample draws are raw coefficient values and must stay inside the
    # banded support [a_bar + d^{K-}, a_bar + d^{K+}]
    doc = json.loads(json.dumps(BOXED))
    rng = np.random.default_rng(0)
    tops = {0: 7.0, 1: 6.0, 2: 3.0}
    doc["samples"] = [
        {"i": 0, "j": j,
         "values": rng.uniform(1.0, tops[j], size=40).round(6).tolist()}
        for j in range(3)
    ]
    return doc


def test_bound_single_row(tmp_path):
    path = write(tmp_path, _sampled_instance())
    proc = run_cli("bound", path, "--row", "0", "--x", "1,1,1", check=0)
    doc = json.loads(proc.stdout)
    assert set(doc) == {"bound_clamped", "bound_raw", "confidence",
                        "evaluations", "excluded_vars", "log_bound", "row",
                        "t", "t_star"}
    assert 0.0 <= doc["bound_clamped"] <= 1.0
    assert doc["t"] == doc["t_star"] > 0
    assert run_cli("bound", path, "--row", "0", "--x", "1,1,1",
                   check=0).stdout == proc.stdout


def test_bound_all_rows_solves_internally(tmp_path):
    path = write(tmp_path, _sampled_instance())
    doc = json.loads(run_cli("bound", path, check=0).stdout)
    assert len(doc["x"]) == 3
    assert [r["row"] for r in doc["rows"]] == [0]  # only uncertain rows


def test_bound_without_samples_exits_1(tmp_path):
    assert run_cli("bound", write(tmp_path, BOXED),
                   "--x", "1,1,1").returncode == 1


# --- export-compact -----------------------------------------------------


def test_export_compact_round_trip(tmp_path):
    path = write(tmp_path, FIXTURE)
    exported = run_cli("export-compact", path, check=0).stdout
    out = tmp_path / "compact.json"
    out.write_text(exported)
    run_cli("validate", str(out), check=0)
    original = json.loads(run_cli("solve", path, check=0).stdout)
    compact = json.loads(run_cli("solve", str(out), check=0).stdout)
    assert original["value"] == pytest.approx(18.0)
    assert compact["value"] == pytest.approx(original["value"], abs=1e-7)
