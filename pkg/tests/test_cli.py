"""CLI dispatch, exit codes, golden reports, and witness re-verification.

Set RAMSEYFIN_REGEN=1 to rewrite the golden files after an intended change.
"""

import json
import os

import pytest

from conftest import run_cli
from ramseyfin.formats import strip_perf

HERE = os.path.dirname(__file__)
DATA = os.path.join(HERE, "data")
GOLDEN = os.path.join(HERE, "golden")


def d(name):
    return os.path.join(DATA, name)


# name -> (argv, expected exit code)
CASES = {
    "fs": (["fs", "--seq", "1", "2", "4"], 0),
    "fp": (["fp", "--seq", "2", "3", "5"], 0),
    "fep": (["fep", "--seq", "2", "3", "4"], 0),
    "fep-capped": (["fep", "--seq", "3", "4", "5", "--bit-cap", "64"], 2),
    "sumsub-check": (["sumsub-check", "--y", "3", "12", "--x", "1", "2", "4", "8"], 0),
    "sumsub-check-absent": (["sumsub-check", "--y", "5", "--x", "1", "2"], 1),
    "find-config": (["find-config", "--coloring", d("parity9.txt"), "--poly", "d^2", "--anchor"], 0),
    "find-config-ap": (["find-config", "--coloring", d("parity9.txt"), "--k", "3"], 0),
    "threshold-vdw": (["threshold", "--kind", "vdw", "--k", "3", "--r", "2", "--max", "20"], 0),
    "threshold-schur": (["threshold", "--kind", "schur", "--r", "2", "--allow-equal", "--max", "10"], 0),
    "threshold-poly": (["threshold", "--kind", "poly", "--poly", "d^2", "--r", "2", "--max", "20"], 0),
    "threshold-product": (["threshold", "--kind", "product-schur", "--r", "2", "--max", "20"], 1),
    "threshold-capped": (["threshold", "--kind", "vdw", "--k", "4", "--r", "2", "--max", "40",
                          "--max-nodes", "200"], 2),
    "schur": (["schur", "--coloring", d("const12.txt")], 0),
    "schur-mul": (["schur", "--coloring", d("const12.txt"), "--op", "mul"], 0),
    "exp-search": (["exp-search", "--coloring", d("parity_rule.txt"), "--x-max", "6", "--y-max", "6"], 0),
    "hj-search": (["hj-search", "--cube", d("hj_2_2.txt")], 0),
    "hj-number": (["hj-number", "--r", "2", "--t", "2", "--max", "4"], 0),
    "phj-search": (["phj-search", "--cube", d("phj_2_2_1.txt")], 0),
    "phj-embed": (["phj-embed", "--q", "3", "--xs", "1", "2", "--point", "1 1 | 1 1 1 1",
                   "--gamma", "1", "--coeffs", "2", "3"], 0),
    "config-R": (["config-R", "--set", d("full12.txt"), "--poly", "d", "--g", "1", "--L", "4"], 0),
    "ipstar-check": (["ipstar-check", "--set", d("odds20.txt"), "--r", "2"], 1),
    "ipr-verify": (["ipr-verify", "--set", d("full12.txt"), "--poly", "d", "--g", "1", "--L", "4",
                    "--r-max", "3"], 0),
    "sumsub-search": (["sumsub-search", "--set", d("mult3_60.txt"), "--x", "3", "6", "12", "--poly", "d",
                       "--depth", "2"], 0),
    "tower-f": (["tower", "--f", "3", "--x", "3"], 0),
    "tower-expr": (["tower", "--expr", "(^ 2 (^ 3 2))"], 0),
    "tower-star": (["tower", "--star", "2", "3", "5"], 0),
    "tower-capped": (["tower", "--f", "5", "--x", "3"], 2),
    "pf-pattern": (["pf-pattern", "--n", "2", "--xs", "2", "3", "--family", "d,d^2", "--k-max", "2"], 0),
    "lambda-check": (["lambda-check", "--a", "1", "2", "--N", "1", "--coloring", d("parity_rule.txt")], 1),
    "fep-search": (["fep-search", "--lo", "2", "--hi", "8", "--size", "2", "--coloring", d("parity_rule.txt")], 0),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, tmp_path):
    argv, code = CASES[name]
    got_code, report, err = run_cli(argv)
    assert got_code == code, err
    assert report["schema"] == 1 and report["status"]
    body = strip_perf(report)
    path = os.path.join(GOLDEN, f"{name}.json")
    if os.environ.get("RAMSEYFIN_REGEN"):
        with open(path, "w") as fh:
            json.dump(body, fh, indent=2, sort_keys=True)
            fh.write("\n")
    with open(path) as fh:
        assert body == json.load(fh)
    # every emitted witness or certificate re-verifies through the CLI
    if report["witnesses"] or report.get("certificate"):
        out = tmp_path / "report.json"
        out.write_text(json.dumps(report))
        vcode, vrep, _ = run_cli(["verify-witness", str(out)])
        assert vcode == 0 and vrep["result"]["valid"], vrep["result"]["diagnostics"]


def test_exit_code_is_function_of_status():
    table = {"found": 0, "not_found": 1, "exhausted": 1, "capped": 2}
    for name, (argv, _) in CASES.items():
        code, report, _ = run_cli(argv)
        assert code == table[report["status"]], name


def test_found_reports_carry_payload():
    searches = {"find-config", "find-config-ap", "schur", "schur-mul", "exp-search", "hj-search",
                "phj-search", "sumsub-search", "fep-search"}
    for name in searches:
        _, report, _ = run_cli(CASES[name][0])
        assert report["status"] == "found" and len(report["witnesses"]) >= 1
        for w in report["witnesses"]:
            assert set(w) >= {"kind", "window", "color", "elements", "params", "provenance", "context"}


def test_threshold_example_report():
    code, report, _ = run_cli(CASES["threshold-vdw"][0])
    assert report["result"]["n"] == 9
    assert report["result"]["avoiding_coloring"] == [0, 0, 1, 1, 0, 0, 1, 1]


def test_ipstar_example_report():
    _, report, _ = run_cli(CASES["ipstar-check"][0])
    assert report["counterexamples"][0]["seq"] == [2, 4]


@pytest.mark.parametrize("argv,token", [
    (["threshold", "--kind", "vdw", "--r", "x"], "x"),
    (["find-config", "--coloring", d("parity9.txt"), "--poly", "d+1"], "1"),
    (["bogus"], "bogus"),
    (["fs"], "--seq"),
    (["find-config", "--coloring", "/nonexistent/file", "--poly", "d"], "/nonexistent/file"),
])
def test_usage_errors(argv, token):
    code, report, err = run_cli(argv)
    assert code == 64 and report is None
    assert token in err


def test_bad_coloring_file(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1 2\n")
    code, _, err = run_cli(["schur", "--coloring", str(bad)])
    assert code == 64 and "'2'" in err


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    code, report, _ = run_cli(["fs", "--seq", "2", "3", "--out", str(out)])
    assert code == 0 and report is None
    assert json.loads(out.read_text())["result"]["values"] == [2, 3, 5]


def test_verify_rejects_tampered(tmp_path):
    _, report, _ = run_cli(CASES["find-config"][0])
    w = report["witnesses"][0]
    w["elements"][0] += 1
    path = tmp_path / "w.json"
    path.write_text(json.dumps(w))
    code, rep, _ = run_cli(["verify-witness", str(path)])
    assert code == 1 and not rep["result"]["valid"] and rep["result"]["diagnostics"]


def test_verify_with_override_coloring(tmp_path):
    _, report, _ = run_cli(CASES["find-config"][0])
    w = dict(report["witnesses"][0])
    del w["context"]
    path = tmp_path / "w.json"
    path.write_text(json.dumps(w))
    assert run_cli(["verify-witness", str(path)])[0] == 1
    assert run_cli(["verify-witness", str(path), "--coloring", d("parity9.txt")])[0] == 0
    other = tmp_path / "c.txt"
    other.write_text("9 2\n1 1 0 1 0 1 0 1 0\n")
    assert run_cli(["verify-witness", str(path), "--coloring", str(other)])[0] == 1


def test_verify_rejects_bad_certificate(tmp_path):
    _, report, _ = run_cli(CASES["threshold-vdw"][0])
    cert = report["certificate"]
    cert["coloring"] = "8 2\n0 0 0 1 1 0 1 1\n"
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cert))
    code, rep, _ = run_cli(["verify-witness", str(path)])
    assert code == 1 and "monochromatic" in rep["result"]["diagnostics"][0]


@pytest.mark.parametrize("name", ["threshold-vdw", "hj-number", "ipstar-check", "ipr-verify"])
def test_workers_do_not_change_reports(name):
    argv = CASES[name][0]
    base = strip_perf(run_cli(argv)[1])
    for k in ("2", "3"):
        assert strip_perf(run_cli(argv + ["--workers", k])[1]) == base
