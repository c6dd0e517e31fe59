import csv
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from spectral_rigidity.cli import fmt_float, main, parse_float, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_analyze_n4(capsys):
    rep = report(capsys, "analyze", "--n", "4", "--c", "0,2,0")
    assert set(rep) == {"command", "inputs", "results", "diagnostics", "version", "timing_ms"}
    res = rep["results"]
    assert res["a"] == pytest.approx(1) and res["b"] == pytest.approx(2)
    assert res["C"] == pytest.approx(0.5)
    assert res["boundary"]["upper"]["doubled_pairs"] == [[2, 3]]
    assert res["boundary"]["lower"]["pattern_valid"] is True
    assert [c["kind"] for c in res["critical_points"]] == ["min", "max", "min"]


def test_analyze_n3(capsys):
    res = report(capsys, "analyze", "--n", "3", "--c", "0,2")["results"]
    assert res["a"] == pytest.approx(-2 / math.sqrt(3), abs=1e-12)
    assert res["b"] == pytest.approx(2 / math.sqrt(3), abs=1e-12)


def test_analyze_infinite_endpoint(capsys):
    res = report(capsys, "analyze", "--n", "2", "--c", "0")["results"]
    assert res["b"] == "+inf"
    assert res["boundary"]["upper"] is None


def test_analyze_pattern_violation_exit_code(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, err = run(capsys, "analyze", "--n", "4", "--c", "0,0,0", "--out", str(out))
    assert code == 3 and "pattern" in err
    assert not out.exists()


@pytest.mark.parametrize("argv", [
    ["analyze", "--n", "4", "--c", "0,2"],
    ["analyze", "--n", "4", "--c", "0,x,0"],
    ["analyze", "--n", "4", "--c", "0,inf,0"],
    ["analyze", "--n", "1", "--c", ""],
    ["isopar", "--g", "5", "--m1", "1"],
    ["isopar", "--g", "3", "--m1", "1", "--m2", "2"],
    ["verify", "--mode", "Lsign", "--n", "2"],
    ["verify", "--mode", "nope", "--n", "4"],
    ["spectrum", "--n", "4", "--c", "0,2,0", "--f", "3"],
    ["analyze", "--n", "4", "--c", "0,2,0", "--format", "csv"],
    ["analyze", "--n", "4", "--c", "0,2,0", "--format", "svg", "--out", "x.svg"],
    ["analyze", "--n", "4", "--c", "0,2,0", "--tol", "-1"],
    [],
])
def test_invalid_input_exits_2(capsys, tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(capsys, *argv)
    assert code == 2
    assert list(tmp_path.iterdir()) == []


def test_degenerate_tables(capsys):
    res = report(capsys, "degenerate", "--n", "4", "--c", "0,2,0")["results"]
    assert res["solutions"] == 2 and res["rejected"] == 5
    solved = {r["pattern"]: r["f"] for r in res["patterns"] if r["f"] is not None}
    assert solved == {"(2,2)": pytest.approx(1), "(1,2,1)": pytest.approx(2)}
    assert report(capsys, "degenerate", "--n", "3", "--c", "0,2")["results"]["solutions"] == 2
    assert report(capsys, "degenerate", "--n", "2", "--c", "0")["results"]["solutions"] == 1


def test_spectrum_command(capsys):
    res = report(capsys, "spectrum", "--n", "4", "--c", "0,2,0", "--f", "1,1.5,2",
                 "--eps", "0.1")["results"]
    assert [r["region"] for r in res["spectra"]] == ["X", "Y_eps", "Z"]
    assert [e["multiplicity"] for e in res["spectra"][2]["spectrum"]] == [1, 2, 1]


def test_verify_lsign(capsys):
    res = report(capsys, "verify", "--mode", "Lsign", "--n", "5", "--samples", "10000",
                 "--seed", "7")["results"]
    assert res["failures"] == 0 and res["passed"] and res["max_L"] < 0


def test_verify_gradients(capsys):
    res = report(capsys, "verify", "--mode", "gradients", "--n", "6", "--samples", "1000",
                 "--seed", "7")["results"]
    assert res["max_relative_discrepancy"] < 1e-9 and res["max_residual"] < 1e-9


def test_verify_assertion(capsys):
    res = report(capsys, "verify", "--mode", "assertion", "--n", "4", "--c", "0,2,0",
                 "--end", "upper")["results"]
    assert [r["behaviour"] for r in res["indices"]] == ["converges", "diverges", "diverges",
                                                         "converges"]
    assert res["passed"]


def test_verify_failure_exits_1(capsys):
    # a single scan sample cannot show divergence past the threshold
    code, out, _ = run(capsys, "verify", "--mode", "assertion", "--n", "3", "--c", "0,2",
                       "--scan-samples", "3")
    assert code == 1
    assert json.loads(out)["results"]["passed"] is False


def test_isopar_command(capsys):
    res = report(capsys, "isopar", "--g", "4", "--m1", "1")["results"]
    assert abs(res["min_R_M"]) < 1e-9 and res["equality_case"]
    assert res["S_at_minimal"] == pytest.approx(12)
    res = report(capsys, "isopar", "--g", "2", "--m1", "1", "--m2", "3")["results"]
    assert res["min_R_M"] > 0 and res["S_at_minimal"] == pytest.approx(4)
    res = report(capsys, "isopar", "--g", "1", "--m1", "2")["results"]
    # umbilic: R_M = 2 (1 + cot^2 theta) >= 2
    assert res["family"]["n"] == 2 and res["min_R_M"] == pytest.approx(2, rel=1e-4)


def test_identities_command(capsys):
    res = report(capsys, "identities", "--n-max", "6", "--samples", "50")["results"]
    assert max(res["max_errors"].values()) < 1e-10


def test_plot_writes_svg_and_csv(capsys, tmp_path):
    out = tmp_path / "f0.svg"
    code, _, err = run(capsys, "plot", "--n", "4", "--c", "0,2,0", "--f", "1.5",
                       "--out", str(out), "--format", "svg")
    assert code == 0, err
    root = ET.parse(out).getroot()
    assert root.tag.endswith("svg") and root.get("version") == "1.1"
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f".//{ns}circle")) == 3                 # critical points
    labels = [t.text for t in root.iter(f"{ns}text")]
    assert labels == ["f=1.5", "a=1", "b=2"]
    rows = list(csv.DictReader(out.with_suffix(".csv").open()))
    assert len(rows) == 400 and set(rows[0]) == {"x", "F0"}
    for row in rows[::50]:
        x = float(row["x"])
        assert float(row["F0"]) == pytest.approx(x**4 - x**2, abs=1e-12)


def test_plot_levels_in_json(capsys):
    res = report(capsys, "plot", "--n", "4", "--c", "0,2,0")["results"]
    assert {lv["name"]: lv["height"] for lv in res["levels"]} == {
        "a": pytest.approx(-0.25), "b": pytest.approx(0, abs=1e-15)}


def test_plot_random_model_is_valid_svg(tmp_path, capsys):
    out = tmp_path / "p.svg"
    code, _, err = run(capsys, "plot", "--n", "5", "--c", "0.3,2.1,-0.4,3.9", "--out", str(out),
                       "--format", "svg")
    assert code == 0, err
    ET.parse(out)


def test_csv_output(capsys, tmp_path):
    out = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "isopar", "--g", "3", "--m1", "1", "--points", "30",
                     "--out", str(out), "--format", "csv")
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["theta", "H", "S", "R_M", "R_closed_form"]
    assert len(rows) == 31


def test_io_error_exit_4(capsys, tmp_path):
    code, _, _ = run(capsys, "analyze", "--n", "4", "--c", "0,2,0",
                     "--out", str(tmp_path / "missing" / "r.json"))
    assert code == 4
    code, _, _ = run(capsys, "--job", str(tmp_path / "nope.json"))
    assert code == 4


def test_job_file(capsys, tmp_path):
    job = tmp_path / "job.json"
    out = tmp_path / "r.json"
    job.write_text(json.dumps({"command": "analyze", "parameters": {"n": 4, "c": [0, 2, 0]},
                               "output": {"path": str(out), "format": "json"}}))
    code, _, err = run(capsys, "--job", str(job))
    assert code == 0, err
    assert json.loads(out.read_text())["results"]["b"] == pytest.approx(2)


@pytest.mark.parametrize("doc", ["{not json", json.dumps({"command": "dance"}),
                                 json.dumps({"command": "analyze", "parameters": [1]})])
def test_bad_job_file_exits_2(capsys, tmp_path, doc):
    job = tmp_path / "job.json"
    job.write_text(doc)
    assert run(capsys, "--job", str(job))[0] == 2


def test_reports_are_deterministic(capsys, tmp_path):
    texts = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        assert run(capsys, "verify", "--mode", "gradients", "--n", "5", "--samples", "50",
                   "--seed", "3", "--out", str(out))[0] == 0
        rep = json.loads(out.read_text())
        rep.pop("timing_ms")
        texts.append(json.dumps(rep, sort_keys=True))
    assert texts[0] == texts[1]
    out2 = tmp_path / "other.json"
    run(capsys, "verify", "--mode", "gradients", "--n", "5", "--samples", "50",
        "--seed", "4", "--out", str(out2))
    assert json.loads(out2.read_text())["results"] != json.loads(texts[0])["results"]


def test_float_serialisation_round_trips():
    for x in [0.1, 1 / 3, -2 / math.sqrt(3), 1e-300, 6.02214076e23, 0.0]:
        assert float(fmt_float(x)) == x
        digits = fmt_float(x).replace("-", "").replace(".", "").split("e")[0].lstrip("0")
        assert len(digits) <= 17
    assert fmt_float(math.inf) == '"+inf"' and fmt_float(-math.inf) == '"-inf"'
    assert parse_float("+inf") == math.inf and parse_float("-inf") == -math.inf
    doc = json.loads(to_json({"a": [1.0, math.inf], "b": {"c": 2 / 3}}))
    assert doc == {"a": [1, "+inf"], "b": {"c": 2 / 3}}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spectral_rigidity", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
