import csv
import json
import subprocess
import sys

import pytest

from epscx.cli import main, parse_eps


@pytest.fixture
def line_csv(tmp_path):
    path = tmp_path / "line.csv"
    path.write_text("\n".join(",".join(str(abs(i - j)) for j in range(5)) for i in range(5)) + "\n")
    return path


@pytest.fixture
def golden_json(tmp_path):
    path = tmp_path / "golden.json"
    path.write_text(json.dumps({"p": 2, "L": 5, "matrix": [[1, 1], [1, 0]], "distance": {"kind": "scales", "ratio": 0.5}}))
    return path


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def test_parse_eps():
    assert parse_eps("2,1.5") == [2.0, 1.5]
    assert parse_eps("1/3, 1/2") == [1 / 3, 0.5]
    for bad in ("", "a", "0", "-1", "1/0"):
        with pytest.raises(Exception):
            parse_eps(bad)


def test_complexity_json(line_csv, tmp_path):
    code, out = run(["complexity", "--input", str(line_csv), "--eps", "2,1.5", "--witnesses"], tmp_path)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["schema_version"] == 1
    assert payload["config"]["eps"] == [2.0, 1.5]
    assert [(e["C"], e["R"]) for e in payload["entries"]] == [(3, 2), (3, 2)]
    assert payload["entries"][1]["R_witness"] == [0, 3]


def test_complexity_csv(line_csv, tmp_path):
    code, out = run(["complexity", "--input", str(line_csv), "--eps", "1/3", "--format", "csv"], tmp_path, "out.csv")
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["eps", "C", "C_certificate", "R", "R_certificate"]
    assert rows[1][0] == "0.33333333333333331"
    assert float(rows[1][0]) == 1 / 3
    assert rows[1][1] == "5" and '"' not in out.read_text()


def test_singleton(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("0\n")
    code, out = run(["complexity", "--input", str(path), "--eps", "1"], tmp_path)
    assert code == 0
    entry = json.loads(out.read_text())["entries"][0]
    assert entry["C"] == entry["R"] == 1
    code, out = run(["verify", "--input", str(path), "--eps", "1"], tmp_path)
    assert code == 0 and json.loads(out.read_text())["pass"]


def test_points_input(tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("# x,y\n0,0\n3,4\n0,1\n")
    code, out = run(["complexity", "--input", str(path), "--eps", "2"], tmp_path)
    assert code == 0
    assert json.loads(out.read_text())["entries"][0]["C"] == 2


def test_golden_mean_counts(golden_json, tmp_path):
    code, out = run(["complexity", "--input", str(golden_json), "--eps", "1,0.5,0.25,0.125,0.0625"], tmp_path)
    assert code == 0
    assert [e["C"] for e in json.loads(out.read_text())["entries"]] == [2, 3, 5, 8, 13]


def test_verify_line(line_csv, tmp_path):
    code, out = run(["verify", "--input", str(line_csv), "--eps", "2"], tmp_path)
    payload = json.loads(out.read_text())
    assert code == 0 and payload["pass"]
    names = {c["name"] for c in payload["results"][0]["checks"]}
    assert {"metric axioms", "separated bijection", "K_x partition", "subadditivity"} <= names


def test_verify_example3(tmp_path):
    path = tmp_path / "ex3.json"
    path.write_text(json.dumps({"L": 4, "distance": {"kind": "example3", "n_max": 2}}))
    code, out = run(["verify", "--input", str(path), "--eps", "1/2"], tmp_path)
    payload = json.loads(out.read_text())
    assert code == 0 and payload["pass"]
    ultra = [c for c in payload["results"][0]["checks"] if c["name"] == "ultrametric"][0]
    assert ultra["value"] is True


def test_verify_reports_failure(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,1,5\n1,0,1\n5,1,0\n")
    code, out = run(["verify", "--input", str(path), "--eps", "2"], tmp_path)
    assert code == 1
    assert not json.loads(out.read_text())["pass"]


def test_input_errors(tmp_path):
    assert main(["complexity", "--input", str(tmp_path / "missing.csv"), "--eps", "1"]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("0,x\n1,0\n")
    assert main(["complexity", "--input", str(bad), "--eps", "1"]) == 2
    neg = tmp_path / "neg.csv"
    neg.write_text("0,-1\n-1,0\n")
    assert main(["complexity", "--input", str(neg), "--eps", "1", "--kind", "matrix"]) == 2
    js = tmp_path / "bad.json"
    js.write_text("{not json")
    assert main(["complexity", "--input", str(js), "--eps", "1"]) == 2


def test_argument_errors():
    with pytest.raises(SystemExit) as info:
        main(["experiment", "nosuch"])
    assert info.value.code == 2


def test_cap(tmp_path, monkeypatch):
    path = tmp_path / "pts.csv"
    path.write_text("# x\n" + "\n".join(str(0.01 * i) for i in range(12)) + "\n")
    monkeypatch.setenv("EPSCX_CAP", "2")
    assert main(["complexity", "--input", str(path), "--eps", "0.05"]) == 3
    code, out = run(["complexity", "--input", str(path), "--eps", "0.05", "--greedy"], tmp_path)
    assert code == 0
    assert json.loads(out.read_text())["entries"][0]["C_certificate"] == "greedy-lower-bound"
    # the flag wins over the environment
    code, _ = run(["complexity", "--input", str(path), "--eps", "0.05", "--cap", "64"], tmp_path)
    assert code == 0


def test_experiment_report(tmp_path):
    code, out = run(["experiment", "cantor", "--depth", "6"], tmp_path)
    payload = json.loads(out.read_text())
    assert code == 0 and payload["pass"]
    assert payload["config"]["level"] == 6 and payload["config"]["cli"]["depth"] == 6


def test_experiment_deterministic(tmp_path):
    out = tmp_path / "r.json"
    main(["experiment", "nonunique", "--out", str(out)])
    first = out.read_bytes()
    main(["experiment", "nonunique", "--out", str(out)])
    assert out.read_bytes() == first


def test_console_script(line_csv):
    proc = subprocess.run(
        [sys.executable, "-m", "epscx.cli", "complexity", "--input", str(line_csv), "--eps", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["entries"][0]["C"] == 3
