import json
import shlex

import pytest

from fraclap.cli import EPILOG, EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rates_wave_table(capsys):
    code, out, _ = run(capsys, "rates", "--preset", "wave", "--theta", "0", "--n", "3")
    assert code == EXIT_OK
    line = next(l for l in out.splitlines() if l.startswith("||v||"))
    assert line.split()[2] == "3/4"


def test_rates_json_exact(capsys):
    code, out, _ = run(capsys, "rates", "--preset", "ibq", "--theta", "1", "--n", "3", "--json")
    rows = json.loads(out)["rows"]
    v = next(r for r in rows if r["quantity"] == "||v||")
    assert (v["s"]["exact"], v["r"]["exact"]) == ("0", "-1")


def test_help_examples_execute(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    lines = [l.strip() for l in EPILOG.splitlines() if l.strip().startswith("fraclap ")]
    assert len(lines) >= 6
    for line in lines:
        code, _, err = run(capsys, *shlex.split(line)[1:])
        assert code == EXIT_OK, (line, err)


def test_simulate_fit_roundtrip(tmp_path, capsys):
    csv = tmp_path / "c.csv"
    assert main(["simulate", "--preset", "wave", "--theta", "0", "--n", "3", "--out", str(csv)]) == 0
    code, out, _ = run(capsys, "fit", "--in", str(csv), "--expect", "0.75", "--tol", "0.05", "--json")
    assert code == EXIT_OK and json.loads(out)["pass"]
    code, _, _ = run(capsys, "fit", "--in", str(csv), "--expect", "1.5", "--tol", "0.05")
    assert code == EXIT_FAIL


def test_fit_expect_exponential(tmp_path, capsys):
    csv = tmp_path / "e.csv"
    args = ["simulate", "--preset", "wave", "--theta", "1/2", "--n", "3", "--target", "energy",
            "--profile", "annulus:1,2", "--v1-profile", "zero", "--tmin", "1", "--tmax", "60",
            "--points", "16", "--out", str(csv)]
    assert main(args) == 0
    code, _, _ = run(capsys, "fit", "--in", str(csv), "--expect", "exponential")
    assert code == EXIT_OK


def test_deterministic_outputs(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"v{i}.json"
        assert main(["verify", "--preset", "wave", "--theta", "0", "--n", "3", "--samples", "500",
                     "--seed", "3", "--quick", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    for i in range(2):
        path = tmp_path / f"c{i}.csv"
        main(["simulate", "--preset", "plate", "--theta", "1", "--n", "5", "--points", "10",
              "--threads", str(1 + 3 * i), "--out", str(path)])
        outs.append(path.read_bytes())
    assert outs[2] == outs[3]


def test_verify_report_shape(capsys):
    code, out, _ = run(capsys, "verify", "--delta", "1", "--alpha", "2", "--theta", "1/2", "--n", "2",
                       "--samples", "300", "--quick")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["pass"]
    for rec in rep["records"]:
        assert set(rec) == {"check", "params", "worst_point", "violation", "pass"}


@pytest.mark.parametrize("argv", [
    ["rates", "--n", "3"],
    ["rates", "--preset", "wave", "--n", "3"],
    ["rates", "--preset", "wave", "--theta", "2", "--n", "3"],
    ["rates", "--preset", "wave", "--theta", "0", "--delta", "1", "--n", "3"],
    ["rates", "--delta", "1", "--alpha", "2", "--n", "3"],
    ["rates", "--symbol-a", "1:0", "--n", "3"],
    ["rates", "--preset", "wave", "--theta", "x", "--n", "3"],
    ["simulate", "--preset", "wave", "--theta", "0", "--n", "3", "--profile", "blob"],
    ["simulate", "--preset", "wave", "--theta", "0", "--n", "3", "--points", "4"],
    ["fit"],
    ["verify", "--preset", "wave", "--theta", "0", "--n", "3", "--samples", "0"],
    ["nonsense"],
])
def test_config_errors(argv, capsys):
    assert main(argv) == EXIT_CONFIG


def test_general_symbol_flags(capsys):
    code, out, _ = run(capsys, "rates", "--symbol-a", "1:0,1:1", "--symbol-b", "1:1/4",
                       "--symbol-c", "1:1,1:2", "--n", "3", "--target", "v", "--json")
    assert code == EXIT_OK
    row = json.loads(out)["rows"][0]
    assert row["s"]["exact"] == "1"
