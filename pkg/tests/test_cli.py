import json

import pytest

from measerr.cli import analyze_rows, main
from measerr.io import ParamsError, load_params, rows_from_json, rows_to_json
from measerr.registry import REPORT_ROWS

S4 = {"mu_y": 127, "mu_x": 170, "sigma2_y": 1278, "sigma2_x": 3300, "rho": 0.964,
      "sigma2_u": 36, "sigma2_v": 36, "n": 10}
STRATA = {"mode": "stratified", "strata": [
    {"w": 0.4, "n_h": 20, "mu_yh": 80, "mu_xh": 120, "sigma2_yh": 400, "sigma2_xh": 900, "rho_h": 0.8,
     "sigma2_uh": 25, "sigma2_vh": 40, "name": "north"},
    {"w": 0.6, "n_h": 30, "mu_yh": 150, "mu_xh": 210, "sigma2_yh": 900, "sigma2_xh": 1600, "rho_h": 0.7,
     "sigma2_uh": 30, "sigma2_vh": 50, "name": "south"},
]}


def write_json(tmp_path, obj, name="params.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def write_csv(tmp_path, text, name="sample.csv"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def srs_params(tmp_path):
    return write_json(tmp_path, S4)


@pytest.fixture
def strat_params(tmp_path):
    return write_json(tmp_path, STRATA, "strata.json")


def test_load_params_accepts_s4(srs_params):
    pf = load_params(srs_params)
    assert pf.mode == "srs" and pf.summary.rho == 0.964 and pf.summary.n == 10


def test_missing_field(tmp_path):
    obj = {k: v for k, v in S4.items() if k != "rho"}
    with pytest.raises(ParamsError, match="missing required field rho"):
        load_params(write_json(tmp_path, obj))


def test_weights_must_sum_to_one(tmp_path):
    obj = json.loads(json.dumps(STRATA))
    obj["strata"][1]["w"] = 0.5
    with pytest.raises(ParamsError, match="stratum weights must sum to 1"):
        load_params(write_json(tmp_path, obj))


def test_malformed_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"mu_y": 1,\n  "mu_x": }')
    with pytest.raises(ParamsError, match="line 2"):
        load_params(str(p))


def test_analyze_all_rows_in_table_order(capsys, srs_params):
    code, out, _ = run(capsys, "analyze", "--params", srs_params)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].startswith("estimator,mse,pre")
    assert [ln.split(",")[0] for ln in lines[1:]] == list(REPORT_ROWS)


def test_analyze_single_selection(capsys, srs_params):
    code, out, _ = run(capsys, "analyze", "--params", srs_params, "--estimators", "t3", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 1
    assert rows[0]["mse"] == pytest.approx(6.82471, rel=1e-5)
    assert rows[0]["pre"] == pytest.approx(1925.356, rel=1e-5)


def test_analyze_unknown_estimator(capsys, srs_params):
    code, out, err = run(capsys, "analyze", "--params", srs_params, "--estimators", "t99")
    assert code != 0 and out == ""
    rec = json.loads(err)
    assert "t99" in rec["message"] and rec["error"]


def test_pre_column_consistent(srs_params, strat_params):
    for path in (srs_params, strat_params):
        rows = analyze_rows(load_params(path))
        base = rows[0].pre * rows[0].mse / 100
        for r in rows:
            assert r.pre * r.mse / 100 == pytest.approx(base, rel=1e-9)


def test_json_round_trip_bit_exact(srs_params):
    rows = analyze_rows(load_params(srs_params))
    assert rows_from_json(rows_to_json(rows)) == rows


def test_ledger_written(capsys, tmp_path, srs_params):
    ledger = tmp_path / "ledger.json"
    code, _, _ = run(capsys, "analyze", "--params", srs_params, "--ledger", str(ledger))
    recs = json.loads(ledger.read_text())["discrepancies"]
    assert code == 0 and recs
    assert {"id", "printed", "derived"} <= set(recs[0])


def test_out_flag(capsys, tmp_path, srs_params):
    target = tmp_path / "report.csv"
    code, out, _ = run(capsys, "analyze", "--params", srs_params, "--out", str(target))
    assert code == 0 and out == ""
    assert len(target.read_text().strip().splitlines()) == 13


@pytest.mark.parametrize("name,expected", [("difference", 125.934), ("usual_mean", 120.0)])
def test_estimate(capsys, tmp_path, srs_params, name, expected):
    data = write_csv(tmp_path, "y,x\n110,150\n130,170\n")
    code, out, _ = run(capsys, "estimate", "--params", srs_params, "--data", data,
                       "--estimator", name, "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["estimate"] == pytest.approx(expected, abs=5e-4)
    assert (rec["ybar"], rec["xbar"], rec["n"]) == (120.0, 160.0, 2)


def test_estimate_constant_override(capsys, tmp_path, srs_params):
    data = write_csv(tmp_path, "y,x\n120,160\n")
    _, out, _ = run(capsys, "estimate", "--params", srs_params, "--data", data,
                    "--estimator", "difference", "--constant", "0.5", "--format", "json")
    rec = json.loads(out)
    assert rec["constants"] == [0.5]
    assert rec["estimate"] == pytest.approx(120 + 0.5 * 10)


def test_estimate_stratified_needs_stratum_column(capsys, tmp_path, strat_params):
    data = write_csv(tmp_path, "y,x\n110,150\n")
    code, _, err = run(capsys, "estimate", "--params", strat_params, "--data", data, "--estimator", "usual_mean")
    assert code != 0
    assert "stratum column required" in json.loads(err)["message"]


def test_estimate_stratified(capsys, tmp_path, strat_params):
    data = write_csv(tmp_path, "stratum,y,x\nnorth,70,110\nnorth,90,130\nsouth,160,220\n")
    _, out, _ = run(capsys, "estimate", "--params", strat_params, "--data", data,
                    "--estimator", "usual_mean", "--format", "json")
    assert json.loads(out)["estimate"] == pytest.approx(0.4 * 80 + 0.6 * 160)


def test_estimate_bad_csv(capsys, tmp_path, srs_params):
    data = write_csv(tmp_path, "y,x\n1,abc\n")
    code, _, err = run(capsys, "estimate", "--params", srs_params, "--data", data, "--estimator", "ratio")
    assert code != 0 and "line 2" in json.loads(err)["message"]


def test_simulate_deterministic_bytes(capsys, srs_params):
    argv = ("simulate", "--params", srs_params, "--replications", "3000", "--seed", "42", "--estimators", "usual_mean,t3")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--workers", "4")
    assert a == b and a.count("\n") == 3


def test_simulate_zero_replications(capsys, srs_params):
    code, out, err = run(capsys, "simulate", "--params", srs_params, "--replications", "0")
    assert code != 0 and out == ""
    assert "replications" in json.loads(err)["message"]


def test_simulate_stratified(capsys, strat_params):
    code, out, _ = run(capsys, "simulate", "--params", strat_params, "--replications", "2000",
                       "--estimators", "combined_ratio", "--format", "json")
    assert code == 0 and json.loads(out)["results"][0]["name"] == "combined_ratio"


def test_members_srs(capsys, srs_params):
    _, out, _ = run(capsys, "members", "--params", srs_params, "--format", "json")
    members = {m["name"]: m for m in json.loads(out)["members"]}
    assert len(members) == 12
    assert members["t5"]["lambda"] == pytest.approx(0.337915, rel=1e-5)
    assert members["t6"]["lambda"] == -members["t5"]["lambda"]
    assert members["t4"]["lambda"] == 0.964


def test_members_stratified(capsys, strat_params):
    _, out, _ = run(capsys, "members", "--params", strat_params)
    assert len(out.strip().splitlines()) == 1 + 11


def test_missing_params_file(capsys, tmp_path):
    code, _, err = run(capsys, "members", "--params", str(tmp_path / "nope.json"))
    assert code != 0 and json.loads(err)["error"]
