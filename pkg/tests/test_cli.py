import csv
import io
import json

import pytest

from fermidicke.cli import RunConfig, main, parse_angle


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.mark.parametrize("text,value", [("pi", 3.141592653589793), ("pi/2", 1.5707963267948966), ("0.5pi", 1.5707963267948966), ("0.25", 0.25)])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


def test_rates_table_and_csv():
    code, out, _ = run(["rates", "--n", "4", "--phi", "pi", "--stats", "bf", "--out", "r.csv"])
    assert code == 0
    rows = list(csv.DictReader(open("r.csv")))
    assert len(rows) == 1
    assert float(rows[0]["closed_form"]) == pytest.approx(3.5)
    assert json.loads(open("r.csv.config.json").read())["n"] == 4


def test_rates_all_statistics_json():
    code, _, _ = run(["rates", "--n", "3", "--format", "json", "--out", "r.json"])
    assert code == 0
    data = json.load(open("r.json"))
    rows = data["rows"] if isinstance(data, dict) else data
    assert {r["stats"] for r in rows} == {"bf", "fb", "bb"}


def test_classify_two_sites(in_tmp):
    code, out, _ = run(["classify", "--n", "2", "--out", "c.json", "--dump", "basis.json"])
    assert code == 0
    report = json.load(open("c.json"))
    assert json.dumps(report)
    assert (in_tmp / "basis.json").exists()
    assert "bright" in out.lower()


def test_graph_outputs():
    code, out, _ = run(["graph", "--n", "4", "--m", "3", "--out", "g"])
    assert code == 0
    assert out.strip() == "sectors=2, sector_size=8, hypercube=ok"
    data = json.load(open("g.json"))
    assert len(data["nodes"]) == 16
    assert {"src", "dst", "mode"} <= set(data["edges"][0])
    assert open("g.dot").read().count("mode=") == len(data["edges"])


def test_evolve_writes_trajectory_and_report():
    code, _, _ = run(["evolve", "--n", "2", "--g", "1", "--t-max", "2", "--points", "11", "--out", "e.csv"])
    assert code == 0
    lines = open("e.csv").read().splitlines()
    assert lines[0] == "t,n_C,n_nu,n_bar,emitted" and len(lines) == 12
    report = json.load(open("e.csv.report.json"))
    assert report["max_abs_deviation"] < 1e-7


def test_sweep_rows_in_grid_order():
    code, _, _ = run(["sweep", "--n", "2", "--g", "1", "--kappa", "20", "--engine", "moments",
                      "--param", "kappa_phi", "--values", "0.5,0.1,0.01", "--t-max", "20", "--out", "s.csv"])
    assert code == 0
    rows = list(csv.DictReader(open("s.csv")))
    assert [r["value"] for r in rows] == ["0.5", "0.1", "0.01"]
    assert all(r["status"] == "ok" for r in rows)


def test_config_file_and_override(in_tmp):
    (in_tmp / "cfg.json").write_text(json.dumps({"n": 3, "phi": "pi", "stats": "fb"}))
    code, _, _ = run(["rates", "--config", "cfg.json", "--n", "5", "--out", "r.csv"])
    assert code == 0
    cfg = RunConfig.from_json(open("r.csv.config.json").read())
    assert cfg.n == 5 and cfg.stats == "fb" and cfg.phi == pytest.approx(3.141592653589793)


def test_config_round_trip():
    cfg = RunConfig(command="sweep", n=3, param="kappa", values=[1.0, 2.0], kappa=1.0)
    assert RunConfig.from_json(cfg.to_json()) == cfg


@pytest.mark.parametrize(
    "argv",
    [
        ["evolve", "--points", "1"],
        ["evolve", "--kappa", "-1"],
        ["rates", "--n", "0"],
        ["rates", "--stats", "ff"],
        ["graph", "--n", "4", "--m", "5"],
        ["sweep", "--param", "kappa"],
        ["classify", "--n", "13"],
        ["bogus"],
    ],
)
def test_usage_errors(argv):
    code, _, _ = run(argv)
    assert code == 2


def test_unknown_config_key(in_tmp):
    (in_tmp / "bad.json").write_text(json.dumps({"nn": 3}))
    assert run(["rates", "--config", "bad.json"])[0] == 2


def test_io_error():
    code, _, err = run(["rates", "--n", "2", "--out", "missing_dir/r.csv"])
    assert code == 4 and "missing_dir" in err


def test_capacity_error_exit_code(monkeypatch):
    monkeypatch.setenv("FERMIDICKE_MAX_DIM", "64")
    code, _, err = run(["evolve", "--n", "8", "--t-max", "1"])
    assert code == 2 and "FERMIDICKE_MAX_DIM" in err
