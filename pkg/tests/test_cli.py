import csv
import json
import logging

import numpy as np
import pytest
from scipy import stats

from chaotic_economy import cli
from chaotic_economy.chaos import LogisticBimapParams, MapKind
from chaotic_economy.engine import Scenario
from chaotic_economy.market import TradeRule


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_minimal_flags_apply_defaults():
    spec = cli.parse_config(["--scenario", "baseline", "--rule", "2"])
    cfg = spec.config
    assert cfg.scenario is Scenario.BASELINE and cfg.rule is TradeRule.RULE2
    assert (cfg.n_agents, cfg.m0, cfg.n_transactions) == (500, 1000.0, 400_000)
    assert spec.formats == ("csv", "json")
    assert spec.histogram_bin_width == 50.0


def test_missing_scenario_is_an_error():
    with pytest.raises(cli.ConfigError, match="scenario"):
        cli.parse_config(["--rule", "2"])


def test_too_few_agents():
    with pytest.raises(cli.ConfigError):
        cli.parse_config(["--scenario", "I", "--rule", "1", "--agents", "1"])


def test_unknown_scenario():
    with pytest.raises(cli.ConfigError):
        cli.parse_config(["--scenario", "III", "--rule", "1"])


def test_case8_preset():
    cfg = cli.parse_config(["--preset", "case8"]).config
    assert cfg.scenario is Scenario.SCENARIO_II and cfg.map_kind is MapKind.BIMAP
    assert cfg.map_params == LogisticBimapParams(1.032, 1.08429)
    assert (cfg.n_agents, cfg.n_transactions, cfg.rule) == (5000, 50_000_000, TradeRule.RULE2)


def test_desk_divides_steps():
    assert cli.parse_config(["--preset", "case1", "--desk"]).config.n_transactions == 5_000_000
    assert cli.parse_config(["--preset", "baseline", "--desk"]).config.n_transactions == 40_000
    assert cli.parse_config(["--preset", "baseline", "--desk"]).config.n_agents == 500


def test_lambda_out_of_range_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="chaotic_economy"):
        spec = cli.parse_config(["--scenario", "II", "--rule", "2", "--lambda-b", "1.09"])
    assert spec.config.map_params.lambda_b == 1.09
    assert "outside the chaotic interval" in caplog.text


def test_flags_override_preset():
    spec = cli.parse_config(["--preset", "fig1", "--agents", "200", "--seed", "4", "5"])
    assert spec.config.n_agents == 200
    assert spec.seeds == (4, 5) and spec.config.rng_seed == 4


def test_key_value_config_file(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("# comment\nscenario = I\nrule=1\nmap = henon\nagents = 100\nsteps = 1e4\nformat = csv\n")
    spec = cli.parse_config(path)
    assert spec.config.map_kind is MapKind.HENON and spec.config.n_transactions == 10_000
    assert spec.formats == ("csv",)


def test_json_config_file(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({"config": {"scenario": "II", "rule": 2, "agents": 300}, "analysis": {"x_min": 1500}}))
    spec = cli.parse_config(path)
    assert spec.config.n_agents == 300 and spec.x_min == 1500.0


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("scenario = I\nrule = 1\ncolour = blue\n")
    with pytest.raises(cli.ConfigError, match="colour"):
        cli.parse_config(path)


def test_dry_run_runs_nothing(tmp_path, capsys):
    out = tmp_path / "o"
    assert cli.main(["run", "--preset", "baseline", "--out", str(out), "--dry-run"]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["config"]["agents"] == 500
    assert not out.exists()


def test_baseline_preset_ccdf_file_is_exponential(tmp_path):
    spec = cli.parse_config(["--preset", "baseline", "--out", str(tmp_path)])
    (bundle,) = cli.cmd_run(spec)
    header, rows = read_csv(bundle.directory / "ccdf.csv")
    assert header == ["value", "P"]
    v = np.array([float(r[0]) for r in rows])
    p = np.array([float(r[1]) for r in rows])
    lo, hi = v.min(), v.max()
    m = (v >= lo + 0.05 * (hi - lo)) & (v <= hi - 0.05 * (hi - lo))
    assert stats.linregress(v[m], np.log(p[m])).rvalue ** 2 >= 0.98

    header, rows = read_csv(bundle.directory / "histogram.csv")
    assert header == ["value", "count"]
    assert sum(int(r[1]) for r in rows) == 500

    meta = json.loads((bundle.directory / "report.json").read_text())
    t = meta["ticks"]
    assert t["executed"] + t["refused"] + t["skipped"] == 400_000
    assert meta["summary"]["passive"] == 0

    header, rows = read_csv(bundle.directory / "snapshots.csv")
    assert len(rows) == 100 and all(float(r[2]) <= 1e-9 for r in rows)


def test_case1_desk_reports_passive_agents(tmp_path):
    spec = cli.parse_config(["--preset", "case1", "--desk", "--out", str(tmp_path)])
    (bundle,) = cli.cmd_run(spec)
    meta = json.loads((bundle.directory / "report.json").read_text())
    assert meta["summary"]["passive"] > 0


def test_echoed_config_reproduces_files(tmp_path):
    spec = cli.parse_config(["--preset", "fig4", "--steps", "50000", "--out", str(tmp_path / "a")])
    (first,) = cli.cmd_run(spec)
    again = cli.parse_config(["--config", str(first.directory / "report.json"), "--out", str(tmp_path / "b")])
    (second,) = cli.cmd_run(again)
    for name in ("histogram.csv", "ccdf.csv", "snapshots.csv"):
        assert (first.directory / name).read_bytes() == (second.directory / name).read_bytes()


def test_sweep_single_case(tmp_path):
    spec = cli.parse_config(["sweep", "--preset", "case3", "--cases", "3", "--steps", "200000", "--out", str(tmp_path)])
    bundles, summary = cli.cmd_sweep(spec)
    assert len(bundles) == 1
    header, rows = read_csv(summary)
    assert header[:7] == ["case", "lambda_a", "lambda_b", "seed", "passive", "participants", "gini"]
    assert len(rows) == 1 and rows[0][0] == "3" and float(rows[0][2]) == 1.04362


def test_fig6_sweep_crops_ccdf(tmp_path):
    spec = cli.parse_config(["sweep", "--preset", "fig6", "--steps", "300000", "--workers", "2", "--out", str(tmp_path)])
    bundles, summary = cli.cmd_sweep(spec)
    assert len(bundles) == 5
    for b in bundles:
        _, rows = read_csv(b.directory / "ccdf.csv")
        assert rows and max(float(r[0]) for r in rows) <= 2000.0
    _, rows = read_csv(summary)
    assert [r[0] for r in rows] == ["1", "2", "3", "4", "5"]


def test_sweep_rejects_scenario1(tmp_path):
    spec = cli.parse_config(["--preset", "fig1", "--out", str(tmp_path)])
    with pytest.raises(cli.ConfigError):
        cli.cmd_sweep(spec)


def test_main_exit_codes(tmp_path, capsys):
    assert cli.main(["run", "--rule", "2"]) == 2
    assert cli.main(["run", "--preset", "fig6"]) == 2
    assert cli.main(["list-presets"]) == 0
    assert "case8" in capsys.readouterr().out
    out = tmp_path / "o"
    assert cli.main(["run", "--preset", "fig2", "--steps", "20000", "--format", "json", "--out", str(out)]) == 0
    assert sorted(p.name for p in (out / "fig2").iterdir()) == ["report.json"]
    # an explicitly requested fit that cannot be made fails the run
    assert cli.main(["run", "--preset", "fig1", "--steps", "20000", "--fit", "pareto", "--x-min", "1e9", "--out", str(out)]) == 1


def test_bad_format():
    with pytest.raises(cli.ConfigError):
        cli.parse_config(["--preset", "fig1", "--format", "xml"])
