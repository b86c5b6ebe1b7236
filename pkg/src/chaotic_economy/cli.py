"""Command-line front end.

    chaotic-economy run --preset fig1 --out results/
    chaotic-economy sweep --cases 1-8 --desk --workers 4
    chaotic-economy list-presets

Settings are merged in the order defaults < preset < config file < flags.
Every run directory gets ``histogram.csv``, ``ccdf.csv`` and
``snapshots.csv`` (format ``csv``) and ``report.json`` (format ``json``).
The ``config`` block of a ``report.json`` can be fed back with ``--config``
to reproduce the run exactly.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .analysis import Family, ParticipantFilter
from .chaos import (
    BIMAP_CHAOTIC_RANGE,
    DEFAULT_BURN_IN,
    DivergenceError,
    HenonParams,
    LogisticBimapParams,
    MapKind,
    MapState,
)
from .engine import CASE_LAMBDA_A, CASE_LAMBDA_B, RunResult, Scenario, ScenarioConfig, run as run_engine
from .market import TradeRule

log = logging.getLogger("chaotic_economy")

FORMATS = ("csv", "json")

DEFAULTS = {
    "map": "bimap",
    "agents": 500,
    "m0": 1000.0,
    "steps": 400_000,
    "seed": [0],
    "burn_in": DEFAULT_BURN_IN,
    "out": "results",
    "format": list(FORMATS),
    "x_min": analysis.DEFAULT_PARETO_X_MIN,
    "threshold": 1,
    "workers": 1,
    "desk": False,
}


def _case(n: int) -> dict:
    return {
        "scenario": "II",
        "map": "bimap",
        "rule": 2,
        "agents": 5000,
        "steps": 50_000_000,
        "lambda_a": CASE_LAMBDA_A,
        "lambda_b": CASE_LAMBDA_B[n - 1],
        "description": f"Scenario II, Rule 2, bimap case {n} (lambda_b={CASE_LAMBDA_B[n - 1]}), N=5000, 5e7 ticks",
    }


PRESETS = {
    "baseline": {
        "scenario": "baseline",
        "rule": 2,
        "description": "uniform pairs and nu, Rule 2, N=500, 4e5 ticks (Boltzmann-Gibbs reference)",
    },
    "fig1": {"scenario": "I", "map": "bimap", "rule": 1, "description": "Scenario I, bimap nu, Rule 1"},
    "fig2": {"scenario": "I", "map": "bimap", "rule": 2, "description": "Scenario I, bimap nu, Rule 2"},
    "fig3": {"scenario": "II", "map": "bimap", "rule": 1, "description": "Scenario II, bimap pairs, Rule 1"},
    "fig4": {
        "scenario": "II",
        "map": "bimap",
        "rule": 2,
        "description": "Scenario II, symmetric bimap pairs, Rule 2",
    },
    "fig5": {**_case(1), "description": "case 1 participants' CCDF (exponential)"},
    "fig6": {**_case(1), "cases": [1, 2, 3, 4, 5], "ccdf_max": 2000.0, "description": "sweep cases 1-5, CCDF up to 2000"},
    "fig7": {
        **_case(6),
        "cases": [6, 7, 8],
        "ccdf_min": 2000.0,
        "x_min": 2000.0,
        "description": "sweep cases 6-8, CCDF from 2000, Pareto tail",
    },
    **{f"case{n}": _case(n) for n in range(1, 9)},
}
SWEEP_PRESETS = {"fig6", "fig7"}


class ConfigError(ValueError):
    pass


def _parse_scenario(v) -> Scenario:
    key = str(v).strip().lower().replace("_", "").replace("-", "").replace(" ", "")
    key = key.removeprefix("scenario")
    table = {
        "baseline": Scenario.BASELINE,
        "random": Scenario.BASELINE,
        "baselinerandom": Scenario.BASELINE,
        "i": Scenario.SCENARIO_I,
        "1": Scenario.SCENARIO_I,
        "ii": Scenario.SCENARIO_II,
        "2": Scenario.SCENARIO_II,
    }
    if key not in table:
        raise ConfigError(f"unknown scenario {v!r} (expected baseline, I or II)")
    return table[key]


def _parse_map(v) -> MapKind:
    key = str(v).strip().lower().replace("é", "e").replace("_", "-")
    table = {"henon": MapKind.HENON, "bimap": MapKind.BIMAP, "logistic": MapKind.BIMAP, "logistic-bimap": MapKind.BIMAP}
    if key not in table:
        raise ConfigError(f"unknown map {v!r} (expected henon or bimap)")
    return table[key]


def _parse_rule(v) -> TradeRule:
    key = str(v).strip().lower().removeprefix("rule")
    try:
        return TradeRule(int(key))
    except ValueError:
        raise ConfigError(f"unknown rule {v!r} (expected 1 or 2)") from None


def _list(v) -> list:
    if isinstance(v, (list, tuple)):
        return list(v)
    return [s.strip() for s in str(v).split(",") if s.strip()]


def _parse_cases(v) -> list[int]:
    out = []
    for item in _list(v):
        item = str(item)
        if "-" in item:
            lo, hi = (int(s) for s in item.split("-", 1))
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(item))
    for c in out:
        if not 1 <= c <= len(CASE_LAMBDA_B):
            raise ConfigError(f"case {c} does not exist (cases are 1-{len(CASE_LAMBDA_B)})")
    return out


def _parse_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    key = str(v).strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def _optional_float(v):
    return None if v is None or v == "" else float(v)


def _optional_int(v):
    return None if v is None or v == "" else int(v)


CONVERTERS = {
    "scenario": _parse_scenario,
    "rule": _parse_rule,
    "map": _parse_map,
    "a": float,
    "b": float,
    "lambda_a": float,
    "lambda_b": float,
    "agents": int,
    "m0": float,
    "steps": lambda v: int(float(v)),
    "seed": lambda v: [int(s) for s in _list(v)],
    "x0": _optional_float,
    "y0": _optional_float,
    "burn_in": int,
    "snapshot_every": _optional_int,
    "out": str,
    "format": lambda v: [str(s).lower() for s in _list(v)],
    "fit": lambda v: [Family(str(s).lower()) for s in _list(v)],
    "x_min": float,
    "bin_width": _optional_float,
    "threshold": int,
    "ccdf_min": _optional_float,
    "ccdf_max": _optional_float,
    "cases": _parse_cases,
    "workers": int,
    "desk": _parse_bool,
    "name": str,
    "preset": str,
    "description": str,
}


@dataclass
class ExperimentSpec:
    config: ScenarioConfig
    name: str
    out_dir: Path
    formats: tuple[str, ...] = FORMATS
    fits: tuple[Family, ...] = tuple(Family)
    strict_fits: bool = False  # fit failures are fatal only when families were requested
    x_min: float = analysis.DEFAULT_PARETO_X_MIN
    bin_width: float | None = None
    participant_filter: ParticipantFilter = field(default_factory=ParticipantFilter)
    seeds: tuple[int, ...] = (0,)
    ccdf_min: float | None = None
    ccdf_max: float | None = None
    cases: tuple[int, ...] = tuple(range(1, len(CASE_LAMBDA_B) + 1))
    workers: int = 1
    preset: str | None = None

    @property
    def histogram_bin_width(self) -> float:
        if self.bin_width is not None:
            return self.bin_width
        return self.config.m0 / 20 if self.config.m0 > 0 else 1.0

    def analysis_dict(self) -> dict:
        return {
            "fit": [f.value for f in self.fits] if self.strict_fits else None,
            "x_min": self.x_min,
            "bin_width": self.histogram_bin_width,
            "threshold": self.participant_filter.min_trades,
            "ccdf_min": self.ccdf_min,
            "ccdf_max": self.ccdf_max,
        }

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "preset": self.preset,
            "out": str(self.out_dir),
            "format": list(self.formats),
            "seeds": list(self.seeds),
            "cases": list(self.cases),
            "workers": self.workers,
            "config": self.config.to_dict(),
            "analysis": self.analysis_dict(),
        }


@dataclass
class ReportBundle:
    name: str
    directory: Path
    metadata: dict
    files: list[Path]
    summary: analysis.DistributionSummary
    result: RunResult


def load_config_file(path) -> dict:
    """Read a JSON document or flat ``key = value`` lines into a flat settings dict."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        flat = {}
        for key, value in data.items():
            if key in ("config", "analysis") and isinstance(value, dict):
                flat.update(value)
            elif key == "seeds":
                flat["seed"] = value
            elif key in CONVERTERS:
                flat[key] = value
            # run metadata in a report.json (wall time, ticks, fits) is ignored
            elif key not in ("wall_time_s", "ticks", "summary", "files", "version", "seed_replicate"):
                raise ConfigError(f"{path}: unknown setting {key!r}")
        return {k: v for k, v in flat.items() if v is not None}
    flat = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        flat[key.replace("-", "_")] = value
    return flat


def build_spec(settings: dict) -> ExperimentSpec:
    """Validate a merged flat settings dict and apply defaults."""
    unknown = set(settings) - set(CONVERTERS)
    if unknown:
        raise ConfigError(f"unknown setting(s): {', '.join(sorted(unknown))}")
    s = dict(DEFAULTS)
    preset = settings.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; see list-presets")
        s.update(PRESETS[preset])
    s.update(settings)
    try:
        s = {k: CONVERTERS[k](v) for k, v in s.items()}
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    if "scenario" not in s:
        raise ConfigError("no scenario given (use --scenario baseline|I|II or a preset)")
    if "rule" not in s:
        raise ConfigError("no trade rule given (use --rule 1|2 or a preset)")
    if s["agents"] < 2:
        raise ConfigError(f"need at least 2 agents, got {s['agents']}")
    if not s["format"] or set(s["format"]) - set(FORMATS):
        raise ConfigError(f"output formats must be a non-empty subset of {FORMATS}, got {s['format']}")
    if not s["seed"]:
        raise ConfigError("at least one seed is required")
    if s["workers"] < 1:
        raise ConfigError("workers must be at least 1")

    map_kind = s["map"]
    if map_kind is MapKind.HENON:
        params = HenonParams(s.get("a", 1.4), s.get("b", 0.3))
    else:
        params = LogisticBimapParams(s.get("lambda_a", CASE_LAMBDA_A), s.get("lambda_b", CASE_LAMBDA_A))
        if not params.in_chaotic_range:
            log.warning(
                "bimap gains (%s, %s) outside the chaotic interval %s; the orbit may be periodic or diverge",
                params.lambda_a,
                params.lambda_b,
                list(BIMAP_CHAOTIC_RANGE),
            )
    steps = s["steps"]
    if s["desk"]:
        steps = max(1, steps // 10)
    initial = None
    if s.get("x0") is not None or s.get("y0") is not None:
        if s.get("x0") is None or s.get("y0") is None:
            raise ConfigError("x0 and y0 must be given together")
        initial = MapState(s["x0"], s["y0"])
    try:
        config = ScenarioConfig(
            scenario=s["scenario"],
            rule=s["rule"],
            map_kind=map_kind,
            map_params=params,
            n_agents=s["agents"],
            m0=s["m0"],
            n_transactions=steps,
            rng_seed=s["seed"][0],
            initial_state=initial,
            burn_in=s["burn_in"],
            snapshot_every=s.get("snapshot_every"),
        )
        pfilter = ParticipantFilter(s["threshold"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if s.get("bin_width") is not None and not s["bin_width"] > 0:
        raise ConfigError("bin width must be positive")
    name = s.get("name") or preset or f"{config.scenario.value}-rule{int(config.rule)}-{config.map_kind.value}"
    return ExperimentSpec(
        config=config,
        name=name,
        out_dir=Path(s["out"]),
        formats=tuple(dict.fromkeys(s["format"])),
        fits=tuple(s["fit"]) if s.get("fit") else tuple(Family),
        strict_fits=bool(s.get("fit")),
        x_min=s["x_min"],
        bin_width=s.get("bin_width"),
        participant_filter=pfilter,
        seeds=tuple(s["seed"]),
        ccdf_min=s.get("ccdf_min"),
        ccdf_max=s.get("ccdf_max"),
        cases=tuple(s["cases"]) if s.get("cases") else tuple(range(1, len(CASE_LAMBDA_B) + 1)),
        workers=s["workers"],
        preset=preset,
    )


def _add_common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--preset", default=S, help="named recipe, see list-presets")
    p.add_argument("--config", dest="config_file", default=S, help="JSON or key=value config file")
    p.add_argument("--scenario", default=S, help="baseline, I or II")
    p.add_argument("--rule", default=S, help="trade rule, 1 or 2")
    p.add_argument("--map", default=S, help="henon or bimap")
    p.add_argument("--agents", default=S, type=int)
    p.add_argument("--m0", default=S, type=float, help="initial money per agent")
    p.add_argument("--steps", default=S, type=lambda v: int(float(v)), help="number of transactions")
    p.add_argument("--seed", default=S, type=int, nargs="+", help="one or more replicate seeds")
    p.add_argument("--lambda-a", dest="lambda_a", default=S, type=float)
    p.add_argument("--lambda-b", dest="lambda_b", default=S, type=float)
    p.add_argument("--henon-a", dest="a", default=S, type=float)
    p.add_argument("--henon-b", dest="b", default=S, type=float)
    p.add_argument("--x0", default=S, type=float, help="initial map x (with --y0)")
    p.add_argument("--y0", default=S, type=float)
    p.add_argument("--burn-in", dest="burn_in", default=S, type=int)
    p.add_argument("--snapshot-every", dest="snapshot_every", default=S, type=int, help="0 disables snapshots")
    p.add_argument("--out", default=S, help="output directory")
    p.add_argument("--format", default=S, help="comma list of csv,json")
    p.add_argument("--fit", default=S, help="comma list of exponential,gamma,pareto")
    p.add_argument("--x-min", dest="x_min", default=S, type=float, help="Pareto tail threshold")
    p.add_argument("--bin-width", dest="bin_width", default=S, type=float)
    p.add_argument("--threshold", default=S, type=int, help="minimum trades for a participant")
    p.add_argument("--ccdf-min", dest="ccdf_min", default=S, type=float)
    p.add_argument("--ccdf-max", dest="ccdf_max", default=S, type=float)
    p.add_argument("--name", default=S)
    p.add_argument("--desk", default=S, action="store_const", const=True, help="reduced scale: steps / 10")
    p.add_argument("--workers", default=S, type=int)
    p.add_argument("--dry-run", action="store_true", help="validate and print the spec, run nothing")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chaotic-economy", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("run", help="run one experiment (per seed)"))
    p = sub.add_parser("sweep", help="run the Scenario II lambda_b cases")
    _add_common(p)
    p.add_argument("--cases", default=argparse.SUPPRESS, help="e.g. 1-8 or 1,3,5")
    sub.add_parser("list-presets", help="show named recipes")
    return parser


def _settings_from_namespace(ns: argparse.Namespace) -> dict:
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "verbose", "dry_run", "config_file")}
    settings = {}
    if getattr(ns, "config_file", None):
        settings.update(load_config_file(ns.config_file))
    if "preset" in flags and "preset" in settings and flags["preset"] != settings["preset"]:
        settings.pop("preset")
    settings.update(flags)
    return settings


def parse_config(source) -> ExperimentSpec:
    """Build a spec from a config file path or a list of ``run``/``sweep`` arguments."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        return build_spec(load_config_file(source))
    argv = list(source)
    if not argv or argv[0] not in ("run", "sweep"):
        argv = ["run", *argv]
    ns = make_parser().parse_args(argv)
    return build_spec(_settings_from_namespace(ns))


# --- output -------------------------------------------------------------------


def _fmt(v) -> str:
    return repr(float(v))


def _write_csv(path: Path, header, rows) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def _histogram_rows(money, width):
    counts = analysis.histogram(money, width)
    if not counts:
        return []
    lo, hi = min(counts), max(counts)
    return [(_fmt(k * width), counts.get(k, 0)) for k in range(lo, hi + 1)]


def _ccdf_rows(money, lo, hi):
    if money.size == 0:
        return []
    v, p = analysis.ccdf(money).points()
    mask = np.ones(v.size, dtype=bool)
    if lo is not None:
        mask &= v >= lo
    if hi is not None:
        mask &= v <= hi
    return [(_fmt(a), _fmt(b)) for a, b in zip(v[mask], p[mask])]


def _snapshot_rows(result: RunResult):
    expected = result.population.expected_total
    rows = []
    for tick, money in zip(result.snapshot_ticks, result.snapshots):
        total = float(np.sum(money))
        rel = abs(total - expected) / expected if expected else abs(total)
        g = analysis.gini(money) if total > 0 else 0.0
        rows.append((int(tick), _fmt(total), _fmt(rel), _fmt(g)))
    return rows


def write_bundle(spec: ExperimentSpec, result: RunResult, wall_time: float, directory: Path) -> ReportBundle:
    summary = analysis.summarize(result, spec.fits, spec.x_min, spec.participant_filter)
    if spec.strict_fits and summary.fit_errors:
        fam, msg = next(iter(summary.fit_errors.items()))
        raise analysis.AnalysisError(f"{fam} fit failed: {msg}")
    directory.mkdir(parents=True, exist_ok=True)
    money, _ = analysis.filter_participants(result, spec.participant_filter)
    files = []
    if "csv" in spec.formats:
        files.append(
            _write_csv(
                directory / "histogram.csv",
                ("value", "count"),
                _histogram_rows(result.population.money, spec.histogram_bin_width),
            )
        )
        files.append(_write_csv(directory / "ccdf.csv", ("value", "P"), _ccdf_rows(money, spec.ccdf_min, spec.ccdf_max)))
        files.append(
            _write_csv(directory / "snapshots.csv", ("tick", "total_money", "relative_error", "gini"), _snapshot_rows(result))
        )
    metadata = {
        "name": spec.name,
        "preset": spec.preset,
        "format": list(spec.formats),
        "config": result.config.to_dict(),
        "analysis": spec.analysis_dict(),
        "wall_time_s": wall_time,
        "ticks": {
            "total": result.n_transactions,
            "executed": result.executed,
            "refused": result.refused,
            "skipped": result.skipped,
        },
        "summary": summary.to_dict(),
    }
    if "json" in spec.formats:
        path = directory / "report.json"
        metadata["files"] = [f.name for f in files] + [path.name]
        path.write_text(json.dumps(metadata, indent=2) + "\n")
        files.append(path)
    return ReportBundle(spec.name, directory, metadata, files, summary, result)


def _timed_run(config: ScenarioConfig) -> tuple[RunResult, float]:
    start = time.perf_counter()
    res = run_engine(config)
    return res, time.perf_counter() - start


def _run_all(configs, workers):
    if workers <= 1 or len(configs) <= 1:
        return [_timed_run(c) for c in configs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=min(workers, len(configs))) as pool:
        return list(pool.map(_timed_run, configs))


def _run_dir(spec: ExperimentSpec, seed: int, case: int | None = None) -> Path:
    d = spec.out_dir / spec.name
    if case is not None:
        d = d / f"case{case}"
    if len(spec.seeds) > 1:
        d = d / f"seed-{seed}"
    return d


def cmd_run(spec: ExperimentSpec) -> list[ReportBundle]:
    """One bundle per replicate seed."""
    configs = [spec.config.replace(rng_seed=s) for s in spec.seeds]
    outputs = _run_all(configs, spec.workers)
    return [write_bundle(spec, res, wall, _run_dir(spec, res.config.rng_seed)) for res, wall in outputs]


def cmd_sweep(spec: ExperimentSpec, cases=None) -> tuple[list[ReportBundle], Path]:
    """One bundle per (case, seed) plus ``summary.csv`` with one row per bundle."""
    cfg = spec.config
    if cfg.scenario is not Scenario.SCENARIO_II or cfg.map_kind is not MapKind.BIMAP:
        raise ConfigError("sweep needs a Scenario II configuration driven by the bimap")
    cases = list(cases or spec.cases)
    jobs = []
    for case in cases:
        params = LogisticBimapParams(CASE_LAMBDA_A, CASE_LAMBDA_B[case - 1])
        for seed in spec.seeds:
            jobs.append((case, cfg.replace(map_params=params, rng_seed=seed)))
    outputs = _run_all([c for _, c in jobs], spec.workers)
    bundles, rows = [], []
    for (case, _), (res, wall) in zip(jobs, outputs):
        b = write_bundle(spec, res, wall, _run_dir(spec, res.config.rng_seed, case))
        bundles.append(b)
        fits = b.summary.fits
        par = fits.get("pareto")
        exp = fits.get("exponential")
        rows.append(
            (
                case,
                _fmt(res.config.map_params.lambda_a),
                _fmt(res.config.map_params.lambda_b),
                res.config.rng_seed,
                b.summary.passive,
                b.summary.n_agents - b.summary.passive,
                _fmt(b.summary.gini),
                _fmt(par["alpha"]) if par else "",
                _fmt(par.r_squared) if par else "",
                _fmt(exp["temperature"]) if exp else "",
                _fmt(exp.r_squared) if exp else "",
            )
        )
    (spec.out_dir / spec.name).mkdir(parents=True, exist_ok=True)
    summary_path = _write_csv(
        spec.out_dir / spec.name / "summary.csv",
        (
            "case",
            "lambda_a",
            "lambda_b",
            "seed",
            "passive",
            "participants",
            "gini",
            "pareto_alpha",
            "pareto_r2",
            "exp_temperature",
            "exp_r2",
        ),
        rows,
    )
    return bundles, summary_path


def _print_bundle(b: ReportBundle) -> None:
    t = b.metadata["ticks"]
    parts = [
        f"{b.directory}:",
        f"ticks={t['total']} (executed {t['executed']}, refused {t['refused']}, skipped {t['skipped']})",
        f"passive={b.summary.passive}",
        f"gini={b.summary.gini:.4f}",
    ]
    f = b.summary.fits
    if "exponential" in f:
        parts.append(f"T={f['exponential']['temperature']:.1f} (R2 {f['exponential'].r_squared:.3f})")
    if "gamma" in f:
        parts.append(f"k={f['gamma']['shape']:.3f}")
    if "pareto" in f:
        parts.append(f"alpha={f['pareto']['alpha']:.3f} (R2 {f['pareto'].r_squared:.3f})")
    print(" ".join(parts))


def _list_presets() -> None:
    for name, p in PRESETS.items():
        kind = "sweep" if name in SWEEP_PRESETS else "run"
        print(f"{name:10s} [{kind}] {p['description']}")


def main(argv=None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.INFO, format="%(levelname)s: %(message)s")
    if ns.command == "list-presets":
        _list_presets()
        return 0
    try:
        settings = _settings_from_namespace(ns)
        if ns.command == "run" and settings.get("preset") in SWEEP_PRESETS:
            raise ConfigError(f"preset {settings['preset']} is a sweep; use 'sweep --preset {settings['preset']}'")
        spec = build_spec(settings)
        if ns.dry_run:
            print(json.dumps(spec.to_dict(), indent=2))
            return 0
        if ns.command == "run":
            for b in cmd_run(spec):
                _print_bundle(b)
        else:
            bundles, summary = cmd_sweep(spec)
            for b in bundles:
                _print_bundle(b)
            print(f"summary: {summary}")
    except ConfigError as exc:
        log.error("%s", exc)
        return 2
    except (DivergenceError, analysis.AnalysisError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
