"""Scenario runner.

Each transaction ("tick") selects a pair of agents and an exchange fraction
from either the uniform generator or the chaotic map, then applies the trade
rule. The inner loop is a numba kernel fed with blocks of uniform variates
drawn from numpy's PCG64 generator, so results do not depend on the block
size and memory stays O(N).
"""

from __future__ import annotations

import dataclasses
import enum
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np

from .chaos import (
    DEFAULT_BURN_IN,
    DEFAULT_INITIAL_STATE,
    DivergenceError,
    HenonParams,
    LogisticBimapParams,
    MapKind,
    MapState,
    bimap_core,
    burn_in,
    henon_core,
    henon_nu,
    henon_pair,
    params_kind,
)
from .market import Population, TradeRule, rule1_core, rule2_core

# Table I/II gains of the y-update; the x-update gain stays at 1.032.
CASE_LAMBDA_A = 1.032
CASE_LAMBDA_B = (1.032, 1.03781, 1.04362, 1.049430, 1.06105, 1.07267, 1.07848, 1.08429)

BLOCK_TICKS = 1 << 20


class Scenario(enum.Enum):
    BASELINE = "baseline"  # uniform pair, uniform nu
    SCENARIO_I = "I"  # uniform pair, chaotic nu
    SCENARIO_II = "II"  # chaotic pair, uniform nu


# uniforms consumed per tick
_STRIDE = {Scenario.BASELINE: 3, Scenario.SCENARIO_I: 2, Scenario.SCENARIO_II: 1}
_SCENARIO_CODE = {Scenario.BASELINE: 0, Scenario.SCENARIO_I: 1, Scenario.SCENARIO_II: 2}
_MAP_CODE = {MapKind.HENON: 0, MapKind.BIMAP: 1}


@dataclass
class ScenarioConfig:
    scenario: Scenario
    rule: TradeRule
    map_kind: MapKind = MapKind.BIMAP
    map_params: HenonParams | LogisticBimapParams | None = None
    n_agents: int = 500
    m0: float = 1000.0
    n_transactions: int = 400_000
    rng_seed: int = 0
    initial_state: MapState | None = None
    burn_in: int = DEFAULT_BURN_IN
    snapshot_every: int | None = None

    def __post_init__(self):
        self.scenario = Scenario(self.scenario)
        self.rule = TradeRule(self.rule)
        self.map_kind = MapKind(self.map_kind)
        if self.map_params is None:
            self.map_params = HenonParams() if self.map_kind is MapKind.HENON else LogisticBimapParams()
        if params_kind(self.map_params) is not self.map_kind:
            raise ValueError(f"map parameters {self.map_params!r} do not match map kind {self.map_kind.value}")
        if self.initial_state is None:
            self.initial_state = DEFAULT_INITIAL_STATE[self.map_kind]
        if self.n_agents < 2:
            raise ValueError(f"n_agents must be at least 2, got {self.n_agents}")
        if self.n_transactions < 1:
            raise ValueError(f"n_transactions must be at least 1, got {self.n_transactions}")
        if not self.m0 >= 0:
            raise ValueError(f"m0 must be non-negative, got {self.m0}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be non-negative, got {self.burn_in}")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be a non-negative 64-bit integer")
        if self.snapshot_every is not None and self.snapshot_every < 0:
            raise ValueError("snapshot_every must be non-negative")

    @property
    def snapshot_interval(self) -> int:
        """Ticks between snapshots; 0 disables them."""
        if self.snapshot_every is None:
            return max(1, self.n_transactions // 100)
        return self.snapshot_every

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        params = dataclasses.asdict(self.map_params)
        return {
            "scenario": self.scenario.value,
            "rule": int(self.rule),
            "map": self.map_kind.value,
            **params,
            "agents": self.n_agents,
            "m0": self.m0,
            "steps": self.n_transactions,
            "seed": self.rng_seed,
            "x0": self.initial_state.x,
            "y0": self.initial_state.y,
            "burn_in": self.burn_in,
            "snapshot_every": self.snapshot_interval,
        }


@dataclass
class RunResult:
    config: ScenarioConfig
    population: Population
    executed: int
    refused: int
    skipped: int
    final_state: MapState
    snapshot_ticks: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    snapshots: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    @property
    def n_transactions(self) -> int:
        return self.executed + self.refused + self.skipped

    @property
    def participants(self) -> int:
        return int(np.count_nonzero(self.population.trades))

    @property
    def passive(self) -> int:
        return self.population.n_agents - self.participants


@numba.njit(cache=True)
def index_core(u, n):
    k = int(u * n)
    if k >= n:
        k = n - 1
    return k


def index_from_unit(u: float, n: int) -> int:
    """Agent index ``floor(u * n)``, with ``u == 1`` mapped to the last agent."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must lie in [0, 1], got {u}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return int(index_core(float(u), int(n)))


@numba.njit(cache=True)
def _advance(money, trades, scenario, map_code, p1, p2, x, y, uniforms, rule, counts):
    """Run ``len(uniforms) // stride`` ticks in place.

    ``counts`` accumulates [executed, refused, skipped]. Returns the final map
    point and the index of the tick whose map step diverged (-1 if none).
    """
    n = money.size
    if scenario == 0:
        stride = 3
    elif scenario == 1:
        stride = 2
    else:
        stride = 1
    nticks = uniforms.size // stride
    for k in range(nticks):
        base = k * stride
        if scenario != 0:
            if map_code == 0:
                nx, ny, ok = henon_core(x, y, p1, p2)
            else:
                nx, ny, ok = bimap_core(x, y, p1, p2)
            if not ok:
                return x, y, k
            x = nx
            y = ny
        if scenario == 0:
            i = index_core(uniforms[base], n)
            j = index_core(uniforms[base + 1], n)
            nu = uniforms[base + 2]
        elif scenario == 1:
            i = index_core(uniforms[base], n)
            j = index_core(uniforms[base + 1], n)
            nu = henon_nu(x) if map_code == 0 else x
        else:
            if map_code == 0:
                ui, uj = henon_pair(x, y)
            else:
                ui = x
                uj = y
            i = index_core(ui, n)
            j = index_core(uj, n)
            nu = uniforms[base]
        if i == j:
            counts[2] += 1
            continue
        if rule == 1:
            rule1_core(money, trades, i, j, nu)
            counts[0] += 1
        elif rule2_core(money, trades, i, j, nu) < 0.0:
            counts[1] += 1
        else:
            counts[0] += 1
    return x, y, -1


def _map_args(config: ScenarioConfig) -> tuple[int, float, float]:
    p = config.map_params
    if config.map_kind is MapKind.HENON:
        return _MAP_CODE[MapKind.HENON], float(p.a), float(p.b)
    return _MAP_CODE[MapKind.BIMAP], float(p.lambda_a), float(p.lambda_b)


def run(config: ScenarioConfig) -> RunResult:
    pop = Population.uniform(config.n_agents, config.m0)
    uses_map = config.scenario is not Scenario.BASELINE
    state = burn_in(config.initial_state, config.map_params, config.burn_in) if uses_map else config.initial_state
    map_code, p1, p2 = _map_args(config)
    scenario_code = _SCENARIO_CODE[config.scenario]
    stride = _STRIDE[config.scenario]
    rng = np.random.Generator(np.random.PCG64(config.rng_seed))

    counts = np.zeros(3, dtype=np.int64)
    x, y = float(state.x), float(state.y)
    every = config.snapshot_interval
    snap_ticks, snaps = [], []
    done = 0
    total = config.n_transactions
    next_snap = every if every else total + 1
    while done < total:
        block = min(BLOCK_TICKS, total - done, next_snap - done)
        uniforms = rng.random(block * stride)
        x, y, failed = _advance(
            pop.money, pop.trades, scenario_code, map_code, p1, p2, x, y, uniforms, int(config.rule), counts
        )
        if failed >= 0:
            raise DivergenceError(
                f"{config.map_kind.value} orbit diverged at transaction {done + failed + 1} "
                f"(last point x={x!r}, y={y!r})"
            )
        done += block
        if done == next_snap:
            snap_ticks.append(done)
            snaps.append(pop.money.copy())
            next_snap += every

    final_state = MapState(x, y, state.t + (total if uses_map else 0))
    return RunResult(
        config=config,
        population=pop,
        executed=int(counts[0]),
        refused=int(counts[1]),
        skipped=int(counts[2]),
        final_state=final_state,
        snapshot_ticks=np.asarray(snap_ticks, dtype=np.int64),
        snapshots=np.asarray(snaps, dtype=np.float64).reshape(len(snaps), config.n_agents),
    )


def run_many(configs: list[ScenarioConfig], workers: int = 1) -> list[RunResult]:
    """Run independent configurations, in parallel processes when ``workers > 1``.

    Results come back in input order.
    """
    configs = list(configs)
    if workers <= 1 or len(configs) <= 1:
        return [run(c) for c in configs]
    with ProcessPoolExecutor(max_workers=min(workers, len(configs))) as pool:
        return list(pool.map(run, configs))


def sweep_configs(
    base: ScenarioConfig, lambda_b_values, lambda_a: float = CASE_LAMBDA_A
) -> list[ScenarioConfig]:
    if base.scenario is not Scenario.SCENARIO_II or base.map_kind is not MapKind.BIMAP:
        raise ValueError("a lambda sweep needs a Scenario II configuration driven by the logistic bimap")
    out = []
    for lb in lambda_b_values:
        params = LogisticBimapParams(lambda_a, float(lb))
        if not params.in_chaotic_range:
            warnings.warn(f"lambda_b={lb} lies outside the chaotic interval", stacklevel=2)
        out.append(base.replace(map_params=params))
    return out


def run_lambda_sweep(
    base: ScenarioConfig, lambda_b_values, lambda_a: float = CASE_LAMBDA_A, workers: int = 1
) -> list[RunResult]:
    return run_many(sweep_configs(base, lambda_b_values, lambda_a), workers=workers)
