"""Chaotic gas-like money-exchange economies and their money distributions."""

from .chaos import (
    DivergenceError,
    HenonParams,
    LogisticBimapParams,
    MapKind,
    MapState,
    bimap_step,
    burn_in,
    henon_step,
    normalize_nu,
    normalize_pair,
)
from .engine import (
    CASE_LAMBDA_B,
    RunResult,
    Scenario,
    ScenarioConfig,
    index_from_unit,
    run,
    run_lambda_sweep,
)
from .market import Population, TradeOutcome, TradeRule, apply_rule1, apply_rule2, total_money

__version__ = "0.1.0"
