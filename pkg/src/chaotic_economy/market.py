"""Agent population and the two pairwise money-exchange rules."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np


class TradeRule(enum.IntEnum):
    RULE1 = 1  # split the pair's money nu / (1 - nu)
    RULE2 = 2  # i pays nu * (m_i + m_j) / 2 to j, refused if i cannot cover it


class SelfTradeError(ValueError):
    pass


@dataclass(frozen=True)
class TradeOutcome:
    executed: bool
    delta_m: float = 0.0


@dataclass
class Population:
    """Money and executed-trade counters of ``N`` agents.

    Total money ``N * m0`` is conserved by every rule application.
    """

    money: np.ndarray
    trades: np.ndarray
    m0: float

    @classmethod
    def uniform(cls, n_agents: int, m0: float) -> "Population":
        if n_agents < 0:
            raise ValueError("n_agents must be non-negative")
        if not m0 >= 0:
            raise ValueError("m0 must be non-negative")
        return cls(
            money=np.full(n_agents, float(m0), dtype=np.float64),
            trades=np.zeros(n_agents, dtype=np.int64),
            m0=float(m0),
        )

    @property
    def n_agents(self) -> int:
        return self.money.size

    @property
    def expected_total(self) -> float:
        return self.n_agents * self.m0

    def copy(self) -> "Population":
        return Population(self.money.copy(), self.trades.copy(), self.m0)

    def conservation_error(self) -> float:
        """Relative deviation of the current total from ``N * m0``."""
        expected = self.expected_total
        if expected == 0:
            return abs(total_money(self))
        return abs(total_money(self) - expected) / expected


# --- compiled cores, shared with the engine kernel --------------------------


@numba.njit(cache=True)
def rule1_core(money, trades, i, j, nu):
    s = money[i] + money[j]
    old_i = money[i]
    # The larger share is a product, the smaller one an exact subtraction
    # (Sterbenz), so the pair sum is preserved bit for bit.
    if nu >= 0.5:
        mi = nu * s
        mj = s - mi
    else:
        mj = (1.0 - nu) * s
        mi = s - mj
    money[i] = mi
    money[j] = mj
    trades[i] += 1
    trades[j] += 1
    return abs(mi - old_i)


@numba.njit(cache=True)
def rule2_core(money, trades, i, j, nu):
    """Returns the amount moved, or -1.0 when the trade is refused."""
    dm = nu * (money[i] + money[j]) / 2.0
    if money[i] < dm:
        return -1.0
    money[i] -= dm
    money[j] += dm
    trades[i] += 1
    trades[j] += 1
    return dm


def _check_pair(pop: Population, i: int, j: int, nu: float) -> None:
    n = pop.n_agents
    for k in (i, j):
        if not 0 <= k < n:
            raise IndexError(f"agent index {k} out of range for {n} agents")
    if i == j:
        raise SelfTradeError(f"agent {i} cannot trade with itself")
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"exchange fraction must lie in [0, 1], got {nu}")


def apply_rule1(pop: Population, i: int, j: int, nu: float) -> TradeOutcome:
    _check_pair(pop, i, j, nu)
    dm = rule1_core(pop.money, pop.trades, i, j, float(nu))
    return TradeOutcome(True, float(dm))


def apply_rule2(pop: Population, i: int, j: int, nu: float) -> TradeOutcome:
    _check_pair(pop, i, j, nu)
    dm = rule2_core(pop.money, pop.trades, i, j, float(nu))
    if dm < 0:
        return TradeOutcome(False, 0.0)
    return TradeOutcome(True, float(dm))


def apply_rule(pop: Population, rule: TradeRule, i: int, j: int, nu: float) -> TradeOutcome:
    if TradeRule(rule) is TradeRule.RULE1:
        return apply_rule1(pop, i, j, nu)
    return apply_rule2(pop, i, j, nu)


def total_money(pop: Population) -> float:
    return float(np.sum(pop.money))
