import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaotic_economy.market import (
    Population,
    SelfTradeError,
    TradeRule,
    apply_rule,
    apply_rule1,
    apply_rule2,
    total_money,
)


def pair(a, b):
    return Population(np.array([a, b], dtype=float), np.zeros(2, dtype=np.int64), (a + b) / 2)


def test_rule1_symmetric_split():
    pop = pair(1000.0, 1000.0)
    out = apply_rule1(pop, 0, 1, 0.5)
    assert out.executed and out.delta_m == 0.0
    assert pop.money.tolist() == [1000.0, 1000.0]
    assert pop.trades.tolist() == [1, 1]


def test_rule1_full_share():
    pop = pair(1000.0, 1000.0)
    apply_rule1(pop, 0, 1, 1.0)
    assert pop.money.tolist() == [2000.0, 0.0]


def test_rule1_quarter():
    pop = pair(300.0, 700.0)
    out = apply_rule1(pop, 0, 1, 0.25)
    assert pop.money.tolist() == pytest.approx([250.0, 750.0])
    assert out.delta_m == pytest.approx(50.0)


def test_rule2_half():
    pop = pair(1000.0, 1000.0)
    out = apply_rule2(pop, 0, 1, 0.5)
    assert out.executed and out.delta_m == 500.0
    assert pop.money.tolist() == [500.0, 1500.0]


def test_rule2_refused_when_short():
    pop = pair(100.0, 10000.0)
    out = apply_rule2(pop, 0, 1, 0.9)
    assert not out.executed and out.delta_m == 0.0
    assert pop.money.tolist() == [100.0, 10000.0]
    assert pop.trades.tolist() == [0, 0]


def test_rule2_zero_fraction():
    pop = pair(400.0, 600.0)
    out = apply_rule2(pop, 0, 1, 0.0)
    assert out.executed and out.delta_m == 0.0
    assert pop.money.tolist() == [400.0, 600.0]
    assert pop.trades.tolist() == [1, 1]


def test_rule2_exact_boundary_executes():
    # m_i == dm: nu (m_i + m_j) / 2 = m_i with m_i == m_j and nu == 1
    pop = pair(500.0, 500.0)
    out = apply_rule2(pop, 0, 1, 1.0)
    assert out.executed
    assert pop.money.tolist() == [0.0, 1000.0]


def test_total_money():
    assert total_money(Population.uniform(500, 1000.0)) == 500000.0
    assert total_money(Population.uniform(0, 1000.0)) == 0.0


@pytest.mark.parametrize("fn", [apply_rule1, apply_rule2])
def test_errors(fn):
    pop = Population.uniform(3, 10.0)
    with pytest.raises(SelfTradeError):
        fn(pop, 1, 1, 0.3)
    with pytest.raises(IndexError):
        fn(pop, 0, 3, 0.3)
    with pytest.raises(IndexError):
        fn(pop, -1, 0, 0.3)
    with pytest.raises(ValueError):
        fn(pop, 0, 1, 1.5)


money = st.floats(min_value=0.0, max_value=1e7, allow_nan=False)
frac = st.floats(min_value=0.0, max_value=1.0)


@given(money, money, frac)
def test_rule1_pair_sum_exact(a, b, nu):
    pop = pair(a, b)
    s = pop.money[0] + pop.money[1]
    apply_rule1(pop, 0, 1, nu)
    assert pop.money[0] + pop.money[1] == s
    assert pop.money.min() >= 0.0


@given(money, money, frac)
def test_rule2_payer_never_gains(a, b, nu):
    pop = pair(a, b)
    before = pop.money.copy()
    out = apply_rule2(pop, 0, 1, nu)
    assert pop.money[0] <= before[0]
    assert pop.money.min() >= 0.0
    if not out.executed:
        assert pop.money.tobytes() == before.tobytes()


trade = st.tuples(st.sampled_from([TradeRule.RULE1, TradeRule.RULE2]), st.integers(0, 9), st.integers(0, 9), frac)


@given(st.lists(trade, max_size=300))
def test_conservation_over_sequences(trades):
    pop = Population.uniform(10, 1000.0)
    for rule, i, j, nu in trades:
        if i == j:
            continue
        apply_rule(pop, rule, i, j, nu)
        assert pop.money.min() >= 0.0
    assert pop.conservation_error() <= 1e-9
    assert total_money(pop) == pytest.approx(10000.0, rel=1e-9)


def test_trade_counter_tracks_participation():
    pop = Population.uniform(4, 100.0)
    apply_rule1(pop, 0, 2, 0.3)
    apply_rule2(pop, 2, 3, 0.1)
    apply_rule2(pop, 1, 3, 1.0)  # dm = (100 + 112) / 2 > 100: refused
    assert pop.trades.tolist() == [1, 0, 2, 1]
