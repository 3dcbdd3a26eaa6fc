from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_state
from flowround.core import CostValue, is_circulation, net_flows
from flowround.errors import (
    DegenerateCycleError,
    InvalidParameterError,
    MissingCostsError,
    NotAFlowError,
)
from flowround.policy import (
    COSTED,
    RANDOMIZED,
    CostedPolicy,
    RandomizedPolicy,
    RngState,
    ScriptedPolicy,
    bernoulli,
    choose_costed,
    circulation_from_flow,
    flow_from_circulation,
    forward_probability,
    make_policy,
)

F = Fraction
positive = st.builds(Fraction, st.integers(1, 50), st.integers(1, 20))


@pytest.mark.parametrize("cost,expected", [
    (CostValue(0, 3), False),
    (CostValue(0, 0), True),
    (CostValue(-1, 5), True),
    (CostValue(0, -2), True),
    (CostValue(1, -100), False),
])
def test_choose_costed(cost, expected):
    assert choose_costed(cost) is expected


@given(st.integers(-3, 3), st.integers(-20, 20))
def test_costed_choice_flips_with_sign(units, fin):
    c = CostValue(units, Fraction(fin))
    if c == CostValue.zero():
        assert choose_costed(c) and choose_costed(-c)
    else:
        assert choose_costed(c) != choose_costed(-c)


@pytest.mark.parametrize("a,b,p", [
    (F(3, 10), F(7, 10), F(7, 10)),
    (F(1, 2), F(1, 2), F(1, 2)),
    (F(1, 4), F(3, 4), F(3, 4)),
])
def test_forward_probability(a, b, p):
    assert forward_probability(a, b) == p


def test_degenerate_cycle():
    with pytest.raises(DegenerateCycleError):
        forward_probability(0, 0)
    with pytest.raises(DegenerateCycleError):
        forward_probability(F(-1, 2), 1)


@given(positive, positive)
def test_probability_complements_and_keeps_mean(a, b):
    p = forward_probability(a, b)
    assert p + forward_probability(b, a) == 1
    assert 0 < p < 1
    # expected change of an edge on the cycle: +a with probability p, -b otherwise
    assert p * a - (1 - p) * b == 0


def test_bernoulli_extremes():
    rng = RngState(5)
    assert not any(bernoulli(0, rng) for _ in range(200))
    assert all(bernoulli(1, rng) for _ in range(200))


def test_bernoulli_rejects_bad_probability():
    with pytest.raises(InvalidParameterError):
        bernoulli(F(3, 2), RngState(0))


def test_bernoulli_seven_tenths_mean():
    rng = RngState(2024)
    hits = sum(bernoulli(F(7, 10), rng) for _ in range(100_000))
    assert abs(hits / 100_000 - 0.7) <= 0.01


def test_rng_replays_and_checks_seed():
    a, b = RngState(99), RngState(99)
    assert [a.below(1000) for _ in range(50)] == [b.below(1000) for _ in range(50)]
    with pytest.raises(InvalidParameterError):
        RngState(2**64)
    with pytest.raises(InvalidParameterError):
        RngState(0).below(0)


def test_policies():
    d = CostedPolicy().decide(CostValue(0, 3), 2, 5)
    assert (d.forward, d.amount) == (False, 5)
    with pytest.raises(MissingCostsError):
        CostedPolicy().decide(None, 1, 1)
    s = ScriptedPolicy([False])
    assert not s.decide(None, 1, 3).forward
    assert s.decide(None, 1, 3).forward
    assert s.trace == [(F(3, 4), False), (F(3, 4), True)]
    r1, r2 = RandomizedPolicy(7), RandomizedPolicy(7)
    assert [r1.decide(None, 1, 2).forward for _ in range(30)] == [r2.decide(None, 1, 2).forward for _ in range(30)]
    assert isinstance(make_policy(COSTED), CostedPolicy)
    assert isinstance(make_policy(RANDOMIZED, 3), RandomizedPolicy)
    with pytest.raises(InvalidParameterError):
        make_policy("mixed")


def st_flow(value, costs=None):
    return make_state(2, [(0, 1)], [value], costs)


def test_reduction_single_edge():
    c = circulation_from_flow(st_flow(F(5, 2)), 0, 1, RANDOMIZED)
    assert c.m == 2 and c.protected == [False, True]
    assert c.graph.endpoints(1) == (1, 0)
    assert c.f0[1] == c.f1[1] == F(5, 2)
    assert is_circulation(c) and is_circulation(c, "original")


def test_reduction_zero_value():
    c = circulation_from_flow(st_flow(0), 0, 1, RANDOMIZED)
    assert c.f1[1] == 0


def test_reduction_costed_edge_is_minus_infinity():
    c = circulation_from_flow(st_flow(F(5, 2), [CostValue(0, 3)]), 0, 1, COSTED)
    assert c.cost[1] == CostValue(-1, 0)


def test_reduction_errors():
    with pytest.raises(NotAFlowError):
        circulation_from_flow(st_flow(F(5, 2)), 1, 0, RANDOMIZED)
    with pytest.raises(NotAFlowError):
        circulation_from_flow(make_state(3, [(0, 1)], [1]), 0, 2, RANDOMIZED)
    with pytest.raises(MissingCostsError):
        circulation_from_flow(st_flow(1), 0, 1, COSTED)
    with pytest.raises(NotAFlowError):
        flow_from_circulation(st_flow(1))


def test_round_trip_integral_flow():
    state = make_state(3, [(0, 1), (1, 2)], [2, 2])
    back, s, t, value = flow_from_circulation(circulation_from_flow(state, 0, 2, RANDOMIZED))
    assert (s, t, value) == (0, 2, 2)
    assert back.f1 == state.f1 and back.graph == state.graph


def test_net_flow_pattern_after_removal():
    state = make_state(3, [(0, 1), (1, 2), (0, 2)], [F(1, 2), F(1, 2), F(3, 4)])
    back, s, t, value = flow_from_circulation(circulation_from_flow(state, 0, 2, RANDOMIZED))
    bal = net_flows(back)
    assert bal[t] == value == F(5, 4) and bal[s] == -value and bal[1] == 0
