import pytest

from flowround.core import fractional_edges, is_circulation, net_flows
from flowround.errors import InvalidParameterError
from flowround.generate import generate_circulation, generate_st_flow


@pytest.mark.parametrize("seed", range(10))
def test_circulations_balance(seed):
    inst = generate_circulation(12, 30, 10, seed=seed, costed=seed % 2 == 0, self_loops=0.05)
    assert is_circulation(inst.state)
    assert inst.state.m == 30
    assert inst.state.has_costs == (seed % 2 == 0)


def test_same_seed_same_instance():
    a = generate_circulation(8, 20, 5, seed=9)
    b = generate_circulation(8, 20, 5, seed=9)
    assert a.state.f1 == b.state.f1 and a.state.graph == b.state.graph


def test_triangle_with_one_cycle():
    inst = generate_circulation(3, 3, 1, seed=1)
    vals = {abs(x) for x in inst.state.f1}
    assert len(vals) == 1
    assert fractional_edges(inst.state) == {0, 1, 2}


@pytest.mark.parametrize("seed", range(10))
def test_st_value_is_fractional(seed):
    inst = generate_st_flow(10, 25, 3, 4, seed=seed)
    s, t = inst.source_sink
    bal = net_flows(inst.state)
    assert bal[t] == -bal[s] and bal[t].denominator != 1
    assert all(b == 0 for v, b in enumerate(bal) if v not in (s, t))


@pytest.mark.parametrize("args", [(2, 5, 1), (5, 4, 1), (5, 5, -1)])
def test_bad_parameters(args):
    with pytest.raises(InvalidParameterError):
        generate_circulation(*args)
    with pytest.raises(InvalidParameterError):
        generate_st_flow(5, 5, 0, 1)
