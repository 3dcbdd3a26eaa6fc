from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import circulations, make_state, triangle
from flowround.algorithms import ALGORITHMS, default_k, run
from flowround.algorithms._common import Workspace
from flowround.algorithms.mlogn2m import round_mlogn2m
from flowround.algorithms.n2 import update_flow
from flowround.core import CostValue, fractional_edges, total_cost
from flowround.errors import InvalidParameterError, NotCirculationError
from flowround.policy import CostedPolicy, RandomizedPolicy, ScriptedPolicy
from flowround.verify import check_all

F = Fraction


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_integral_input_is_left_alone(algo):
    s = make_state(3, [(0, 1), (1, 2), (2, 0)], [2, 2, 2], [1, 1, 1])
    out, stats = run(s, CostedPolicy(), algo)
    assert out.f1 == s.f1
    assert stats.cycles_canceled == 0
    assert stats.tree_ops == 0


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_costed_triangle_goes_to_zero(algo):
    s = triangle()
    out, stats = run(s, CostedPolicy(), algo)
    assert out.f1 == [0, 0, 0]
    assert total_cost(s) == CostValue(0, F(3, 2))
    assert total_cost(out) == CostValue.zero()
    assert stats.cycles_canceled == 1


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_randomized_triangle_has_two_even_outcomes(algo):
    s = triangle(costs=None)
    outcomes = {}
    for prefix in ([True], [False]):
        pol = ScriptedPolicy(prefix)
        out, _ = run(s, pol, algo)
        assert [p for p, _ in pol.trace] == [F(1, 2)]
        outcomes[tuple(out.f1)] = pol.trace[0][0]
    assert set(outcomes) == {(0, 0, 0), (1, 1, 1)}


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_input_state_is_not_modified(algo):
    s = triangle()
    run(s, RandomizedPolicy(3), algo)
    assert s.f1 == [F(1, 2)] * 3


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_rejects_non_circulation(algo):
    with pytest.raises(NotCirculationError):
        run(make_state(2, [(0, 1)], [F(1, 2)]), RandomizedPolicy(0), algo)


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_empty_graph(algo):
    out, stats = run(make_state(0, [], []), RandomizedPolicy(0), algo)
    assert out.m == 0 and stats.cycles_canceled == 0


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_self_loop_and_parallel_pair(algo):
    s = make_state(2, [(0, 0), (0, 1), (1, 0)], [F(1, 3), F(5, 4), F(5, 4)], [2, 1, 1])
    out, stats = run(s, CostedPolicy(), algo)
    # loop cost +2 forward, so it drops; the 2-cycle costs +2 forward, so it drops too
    assert out.f1 == [0, 1, 1]
    assert stats.cycles_canceled == 2


def test_unknown_algorithm():
    with pytest.raises(InvalidParameterError):
        run(triangle(), CostedPolicy(), "simplex")


def shared_edge_instance():
    # A..H = 0..7.  One cycle H->E->D->C->B->F->G->H of weight 7/10 and one
    # cycle C->B->A->C of weight 11/10 that shares C->B, so C->B carries 18/10.
    edges = [(1, 0), (2, 1), (3, 2), (4, 3), (1, 5), (5, 6), (6, 7), (7, 4), (0, 2)]
    flows = [F(11, 10), F(18, 10)] + [F(7, 10)] * 6 + [F(11, 10)]
    return make_state(8, edges, flows)


def test_mlogn_cuts_the_bottleneck_edge():
    s = shared_edge_instance()
    pol = ScriptedPolicy()
    out, stats = run(s, pol, "mlogn")
    # inserting (H,E): forward 2/10 limited by C->B, backward 7/10
    assert pol.trace[0] == (F(7, 9), True)
    assert out.f1[1] == 2
    assert check_all(s, out).ok


def hub_instance():
    # C H F L K X = 0..5; the tree on C..K is F-C-H with L and K below H, and
    # X has one edge to each of F, L, K and H.
    edges = [(0, 1), (2, 0), (3, 1), (4, 1), (5, 2), (5, 3), (5, 4), (1, 5)]
    flows = [F(2, 10), F(2, 10), F(3, 10), F(4, 10), F(2, 10), F(3, 10), F(4, 10), F(9, 10)]
    return make_state(6, edges, flows)


def test_n2_settles_a_hub_in_one_batch():
    s = hub_instance()
    pol = ScriptedPolicy()
    out, stats = run(s, pol, "n2")
    # two cycles at H (L against K, then K's survivor against H's own edge),
    # then one at F joining H's survivor with F's own edge
    assert [p for p, _ in pol.trace] == [F(4, 7), F(1, 8), F(1, 5)]
    assert out.f1 == [1, 1, 0, 0, 1, 0, 0, 1]
    assert stats.cycles_canceled == 3


def test_update_flow_chain_against_explicit_pushes():
    # chain 0-1-2 rooted at 0 plus a closing edge 2->0 outside the forest
    s = make_state(3, [(0, 1), (1, 2), (2, 0)], [F(1, 4)] * 3)
    ws = Workspace(s.copy(), RandomizedPolicy(0))
    forest = [{0: 1}, {0: 0, 1: 2}, {1: 1}]
    order, children, parent_edge = [0, 1, 2], {0: [1], 1: [2], 2: []}, {0: None, 1: 0, 2: 1}
    unit = ws.scale // 4  # one quarter
    total = update_flow(ws, forest, order, children, parent_edge, {2: -unit, 0: unit})
    assert total == 0
    got = ws.finish().f1
    # explicit oracle: push 1/4 down the chain 0 -> 1 -> 2
    want = list(s.f1)
    want[0] += F(1, 4)
    want[1] += F(1, 4)
    assert got == want
    assert forest == [{0: 1}, {0: 0, 1: 2}, {1: 1}]


def test_update_flow_drops_edges_that_turn_integral():
    s = make_state(3, [(0, 1), (1, 2), (2, 0)], [F(1, 2)] * 3)
    ws = Workspace(s.copy(), RandomizedPolicy(0))
    forest = [{0: 1}, {0: 0, 1: 2}, {1: 1}]
    total = update_flow(ws, forest, [0, 1, 2], {0: [1], 1: [2], 2: []},
                        {0: None, 1: 0, 2: 1}, {2: -1, 0: 1})
    assert total == 0
    assert forest == [{}, {}, {}]
    assert ws.finish().f1[:2] == [1, 1]


def bottleneck_split_instance():
    # a-b-c-d processed first; x has edges to a and d; z closes a second cycle on b->c
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5), (5, 1)]
    # b->c carries 2/10 + 6/10, so it has the least forward room on the x cycle
    flows = [F(2, 10), F(8, 10), F(2, 10), F(2, 10), F(2, 10), F(6, 10), F(6, 10)]
    return make_state(6, edges, flows, [0, -1, 0, 0, 0, 0, 0])


@pytest.mark.parametrize("k", [1, 2, 6])
def test_mlogn2m_split_leaves_two_clusters(k):
    s = bottleneck_split_instance()
    seen = {}

    def watch(x, forest):
        if x == 4:
            seen["roots"] = (forest.primary_root(0), forest.primary_root(3))
            seen["frac"] = [e for e in (3, 4) if forest.ws.fractional(e)]

    # the cost on b->c sends the x cycle along a->b->c->d->x
    out, stats = round_mlogn2m(s, CostedPolicy(), k=k, observer=watch)
    # b->c was the bottleneck and became integral: the tree fell apart into
    # {a, b} and {c, d}, each keeping one fractional edge to x
    assert seen["roots"][0] != seen["roots"][1]
    assert seen["frac"] == [3, 4]
    assert check_all(s, out, "costed").ok
    assert stats.audit.violations == 0


def test_mlogn2m_k_extremes_and_validation():
    s = hub_instance()
    for k in (1, s.n):
        out, stats = run(s, RandomizedPolicy(1), "mlogn2m", k=k)
        assert check_all(s, out).ok
        assert stats.k == k
    _, stats = run(s, RandomizedPolicy(1), "mlogn2m", k=1)
    assert stats.max_cluster_size <= 2
    with pytest.raises(InvalidParameterError):
        run(s, RandomizedPolicy(1), "mlogn2m", k=0)


def test_default_k_is_clamped():
    assert default_k(10, 100) == 1
    assert default_k(10, 20) == 5
    assert default_k(10, 5) == 10
    assert default_k(0, 0) == 1


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_same_seed_same_output(algo):
    s = hub_instance()
    a, _ = run(s, RandomizedPolicy(42), algo)
    b, _ = run(s, RandomizedPolicy(42), algo)
    assert a.f1 == b.f1


def test_all_algorithms_on_one_costed_instance():
    s = bottleneck_split_instance()
    s.cost = [CostValue(0, F(c)) for c in (3, -1, 2, 0, -4, 1, 1)]
    for algo in ALGORITHMS:
        out, _ = run(s, CostedPolicy(), algo)
        rep = check_all(s, out, "costed")
        assert rep.ok, (algo, rep.violations)


@settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(circulations(), st.sampled_from(ALGORITHMS), st.integers(0, 2**16),
       st.one_of(st.none(), st.integers(0, 99)))
def test_any_circulation_rounds_validly(state, algo, seed, order_seed):
    costed = state.has_costs
    pol = CostedPolicy() if costed else RandomizedPolicy(seed)
    k = None if order_seed is None else 1 + order_seed % 4
    before = len(fractional_edges(state))
    if algo == "naive":
        out, stats = run(state, pol, algo)
    else:
        out, stats = run(state, pol, algo, k=k, order_seed=order_seed)
    rep = check_all(state, out, "costed" if costed else None)
    assert rep.ok, rep.violations
    assert stats.cycles_canceled <= before
    if algo == "mlogn2m":
        assert stats.audit.violations == 0


@settings(max_examples=60, deadline=None)
@given(circulations(costed=True))
def test_costed_never_worse_than_naive_bound(state):
    base = total_cost(state)
    for algo in ALGORITHMS:
        out, _ = run(state, CostedPolicy(), algo)
        assert total_cost(out) <= base
