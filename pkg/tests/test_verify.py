from fractions import Fraction

import pytest

from conftest import make_state, triangle
from flowround.core import CostValue
from flowround.errors import BranchBudgetExceeded, GraphMismatchError, InvalidParameterError
from flowround.linkcut import DynTree
from flowround.verify import (
    check_all,
    expectation_oracle,
    shadow_tree_suite,
    statistical_expectation,
    trial_seed,
)

F = Fraction


def test_valid_rounding_passes():
    s = triangle()
    r = s.copy()
    r.f1 = [F(1)] * 3
    rep = check_all(s, r)
    assert rep.ok and rep.cost_ok is None
    assert rep.lines()[-1] == "cost_ok: n/a"


def test_one_edge_pushed_past_ceiling():
    s = triangle()
    r = s.copy()
    r.f1 = [F(2), F(1), F(1)]
    rep = check_all(s, r)
    assert rep.integral
    assert not rep.in_range and not rep.conserved
    kinds = {(v.kind, v.index) for v in rep.violations}
    assert ("edge", 0) in kinds and ("node", 0) in kinds and ("node", 1) in kinds


def test_fractional_output_flagged():
    s = triangle()
    rep = check_all(s, s.copy())
    assert not rep.integral and rep.in_range and rep.conserved


def test_cost_regression_flagged():
    s = triangle()
    r = s.copy()
    r.f1 = [F(1)] * 3
    rep = check_all(s, r, "costed")
    assert rep.cost_ok is False and not rep.ok
    r.f1 = [F(0)] * 3
    assert check_all(s, r, "costed").ok


def test_graph_mismatch():
    other = make_state(3, [(0, 1), (1, 2), (0, 2)], [0, 0, 0])
    with pytest.raises(GraphMismatchError):
        check_all(triangle(), other)


def two_triangles():
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
    return make_state(6, edges, [F(1, 2)] * 3 + [F(1, 3)] * 3)


@pytest.mark.parametrize("algo", ["naive", "mlogn", "n2", "mlogn2m"])
def test_oracle_two_independent_cycles(algo):
    rep = expectation_oracle(two_triangles(), algo)
    assert rep.branch_count == 4
    assert rep.total_probability == 1
    assert rep.passed
    assert rep.values[3] == F(1, 3)


def test_oracle_integral_input_has_one_leaf():
    rep = expectation_oracle(make_state(2, [(0, 1), (1, 0)], [1, 1]))
    assert rep.branch_count == 1 and rep.passed


def test_oracle_budget():
    with pytest.raises(BranchBudgetExceeded):
        expectation_oracle(two_triangles(), max_branches=3)


def test_oracle_with_costs_present_still_randomizes():
    s = triangle()
    rep = expectation_oracle(s, "n2")
    assert rep.values == {0: F(1, 2), 1: F(1, 2), 2: F(1, 2)}


def test_trial_seeds_are_stable_and_distinct():
    assert trial_seed(0, 0) == trial_seed(0, 0)
    assert len({trial_seed(0, i) for i in range(1000)}) == 1000
    assert trial_seed(1, 0) != trial_seed(0, 0)


def test_statistical_mean_near_target():
    rep = statistical_expectation(two_triangles(), "mlogn2m", trials=1600, seed=5)
    assert rep.tolerance == pytest.approx(5 / 80)
    assert rep.passed, rep.failing


def test_statistical_integral_input_is_exact():
    s = make_state(2, [(0, 1), (1, 0)], [3, 3])
    rep = statistical_expectation(s, trials=10)
    assert rep.values == {0: 3, 1: 3}


def test_statistical_needs_trials():
    with pytest.raises(InvalidParameterError):
        statistical_expectation(triangle(), trials=0)


def test_shadow_suite_passes():
    res = shadow_tree_suite(5000, seed=3)
    assert res.passed and res.ops_run == 5000


class OffByOneTie(DynTree):
    """Reports the minimum a hair too large, as a broken aggregate would."""

    def path_min(self, u, v):
        eid, amount = super().path_min(u, v)
        return eid, amount + F(1, 1000)


def test_shadow_suite_catches_injected_fault():
    res = shadow_tree_suite(5000, seed=3, tree_factory=OffByOneTie)
    assert not res.passed
    assert "path_min" in res.divergence


def test_report_lines_name_violations():
    s = triangle()
    r = s.copy()
    r.f1 = [F(2), F(1), F(1)]
    lines = check_all(s, r).lines()
    assert lines[:2] == ["integral: True", "in_range: False"]
    assert any(line.startswith("violation: edge 0") for line in lines)
    assert CostValue.zero() == CostValue(0, 0)
