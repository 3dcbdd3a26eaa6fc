"""
Rounding a fractional circulation
=================================

A triangle carrying half a unit on each edge, rounded both ways.
"""

from fractions import Fraction

from flowround import CostValue, FlowState, Graph, total_cost
from flowround.algorithms import ALGORITHMS, run
from flowround.policy import CostedPolicy, RandomizedPolicy
from flowround.verify import check_all

# three edges 0->1->2->0, each with 1/2 unit and cost 1 per unit
graph = Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
half = Fraction(1, 2)
state = FlowState.from_flows(graph, [half] * 3, [CostValue.of(1)] * 3)
print("fractional flow:", [str(x) for x in state.f1], "cost", total_cost(state))

# costed rounding pushes the cycle the cheap way, so the flow drops to zero
for algo in ALGORITHMS:
    out, stats = run(state, CostedPolicy(), algo)
    print(f"{algo:8s} costed ->", [str(x) for x in out.f1], "cost", total_cost(out))

# randomized rounding flips a fair coin here: all zeros or all ones
outcomes = {}
for seed in range(2000):
    out, _ = run(state, RandomizedPolicy(seed), "mlogn2m")
    key = tuple(int(x) for x in out.f1)
    outcomes[key] = outcomes.get(key, 0) + 1
print("randomized outcomes over 2000 seeds:", outcomes)

# every result is integral, within one unit of the input, and balanced
print(check_all(state, out).lines())
