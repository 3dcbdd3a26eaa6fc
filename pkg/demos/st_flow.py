"""
Rounding an s-t flow
====================

A flow of fractional value becomes a circulation by adding a sink-to-source
edge, and comes back out once rounded.
"""

import math

from flowround.algorithms import run
from flowround.core import total_cost
from flowround.generate import generate_st_flow
from flowround.policy import (
    COSTED,
    RANDOMIZED,
    CostedPolicy,
    RandomizedPolicy,
    circulation_from_flow,
    flow_from_circulation,
)

inst = generate_st_flow(10, 24, paths=3, cycles=4, seed=5, costed=True)
s, t = inst.source_sink

# the added edge costs minus infinity per unit, so costed rounding keeps as much value as it can
circ = circulation_from_flow(inst.state, s, t, COSTED)
value = circ.f0[-1]
out, _ = run(circ, CostedPolicy(), "mlogn2m")
_, _, _, rounded = flow_from_circulation(out)
print(f"value {value} ({float(value):.3f}) -> {rounded}, floor {math.floor(value)}")
print("cost", total_cost(circ), "->", total_cost(out))

# randomized rounding lands on the floor or the ceiling
seen = {}
for seed in range(500):
    circ = circulation_from_flow(inst.state, s, t, RANDOMIZED)
    out, _ = run(circ, RandomizedPolicy(seed), "n2")
    v = int(flow_from_circulation(out)[3])
    seen[v] = seen.get(v, 0) + 1
print("randomized values:", dict(sorted(seen.items())))
