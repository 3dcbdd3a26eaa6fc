"""
Expected flow is preserved
==========================

Enumerate every outcome of the random choices, then compare with sampling.
"""

from flowround.core import fractional_edges
from flowround.generate import generate_circulation
from flowround.verify import expectation_oracle, statistical_expectation

inst = generate_circulation(6, 9, 3, seed=4)
state = inst.state
print("fractional edges:", sorted(fractional_edges(state)))

# exact: each leaf is one sequence of directions, weighted by its probability
for algo in ("naive", "mlogn", "n2", "mlogn2m"):
    rep = expectation_oracle(state, algo)
    print(f"{algo:8s} outcomes={rep.branch_count:3d} total probability={rep.total_probability}"
          f" exact={not rep.failing}")

# sampled: means land within 5 / (2 sqrt(trials)) of the input
rep = statistical_expectation(state, "mlogn2m", trials=2000, seed=1)
for e in sorted(rep.values):
    print(f"edge {e}: f0={float(rep.target[e]):+.4f} mean={float(rep.values[e]):+.4f}")
print("within tolerance", rep.tolerance, ":", rep.passed)
