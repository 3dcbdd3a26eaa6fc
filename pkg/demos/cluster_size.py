"""
Choosing the cluster size
=========================

Tree operations per edge for several cluster sizes on a dense instance.
"""

from flowround.algorithms import default_k, run
from flowround.generate import generate_circulation
from flowround.policy import RandomizedPolicy

n, m = 120, 1800
state = generate_circulation(n, m, m - n + 1, seed=2).state
print("default k =", default_k(n, m))

for k in (1, 2, default_k(n, m), 32, n):
    _, stats = run(state, RandomizedPolicy(0), "mlogn2m", k=k)
    print(f"k={k:4d} tree_ops/m={stats.tree_ops / m:6.2f} merges={stats.merges:5d}"
          f" largest cluster={stats.max_cluster_size:4d} audit violations={stats.audit.violations}")

# for comparison, the single-forest rounder
_, stats = run(state, RandomizedPolicy(0), "mlogn")
print(f"one forest: tree_ops/m={stats.tree_ops / m:6.2f}")
