"""Random fractional circulations and s-t flows, built by superposing cycles and paths."""

from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from typing import Optional

from .core import CostValue, FlowState, Graph
from .errors import InvalidParameterError
from .formats import InstanceFile

MAX_DENOMINATOR = 1000


def random_graph(rng: random.Random, n: int, m: int, self_loops: float = 0.0) -> list[tuple[int, int]]:
    """A connected multigraph: a random spanning tree, then further edges.

    Extra edges go to unused node pairs while any remain, then to parallel
    copies.  Orientation is random.
    """
    order = list(range(n))
    rng.shuffle(order)
    pairs = []
    for i in range(1, n):
        pairs.append((order[rng.randrange(i)], order[i]))
    used = {frozenset(p) for p in pairs}
    free = n * (n - 1) // 2 - len(used)
    while len(pairs) < m:
        if self_loops and rng.random() < self_loops:
            v = rng.randrange(n)
            pairs.append((v, v))
            continue
        u, v = rng.sample(range(n), 2)
        if free > 0 and frozenset((u, v)) in used:
            continue
        if frozenset((u, v)) not in used:
            used.add(frozenset((u, v)))
            free -= 1
        pairs.append((u, v))
    return [(u, v) if rng.random() < 0.5 else (v, u) for u, v in pairs]


def random_weight(rng: random.Random, integral_part: int = 2) -> Fraction:
    q = rng.randint(2, MAX_DENOMINATOR)
    p = rng.randrange(1, q)
    return rng.randint(0, integral_part) + Fraction(p, q)


class _Spanning:
    """BFS spanning tree over the undirected multigraph, used to close cycles."""

    def __init__(self, rng: random.Random, n: int, edges: list[tuple[int, int]]):
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for e, (u, v) in enumerate(edges):
            if u != v:
                adj[u].append((e, v))
                adj[v].append((e, u))
        for lst in adj:
            rng.shuffle(lst)
        root = rng.randrange(n)
        self.up: list[Optional[tuple[int, int]]] = [None] * n
        self.depth = [0] * n
        seen = [False] * n
        seen[root] = True
        queue = deque([root])
        tree_edges = set()
        while queue:
            u = queue.popleft()
            for e, v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    self.up[v] = (e, u)
                    self.depth[v] = self.depth[u] + 1
                    tree_edges.add(e)
                    queue.append(v)
        self.non_tree = [e for e in range(len(edges)) if e not in tree_edges]

    def path(self, a: int, b: int) -> list[tuple[int, int]]:
        """Steps ``(edge, from_node)`` along the tree from ``a`` to ``b``."""
        head, tail = [], []
        while a != b:
            if self.depth[a] >= self.depth[b]:
                e, p = self.up[a]
                head.append((e, a))
                a = p
            else:
                e, p = self.up[b]
                tail.append((e, p))
                b = p
        return head + tail[::-1]


def _push(flows: list, edges: list, steps, amount) -> None:
    for e, frm in steps:
        flows[e] += amount if frm == edges[e][0] else -amount


def _costs(rng: random.Random, m: int) -> list[CostValue]:
    return [CostValue(0, Fraction(rng.randint(-10, 10))) for _ in range(m)]


def generate_circulation(n: int, m: int, cycles: int, seed: int = 0, costed: bool = False,
                         self_loops: float = 0.0) -> InstanceFile:
    """Superpose ``cycles`` random simple cycles with fractional weights."""
    if n < 3 or m < n:
        raise InvalidParameterError("need m >= n >= 3 so that cycles exist")
    if cycles < 0:
        raise InvalidParameterError("cycle count must be non-negative")
    rng = random.Random(seed)
    edges = random_graph(rng, n, m, self_loops)
    flows = [Fraction(0)] * m
    # a handful of spanning trees gives varied cycles without O(m) work per cycle
    refresh = max(8, cycles // 8)
    span = None
    for i in range(cycles):
        if span is None or i % refresh == 0:
            span = _Spanning(rng, n, edges)
        pick = rng.choice(span.non_tree)
        a, b = edges[pick]
        if a == b:
            steps = [(pick, a)]
        else:
            steps = [(pick, a)] + span.path(b, a)
        weight = random_weight(rng)
        _push(flows, edges, steps, weight if rng.random() < 0.5 else -weight)
    graph = Graph.from_edges(n, edges)
    state = FlowState.from_flows(graph, flows, _costs(rng, m) if costed else None)
    return InstanceFile(state, costed)


def generate_st_flow(n: int, m: int, paths: int, cycles: int, seed: int = 0,
                     costed: bool = False) -> InstanceFile:
    """A fractional s-t flow: random s-t paths plus circulating cycles.

    The last path weight is redrawn until the flow value is fractional.
    """
    if n < 3 or m < n:
        raise InvalidParameterError("need m >= n >= 3")
    if paths < 1:
        raise InvalidParameterError("need at least one s-t path")
    base = generate_circulation(n, m, cycles, seed, costed)
    rng = random.Random(f"{seed}:paths")
    g = base.state.graph
    edges = list(zip(g.tails, g.heads))
    flows = list(base.state.f1)
    s, t = rng.sample(range(n), 2)
    value = Fraction(0)
    for i in range(paths):
        span = _Spanning(rng, n, edges)
        weight = random_weight(rng, 1)
        while i == paths - 1 and (value + weight).denominator == 1:
            weight = random_weight(rng, 1)
        _push(flows, edges, span.path(s, t), weight)
        value += weight
    state = FlowState.from_flows(g, flows, base.state.cost)
    return InstanceFile(state, costed, (s, t))
