from fractions import Fraction

import pytest
from hypothesis import strategies as st

from flowround.core import CostValue, FlowState, Graph


def make_state(n, edges, flows, costs=None):
    g = Graph.from_edges(n, edges)
    return FlowState.from_flows(g, [Fraction(x) for x in flows], costs)


def triangle(costs=(1, 1, 1)):
    half = Fraction(1, 2)
    return make_state(3, [(0, 1), (1, 2), (2, 0)], [half] * 3,
                      None if costs is None else [CostValue.of(c) for c in costs])


@pytest.fixture
def tri():
    return triangle()


fractions = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 12))


@st.composite
def circulations(draw, max_nodes=7, max_cycles=5, costed=None, self_loops=True):
    """Random circulations built as sums of weighted closed walks on a random multigraph."""
    n = draw(st.integers(2, max_nodes))
    m = draw(st.integers(1, 3 * n))
    edges = []
    for _ in range(m):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 1))
        if u == v and not self_loops:
            v = (u + 1) % n
        edges.append((u, v))
    adj = [[] for _ in range(n)]
    for e, (u, v) in enumerate(edges):
        adj[u].append((e, v, 1))
        adj[v].append((e, u, -1))
    flows = [Fraction(0)] * m
    for _ in range(draw(st.integers(0, max_cycles))):
        start = draw(st.sampled_from([v for v in range(n) if adj[v]]))
        weight = Fraction(draw(st.integers(1, 30)), draw(st.integers(1, 10)))
        cur, seen, walk = start, {start: 0}, []
        while True:
            e, w, sign = adj[cur][draw(st.integers(0, len(adj[cur]) - 1))]
            walk.append((e, sign))
            if w in seen:
                for e2, s2 in walk[seen[w]:]:
                    flows[e2] += s2 * weight
                break
            seen[w] = len(walk)
            cur = w
    if costed is None:
        costed = draw(st.booleans())
    costs = None
    if costed:
        costs = [CostValue(0, draw(fractions)) for _ in range(m)]
    return make_state(n, edges, flows, costs)
