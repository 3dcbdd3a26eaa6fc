"""Exact numeric type, directed multigraph and flow state.

All flow values, costs, availabilities and probabilities are exact rationals
(:class:`fractions.Fraction`).  Flow is stored once per edge in the tail->head
orientation; the reverse orientation is its negation.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import MissingCostsError

Rational = Fraction
Number = Union[int, Fraction]

ORIGINAL = "original"
WORKING = "working"


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q``, an integer or a decimal string exactly (``"1.7"`` -> 17/10)."""
    return Fraction(text.strip())


def format_rational(x: Number) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_integral(x: Number) -> bool:
    return Fraction(x).denominator == 1


@dataclass(frozen=True, order=True)
class CostValue:
    """Cost with an infinite part: ``infinite_units * INF + finite``.

    ``INF`` is a positive infinite weight, so an edge costing ``-inf`` per unit
    has ``infinite_units == -1``.  Ordering is lexicographic on
    ``(infinite_units, finite)``.
    """

    infinite_units: Number = 0
    finite: Number = Fraction(0)

    @classmethod
    def zero(cls) -> CostValue:
        return cls(0, Fraction(0))

    @classmethod
    def of(cls, value: Union[Number, CostValue]) -> CostValue:
        if isinstance(value, CostValue):
            return value
        return cls(0, Fraction(value))

    def __add__(self, other: CostValue) -> CostValue:
        if not isinstance(other, CostValue):
            return NotImplemented
        return CostValue(
            self.infinite_units + other.infinite_units, Fraction(self.finite) + other.finite
        )

    def __sub__(self, other: CostValue) -> CostValue:
        return self + (-other)

    def __neg__(self) -> CostValue:
        return CostValue(-self.infinite_units, -Fraction(self.finite))

    def scale(self, factor: Number) -> CostValue:
        return CostValue(self.infinite_units * factor, Fraction(self.finite) * factor)

    def sign(self) -> int:
        if self.infinite_units != 0:
            return 1 if self.infinite_units > 0 else -1
        return (self.finite > 0) - (self.finite < 0)

    def __str__(self) -> str:
        fin = format_rational(self.finite)
        if self.infinite_units == 0:
            return fin
        text = f"{format_rational(self.infinite_units)}*inf"
        if self.finite > 0:
            text += f"+{fin}"
        elif self.finite < 0:
            text += fin
        return text


class DirectedEdgeRef(NamedTuple):
    edge_id: int
    forward: bool = True


@dataclass(frozen=True)
class Graph:
    """Directed multigraph on nodes ``0..node_count-1``.

    Edge ids are the positions in ``tails``/``heads``.  Parallel edges and
    self-loops are allowed.
    """

    node_count: int
    tails: tuple = ()
    heads: tuple = ()

    def __post_init__(self):
        if len(self.tails) != len(self.heads):
            raise ValueError("tails and heads differ in length")
        for u, v in zip(self.tails, self.heads):
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) outside node range 0..{self.node_count - 1}")

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> Graph:
        edges = list(edges)
        return cls(node_count, tuple(u for u, _ in edges), tuple(v for _, v in edges))

    @property
    def edge_count(self) -> int:
        return len(self.tails)

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return [(e, u, v) for e, (u, v) in enumerate(zip(self.tails, self.heads))]

    def endpoints(self, edge_id: int) -> tuple[int, int]:
        return self.tails[edge_id], self.heads[edge_id]

    def other(self, edge_id: int, node: int) -> int:
        u, v = self.tails[edge_id], self.heads[edge_id]
        return v if node == u else u

    def incidence(self) -> list[list[int]]:
        """Edge ids incident to each node (self-loops listed once)."""
        inc: list[list[int]] = [[] for _ in range(self.node_count)]
        for e, (u, v) in enumerate(zip(self.tails, self.heads)):
            inc[u].append(e)
            if v != u:
                inc[v].append(e)
        return inc

    def with_edge(self, tail: int, head: int) -> Graph:
        return Graph(self.node_count, self.tails + (tail,), self.heads + (head,))


@dataclass
class FlowState:
    """A graph with its original flow ``f0`` and working flow ``f1``."""

    graph: Graph
    f0: list
    f1: list
    cost: Optional[list] = None
    protected: list = field(default_factory=list)

    def __post_init__(self):
        m = self.graph.edge_count
        self.f0 = [Fraction(x) for x in self.f0]
        self.f1 = [Fraction(x) for x in self.f1]
        if not self.protected:
            self.protected = [False] * m
        if self.cost is not None:
            self.cost = [None if c is None else CostValue.of(c) for c in self.cost]
        if len(self.f0) != m or len(self.f1) != m or len(self.protected) != m:
            raise ValueError("per-edge arrays must match the edge count")
        if self.cost is not None and len(self.cost) != m:
            raise ValueError("cost array must match the edge count")

    @classmethod
    def from_flows(cls, graph: Graph, flows: Sequence[Number],
                   costs: Optional[Sequence] = None) -> FlowState:
        return cls(graph, list(flows), list(flows), None if costs is None else list(costs))

    @property
    def n(self) -> int:
        return self.graph.node_count

    @property
    def m(self) -> int:
        return self.graph.edge_count

    @property
    def has_costs(self) -> bool:
        return self.cost is not None and all(c is not None for c in self.cost)

    def copy(self) -> FlowState:
        return FlowState(self.graph, list(self.f0), list(self.f1),
                         None if self.cost is None else list(self.cost), list(self.protected))

    def flows(self, which: str = WORKING) -> list:
        if which == ORIGINAL:
            return self.f0
        if which == WORKING:
            return self.f1
        raise ValueError(f"unknown flow selector {which!r}")


def availability(state: FlowState, ref: DirectedEdgeRef) -> Fraction:
    """Flow that can be pushed along the directed edge before it turns integral."""
    e, forward = ref
    if forward:
        return math.ceil(state.f0[e]) - state.f1[e]
    return math.ceil(-state.f0[e]) + state.f1[e]


def net_flow(state: FlowState, v: int, which: str = WORKING) -> Fraction:
    """Inflow minus outflow at ``v``; self-loops cancel out."""
    flows = state.flows(which)
    g = state.graph
    total = Fraction(0)
    for e, (u, w) in enumerate(zip(g.tails, g.heads)):
        if u == w:
            continue
        if w == v:
            total += flows[e]
        if u == v:
            total -= flows[e]
    return total


def _common_scale(values) -> tuple[int, list[int]]:
    """``(d, ints)`` with ``ints[i] == values[i] * d`` for the lcm ``d`` of the denominators."""
    values = list(values)  # ints and Fractions both carry numerator/denominator
    d = math.lcm(1, *(x.denominator for x in values))
    return d, [x.numerator * (d // x.denominator) for x in values]


def net_flows(state: FlowState, which: str = WORKING) -> list:
    d, flows = _common_scale(state.flows(which))
    g = state.graph
    acc = [0] * g.node_count
    for x, u, w in zip(flows, g.tails, g.heads):
        if u != w:
            acc[w] += x
            acc[u] -= x
    return [Fraction(a, d) for a in acc]


def is_circulation(state: FlowState, which: str = WORKING) -> bool:
    return all(x == 0 for x in net_flows(state, which))


def fractional_edges(state: FlowState) -> set:
    return {e for e, x in enumerate(state.f1) if x.denominator != 1}


def total_cost(state: FlowState, which: str = WORKING) -> CostValue:
    """Exact total ``sum(cost(e) * flow(e))``; needs a cost on every edge."""
    if state.cost is None or any(c is None for c in state.cost):
        raise MissingCostsError("missing costs: every edge needs a cost in costed mode")
    fd, flows = _common_scale(state.flows(which))
    ud, units = _common_scale([c.infinite_units for c in state.cost])
    cd, finite = _common_scale([c.finite for c in state.cost])
    return CostValue(Fraction(sum(map(operator.mul, units, flows)), ud * fd),
                     Fraction(sum(map(operator.mul, finite, flows)), cd * fd))
