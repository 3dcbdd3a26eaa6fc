from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..core import CostValue, FlowState, net_flows
from ..errors import InvariantError, MissingCostsError, NotCirculationError


@dataclass
class ClusterAudit:
    """Cluster-shape checks taken after every merge walk."""

    steps: int = 0
    size_violations: int = 0
    adjacency_violations: int = 0
    max_internal: int = 0
    max_internal_ratio: float = 0.0  # internal clusters per n/k

    @property
    def violations(self) -> int:
        return self.size_violations + self.adjacency_violations


@dataclass
class RunStats:
    cycles_canceled: int = 0
    tree_ops: int = 0
    merges: int = 0
    clusters_touched: int = 0
    max_cluster_size: int = 0
    k: Optional[int] = None
    audit: Optional[ClusterAudit] = None


class Workspace:
    """Integer view of a flow state used by the rounders.

    Every flow is held as ``value * scale`` where ``scale`` is the lcm of the
    working-flow denominators, so pushes and availability tests are exact int
    arithmetic.  Costs are packed into a single int ``units * base + finite``
    with ``base`` larger than twice any finite sum over distinct edges, which
    keeps the lexicographic order and lets :meth:`unpack_cost` recover both
    parts.  Results are written back with :meth:`finish`.
    """

    def __init__(self, state: FlowState, policy):
        self.state = state
        self.policy = policy
        g = state.graph
        self.n = g.node_count
        self.m = g.edge_count
        self.tails = g.tails
        self.heads = g.heads
        scale = 1
        for x in state.f1:
            scale = math.lcm(scale, x.denominator)
        self.scale = scale
        self.flow = [x.numerator * (scale // x.denominator) for x in state.f1]
        self.hi = [math.ceil(x) * scale for x in state.f0]
        self.lo = [math.floor(x) * scale for x in state.f0]
        self.costed = bool(getattr(policy, "uses_costs", False))
        self.cost = None
        if self.costed:
            if not state.has_costs:
                raise MissingCostsError("missing costs: costed rounding needs edge costs")
            cscale = 1
            for c in state.cost:
                cscale = math.lcm(cscale, Fraction(c.finite).denominator,
                                  Fraction(c.infinite_units).denominator)
            fin = [int(Fraction(c.finite) * cscale) for c in state.cost]
            units = [int(Fraction(c.infinite_units) * cscale) for c in state.cost]
            half = 1 + sum(abs(x) for x in fin)
            self.cost_scale = cscale
            self.cost_half = half
            self.cost_base = 2 * half + 1
            self.cost = [u * self.cost_base + f for u, f in zip(units, fin)]

    # -- flow access -------------------------------------------------------

    def fractional(self, e: int) -> bool:
        return self.flow[e] % self.scale != 0

    def avail(self, e: int, from_node: int) -> int:
        """Availability of ``e`` when traversed starting at ``from_node``."""
        if from_node == self.tails[e]:
            return self.hi[e] - self.flow[e]
        return self.flow[e] - self.lo[e]

    def edge_cost(self, e: int, from_node: int):
        if self.cost is None:
            return None
        return self.cost[e] if from_node == self.tails[e] else -self.cost[e]

    def push(self, e: int, from_node: int, amount: int) -> None:
        if from_node == self.tails[e]:
            self.flow[e] += amount
        else:
            self.flow[e] -= amount

    def set_from_avail(self, e: int, from_node: int, avail_from: int) -> None:
        """Store the flow implied by the availability of ``e`` leaving ``from_node``."""
        if from_node == self.tails[e]:
            self.flow[e] = self.hi[e] - avail_from
        else:
            self.flow[e] = self.lo[e] + avail_from

    def unpack_cost(self, packed: int) -> CostValue:
        units, rest = divmod(packed + self.cost_half, self.cost_base)
        fin = rest - self.cost_half
        return CostValue(Fraction(units, self.cost_scale), Fraction(fin, self.cost_scale))

    # -- decisions ---------------------------------------------------------

    def decide(self, cost_forward, a: int, b: int) -> bool:
        """Ask the policy; returns True to push ``a`` forward, False to push ``b`` back."""
        if a <= 0 or b <= 0:
            raise InvariantError(f"fractional cycle with availabilities {a}, {b}")
        cost = None
        if self.costed:
            cost = self.unpack_cost(cost_forward)
        return self.policy.decide(cost, a, b).forward

    def cancel_self_loops(self, stats: RunStats) -> None:
        for e in range(self.m):
            u = self.tails[e]
            if u == self.heads[e] and self.fractional(e):
                a = self.avail(e, u)
                b = self.flow[e] - self.lo[e]
                if self.decide(self.edge_cost(e, u), a, b):
                    self.flow[e] += a
                else:
                    self.flow[e] -= b
                stats.cycles_canceled += 1

    def finish(self) -> FlowState:
        s = self.scale
        self.state.f1 = [Fraction(x, s) for x in self.flow]
        return self.state


def prepare(state: FlowState, policy) -> tuple[FlowState, Workspace, RunStats]:
    """Copy ``state``, check it is a circulation and cancel fractional self-loops."""
    if not all(x == 0 for x in net_flows(state, "working")):
        raise NotCirculationError("input is not a circulation: some node has nonzero net flow")
    work = state.copy()
    ws = Workspace(work, policy)
    stats = RunStats()
    ws.cancel_self_loops(stats)
    return work, ws, stats


def edge_order(m: int, order_seed: Optional[int]) -> list[int]:
    order = list(range(m))
    if order_seed is not None:
        random.Random(order_seed).shuffle(order)
    return order


def node_order(n: int, order_seed: Optional[int]) -> list[int]:
    order = list(range(n))
    if order_seed is not None:
        random.Random(order_seed).shuffle(order)
    return order
