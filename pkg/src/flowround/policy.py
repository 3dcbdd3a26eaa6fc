"""Direction choice when canceling a cycle, and flow <-> circulation reductions.

A policy is asked ``decide(cost_forward, a, b)`` for each fractional cycle,
where ``a`` and ``b`` are the cycle's forward and backward availabilities and
``cost_forward`` the per-unit cost of pushing forward (``None`` when costs are
not tracked).  It answers with a :class:`CancelDecision`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .core import CostValue, FlowState, net_flows
from .errors import (
    DegenerateCycleError,
    InvalidParameterError,
    MissingCostsError,
    NotAFlowError,
)

COSTED = "costed"
RANDOMIZED = "randomized"
MODES = (COSTED, RANDOMIZED)

RNG_ALGORITHM = "mt19937-randbelow-v1"


@dataclass(frozen=True)
class CancelDecision:
    forward: bool
    amount: Any


class RngState:
    """Seeded generator drawing exact uniform integers below any bound.

    Backed by the stdlib Mersenne Twister; ``below(d)`` rejects on a
    power-of-two range, so there is no modulo or float bias.
    """

    def __init__(self, seed: int = 0):
        if not 0 <= seed < 2**64:
            raise InvalidParameterError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self._random = random.Random(seed)

    def below(self, d: int) -> int:
        if d <= 0:
            raise InvalidParameterError("upper bound must be positive")
        return self._random.randrange(d)


def choose_costed(cycle_cost_forward: CostValue) -> bool:
    """Forward iff pushing forward does not raise the cost; zero-cost ties go forward."""
    return CostValue.of(cycle_cost_forward) <= CostValue.zero()


def forward_probability(a, b) -> Fraction:
    """Probability ``b / (a + b)`` of canceling forward, which keeps every edge's mean flow."""
    if a < 0 or b < 0 or a + b == 0:
        raise DegenerateCycleError(f"cycle availabilities must be positive, got {a} and {b}")
    return Fraction(b) / (Fraction(a) + b)


def bernoulli(p, rng: RngState) -> bool:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InvalidParameterError(f"probability {p} outside [0, 1]")
    return rng.below(p.denominator) < p.numerator


class CostedPolicy:
    mode = COSTED
    uses_costs = True

    def decide(self, cost_forward: Optional[CostValue], a, b) -> CancelDecision:
        if cost_forward is None:
            raise MissingCostsError("missing costs: costed rounding needs edge costs")
        forward = choose_costed(cost_forward)
        return CancelDecision(forward, a if forward else b)


class RandomizedPolicy:
    mode = RANDOMIZED
    uses_costs = False

    def __init__(self, seed: int = 0):
        self.rng = RngState(seed)

    def decide(self, cost_forward, a, b) -> CancelDecision:
        forward = bernoulli(forward_probability(a, b), self.rng)
        return CancelDecision(forward, a if forward else b)


class ScriptedPolicy:
    """Replays a fixed prefix of directions, then always goes forward.

    Records the forward probability and the direction taken at every
    decision, which lets a caller enumerate every outcome of a randomized run.
    """

    mode = RANDOMIZED
    uses_costs = False

    def __init__(self, prefix=()):
        self.prefix = list(prefix)
        self.trace: list[tuple[Fraction, bool]] = []

    def decide(self, cost_forward, a, b) -> CancelDecision:
        p = forward_probability(a, b)
        i = len(self.trace)
        forward = self.prefix[i] if i < len(self.prefix) else True
        self.trace.append((p, forward))
        return CancelDecision(forward, a if forward else b)


def make_policy(mode: str, seed: int = 0):
    if mode == COSTED:
        return CostedPolicy()
    if mode == RANDOMIZED:
        return RandomizedPolicy(seed)
    raise InvalidParameterError(f"unknown mode {mode!r}; expected one of {MODES}")


def circulation_from_flow(state: FlowState, s: int, t: int, mode: str) -> FlowState:
    """Close an s-t flow into a circulation with a protected edge ``t -> s``.

    In costed mode the new edge costs ``-inf`` per unit, so no cancellation
    ever lowers the s-t value.
    """
    if mode not in MODES:
        raise InvalidParameterError(f"unknown mode {mode!r}")
    if s == t:
        raise NotAFlowError("source and sink must differ")
    if mode == COSTED and not state.has_costs:
        raise MissingCostsError("missing costs: costed rounding needs edge costs")
    for which in ("original", "working"):
        balance = net_flows(state, which)
        value = balance[t]
        if value < 0 or balance[s] != -value or any(
                x != 0 for v, x in enumerate(balance) if v not in (s, t)):
            raise NotAFlowError(f"{which} flow is not an s-t flow from {s} to {t}")
    f_orig = net_flows(state, "original")[t]
    f_work = net_flows(state, "working")[t]
    graph = state.graph.with_edge(t, s)
    cost = None
    if state.cost is not None:
        extra = CostValue(-1, Fraction(0)) if mode == COSTED else CostValue.zero()
        cost = list(state.cost) + [extra]
    return FlowState(graph, state.f0 + [f_orig], state.f1 + [f_work], cost,
                     state.protected + [True])


def flow_from_circulation(state: FlowState) -> tuple[FlowState, int, int, Fraction]:
    """Drop the protected edge again.

    Returns ``(flow_state, s, t, value)`` with ``value`` the working s-t flow.
    """
    marked = [e for e, p in enumerate(state.protected) if p]
    if len(marked) != 1:
        raise NotAFlowError(f"expected exactly one protected edge, found {len(marked)}")
    (pe,) = marked
    g = state.graph
    t, s = g.tails[pe], g.heads[pe]
    keep = [e for e in range(g.edge_count) if e != pe]
    graph = type(g).from_edges(g.node_count, [(g.tails[e], g.heads[e]) for e in keep])
    cost = None if state.cost is None else [state.cost[e] for e in keep]
    out = FlowState(graph, [state.f0[e] for e in keep], [state.f1[e] for e in keep], cost,
                    [False] * len(keep))
    return out, s, t, state.f1[pe]
