"""Checks on rounded flows, expectation oracles, and a naive dynamic-forest twin."""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

from .algorithms import run
from .core import FlowState, net_flows, total_cost
from .errors import BranchBudgetExceeded, GraphMismatchError, InvalidParameterError
from .linkcut import DynTree, PathSummary, TreeEdge
from .policy import COSTED, RandomizedPolicy, ScriptedPolicy

SEED_DERIVATION = "blake2b-8:{seed}:{index}"


class Violation(NamedTuple):
    kind: str  # "edge", "node" or "cost"
    index: Optional[int]
    detail: str


@dataclass
class ValidityReport:
    integral: bool = True
    in_range: bool = True
    conserved: bool = True
    cost_ok: Optional[bool] = None
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        out = [f"integral: {self.integral}", f"in_range: {self.in_range}",
               f"conserved: {self.conserved}",
               f"cost_ok: {'n/a' if self.cost_ok is None else self.cost_ok}"]
        for v in self.violations:
            where = v.kind if v.index is None else f"{v.kind} {v.index}"
            out.append(f"violation: {where}: {v.detail}")
        return out


def check_all(original: FlowState, rounded: FlowState, mode: Optional[str] = None) -> ValidityReport:
    """Compare ``rounded.f1`` against ``original.f0``.

    Checks integrality, the ``[floor, ceil]`` window, conservation, and in
    costed mode that the total cost did not go up.
    """
    g0, g1 = original.graph, rounded.graph
    if (g0.node_count, g0.tails, g0.heads) != (g1.node_count, g1.tails, g1.heads):
        raise GraphMismatchError("the rounded flow is defined on a different graph")
    report = ValidityReport()
    for e, (lo_hi, x) in enumerate(zip(original.f0, rounded.f1)):
        if x.denominator != 1:
            report.integral = False
            report.violations.append(Violation("edge", e, f"flow {x} is not integral"))
        if not math.floor(lo_hi) <= x <= math.ceil(lo_hi):
            report.in_range = False
            report.violations.append(Violation(
                "edge", e, f"flow {x} outside [{math.floor(lo_hi)}, {math.ceil(lo_hi)}]"))
    for v, bal in enumerate(net_flows(rounded)):
        if bal != 0:
            report.conserved = False
            report.violations.append(Violation("node", v, f"net flow {bal}"))
    if mode == COSTED:
        before = total_cost(original, "original")
        after = total_cost(rounded, "working")
        report.cost_ok = after <= before
        if not report.cost_ok:
            report.violations.append(Violation("cost", None, f"cost rose from {before} to {after}"))
    return report


# -- expectation ---------------------------------------------------------------


@dataclass
class ExpectationReport:
    """Per-edge expected (oracle) or mean (sampled) flow against ``f0``."""

    mode: str
    values: dict
    target: dict
    branch_count: int = 0
    total_probability: Optional[Fraction] = None
    trials: int = 0
    tolerance: Optional[float] = None
    failing: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.failing:
            return False
        return self.total_probability is None or self.total_probability == 1


def expectation_oracle(state: FlowState, algo: str = "mlogn2m", max_branches: int = 4096,
                       k: Optional[int] = None) -> ExpectationReport:
    """Exact expected rounded flow, by running every outcome of every random choice.

    Each run replays a fixed prefix of directions and then always goes
    forward; every decision past the prefix spawns the run that goes back
    there instead.  A leaf's weight is the product of the probabilities of
    the directions it took.
    """
    m = state.m
    expect = [Fraction(0)] * m
    mass = Fraction(0)
    leaves = 0
    stack: list[list[bool]] = [[]]
    while stack:
        prefix = stack.pop()
        leaves += 1
        if leaves > max_branches:
            raise BranchBudgetExceeded(f"more than {max_branches} outcomes to enumerate")
        policy = ScriptedPolicy(prefix)
        out, _ = run(state, policy, algo, k=k)
        weight = Fraction(1)
        for p, fwd in policy.trace:
            weight *= p if fwd else 1 - p
        mass += weight
        for e in range(m):
            expect[e] += weight * out.f1[e]
        fwds = [fwd for _, fwd in policy.trace]
        for i in range(len(fwds) - 1, len(prefix) - 1, -1):
            stack.append(fwds[:i] + [False])
    values = dict(enumerate(expect))
    target = dict(enumerate(state.f0))
    failing = [e for e in range(m) if values[e] != target[e]]
    return ExpectationReport("oracle", values, target, branch_count=leaves,
                             total_probability=mass, failing=failing)


def trial_seed(seed: int, index: int) -> int:
    """Seed of trial ``index``: the first 8 bytes of blake2b over ``"seed:index"``."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def statistical_expectation(state: FlowState, algo: str = "mlogn2m", trials: int = 10000,
                            seed: int = 0, k: Optional[int] = None) -> ExpectationReport:
    """Mean rounded flow over seeded trials, passing when within ``5 / (2 sqrt(trials))``."""
    if trials < 1:
        raise InvalidParameterError("trials must be at least 1")
    m = state.m
    sums = [0] * m
    for i in range(trials):
        out, _ = run(state, RandomizedPolicy(trial_seed(seed, i)), algo, k=k)
        for e in range(m):
            sums[e] += out.f1[e].numerator
    tol = 5 / (2 * math.sqrt(trials))
    values = {e: Fraction(sums[e], trials) for e in range(m)}
    target = dict(enumerate(state.f0))
    failing = [e for e in range(m) if abs(float(values[e] - target[e])) > tol]
    return ExpectationReport("statistical", values, target, trials=trials,
                             tolerance=tol, failing=failing)


# -- naive twin of the dynamic forest ---------------------------------------------


class NaiveForest:
    """Explicit parent arrays with the same rerooting behavior as :class:`DynTree`.

    Linking reroots ``v`` and hangs it under ``u``; cutting and every path
    query with distinct endpoints reroot at the first endpoint.  Paths are
    walked edge by edge, so the results are easy to trust.
    """

    def __init__(self, n: int):
        self.n = n
        self.parent: list[Optional[int]] = [None] * n
        self.adj: list[dict[int, int]] = [dict() for _ in range(n)]
        self.edges: dict[int, list] = {}  # eid -> [u, v, down, up, cost] as linked

    def find_root(self, v: int) -> int:
        while self.parent[v] is not None:
            v = self.parent[v]
        return v

    def connected(self, u: int, v: int) -> bool:
        return self.find_root(u) == self.find_root(v)

    def reroot(self, v: int) -> None:
        prev = None
        while v is not None:
            nxt = self.parent[v]
            self.parent[v] = prev
            prev, v = v, nxt

    def tree_size(self, v: int) -> int:
        root = self.find_root(v)
        return sum(1 for x in range(self.n) if self.find_root(x) == root)

    def link(self, u: int, v: int, payload: TreeEdge) -> None:
        self.reroot(v)
        self.parent[v] = u
        self.adj[u][v] = payload.edge_id
        self.adj[v][u] = payload.edge_id
        self.edges[payload.edge_id] = [u, v, payload.avail_down, payload.avail_up,
                                       payload.cost_down]

    def _payload_from(self, eid: int, a: int) -> TreeEdge:
        u, v, down, up, cost = self.edges[eid]
        if a == u:
            return TreeEdge(eid, down, up, cost)
        return TreeEdge(eid, up, down, None if cost is None else -cost)

    def cut(self, u: int, v: int) -> TreeEdge:
        eid = self.adj[u][v]
        self.reroot(u)
        self.parent[v] = None
        del self.adj[u][v], self.adj[v][u]
        payload = self._payload_from(eid, u)
        del self.edges[eid]
        return payload

    def cut_edge(self, eid: int) -> tuple[int, int, TreeEdge]:
        u, v = self.edges[eid][:2]
        return u, v, self.cut(u, v)

    def edge_payload(self, eid: int) -> TreeEdge:
        u = self.edges[eid][0]
        self.reroot(u)
        return self._payload_from(eid, u)

    def _path(self, u: int, v: int) -> list[tuple[int, int]]:
        """``(edge, from_node)`` steps from ``u`` to ``v``, after rerooting at ``u``."""
        self.reroot(u)
        steps = []
        x = v
        while x != u:
            p = self.parent[x]
            steps.append((self.adj[p][x], p))
            x = p
        steps.reverse()
        return steps

    def path_add(self, u: int, v: int, delta):
        if u == v:
            return None
        for eid, a in self._path(u, v):
            rec = self.edges[eid]
            if a == rec[0]:
                rec[2] -= delta
                rec[3] += delta
            else:
                rec[3] -= delta
                rec[2] += delta
        return self.path_min(u, v)

    def path_min(self, u: int, v: int) -> tuple[int, object]:
        best = None
        for eid, a in self._path(u, v):
            val = self._payload_from(eid, a).avail_down
            if best is None or val < best[1]:
                best = (eid, val)
        return best

    def path_summary(self, u: int, v: int, zero=0) -> Optional[PathSummary]:
        self.reroot(u)
        if not self.connected(u, v):
            return None
        steps = self._path(u, v)
        fwd = back = None
        total = zero
        for eid, a in steps:
            p = self._payload_from(eid, a)
            if fwd is None or p.avail_down < fwd[1]:
                fwd = (eid, p.avail_down)
            total = total + p.cost_down
        for eid, a in reversed(steps):
            val = self._payload_from(eid, a).avail_up
            if back is None or val < back[1]:
                back = (eid, val)
        return PathSummary(fwd[0], fwd[1], back[0], back[1], total)

    def path_sum(self, u: int, v: int, zero=0):
        if u == v:
            return zero
        total = zero
        for eid, a in self._path(u, v):
            total = total + self._payload_from(eid, a).cost_down
        return total


@dataclass
class ShadowResult:
    passed: bool
    ops_run: int
    divergence: Optional[str] = None


def shadow_tree_suite(op_count: int, seed: int = 0, n: int = 24,
                      tree_factory: Callable[[int], DynTree] = DynTree) -> ShadowResult:
    """Apply ``op_count`` random valid operations to a DynTree and its naive twin.

    Every query answer, including which edge wins a tie, is compared; the
    first disagreement ends the run.
    """
    rng = random.Random(seed)
    tree = tree_factory(n)
    twin = NaiveForest(n)
    next_eid = 0

    def same_tree_pair():
        u = rng.randrange(n)
        v = u
        for _ in range(rng.randint(1, 6)):
            if not twin.adj[v]:
                break
            v = rng.choice(sorted(twin.adj[v]))
        return u, v

    for i in range(op_count):
        roll = rng.random()
        if roll < 0.22:
            u, v = rng.randrange(n), rng.randrange(n)
            if u == v or twin.connected(u, v):
                op, got, want = "connected", tree.connected(u, v), twin.connected(u, v)
            else:
                d = Fraction(rng.randint(1, 9), 10)
                payload = TreeEdge(next_eid, d, 1 - d, rng.randint(-3, 3))
                next_eid += 1
                tree.link(u, v, payload)
                twin.link(u, v, payload)
                op, got, want = f"link({u}, {v})", None, None
        elif roll < 0.34:
            if not twin.edges:
                continue
            eid = rng.choice(sorted(twin.edges))
            if rng.random() < 0.5:
                op = f"cut_edge({eid})"
                got, want = tree.cut_edge(eid), twin.cut_edge(eid)
            else:
                a, b = twin.edges[eid][:2]
                if rng.random() < 0.5:
                    a, b = b, a
                op = f"cut({a}, {b})"
                got, want = tree.cut(a, b), twin.cut(a, b)
        elif roll < 0.46:
            v = rng.randrange(n)
            op, got, want = f"find_root({v})", tree.find_root(v), twin.find_root(v)
        elif roll < 0.58:
            u, v = same_tree_pair()
            if u == v:
                continue
            _, amount = twin.path_min(u, v)
            delta = amount * Fraction(rng.randint(0, 4), 4)
            op = f"path_add({u}, {v}, {delta})"
            got, want = tree.path_add(u, v, delta), twin.path_add(u, v, delta)
        elif roll < 0.70:
            u, v = same_tree_pair()
            if u == v:
                continue
            op, got, want = f"path_min({u}, {v})", tree.path_min(u, v), twin.path_min(u, v)
        elif roll < 0.76:
            u, v = rng.randrange(n), rng.randrange(n)
            if u == v:
                continue
            op, got, want = f"path_summary({u}, {v})", tree.path_summary(u, v), twin.path_summary(u, v)
        elif roll < 0.88:
            u, v = same_tree_pair()
            op, got, want = f"path_sum({u}, {v})", tree.path_sum(u, v), twin.path_sum(u, v)
        elif roll < 0.93:
            v = rng.randrange(n)
            tree.reroot(v)
            twin.reroot(v)
            op, got, want = f"reroot({v})", None, None
        elif roll < 0.97:
            v = rng.randrange(n)
            op, got, want = f"tree_size({v})", tree.tree_size(v), twin.tree_size(v)
        else:
            if not twin.edges:
                continue
            eid = rng.choice(sorted(twin.edges))
            op, got, want = f"edge_payload({eid})", tree.edge_payload(eid), twin.edge_payload(eid)
        if got != want:
            return ShadowResult(False, i + 1, f"op {i}: {op} returned {got!r}, expected {want!r}")
    return ShadowResult(True, op_count)
