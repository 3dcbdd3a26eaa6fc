"""Batch rounding over clusters, O(m log(n^2/m)).

The fractional forest is split into clusters: connected pieces of at most
``2k`` vertices kept as trees in one shared dynamic forest.  Each cluster is
rooted, and a root may point to a vertex of another cluster through one
fractional edge that is not stored in the dynamic forest.

Nodes join one at a time.  For a new node ``x``:

1. walk the pointers up from every cluster that ``x`` touches and merge a
   cluster into its parent when both hold at most ``k`` vertices;
2. visit the reached clusters children first, pairing up paths to ``x``
   inside each cluster.  Flow on the cycle's tree part inside the cluster is
   pushed at once; flow on the ``x`` edges, the pointer edges and the tree
   segments that led a path out of a child cluster is recorded as a mark and
   settled afterwards in one pass;
3. make ``x`` a new cluster and hang every tree still touched by a fractional
   ``x`` edge below it by reversing the pointer chain.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

from ..core import FlowState
from ..errors import InvalidParameterError, InvariantError
from ..linkcut import DynTree
from ._common import ClusterAudit, RunStats, Workspace, node_order, prepare
from .mlogn import _payload


def default_k(n: int, m: int) -> int:
    return min(max(n, 1), max(1, math.ceil(n * n / max(m, 1))))


class _Path:
    """A fractional path from ``entry`` to ``x``.

    The path is built from one segment (an ``x`` edge, or an uplink leaving
    a child cluster) followed by the path stored in ``up``'s predecessor; the
    ``up`` field points the other way, to the longer path this one was
    extended into, so settled flow can be summed from the outside in.
    """

    __slots__ = ("entry", "out", "inn", "cost", "mark", "up", "xedge", "uplink", "net")

    def __init__(self, entry, out, inn, cost, xedge=None, uplink=None):
        self.entry = entry
        self.out = out
        self.inn = inn
        self.cost = cost
        self.mark = 0
        self.up = None
        self.xedge = xedge
        self.uplink = uplink  # (s, r, g, pnode)
        self.net = 0


class ClusterForest:
    """Clusters as trees of a shared :class:`DynTree`, each rooted at its cluster root."""

    def __init__(self, ws: Workspace, k: int):
        self.ws = ws
        self.k = k
        self.tree = DynTree(ws.n, cost_zero=0 if ws.costed else None)
        self.size = {v: 1 for v in range(ws.n)}
        self.parent: dict[int, Optional[tuple[int, int]]] = {v: None for v in range(ws.n)}
        self.hops = 0

    def root(self, v: int) -> int:
        return self.tree.find_root(v)

    def primary_root(self, v: int) -> int:
        """Root of the top cluster of the tree of clusters holding ``v``."""
        r = self.root(v)
        while self.parent[r] is not None:
            r = self.root(self.parent[r][0])
        return r

    # -- merging ------------------------------------------------------------

    def merge_walk(self, starts: list[int], stats: RunStats) -> None:
        visited: set = set()
        for start in starts:
            node = start
            while True:
                r = self.root(node)
                if r in visited:
                    break
                visited.add(r)
                par = self.parent[r]
                if par is None:
                    break
                pnode, g = par
                self.hops += 1
                d = self.root(pnode)
                if self.size[r] <= self.k and self.size[d] <= self.k:
                    self.tree.link(pnode, r, _payload(self.ws, g, pnode))
                    self.tree.reroot(d)
                    self.size[d] += self.size.pop(r)
                    del self.parent[r]
                    visited.discard(r)
                    stats.merges += 1
                node = d

    def audit(self, order: list[int], children: dict[int, list[int]], audit: ClusterAudit) -> None:
        audit.steps += 1
        internal = 0
        for r in order:
            if self.size[r] > 2 * self.k:
                audit.size_violations += 1
            par = self.parent[r]
            if par is not None:
                d = self.root(par[0])
                if self.size[r] <= self.k and self.size[d] <= self.k:
                    audit.adjacency_violations += 1
            if children[r]:
                internal += 1
        audit.max_internal = max(audit.max_internal, internal)
        ratio = internal * self.k / self.ws.n
        audit.max_internal_ratio = max(audit.max_internal_ratio, ratio)

    # -- cutting ------------------------------------------------------------

    def cut_zeros(self, a: int, b: int, root: int, first=None) -> set:
        """Cut zero edges on the a..b path of the cluster rooted at ``root``.

        Every piece cut away becomes a cluster of its own, rooted at the
        endpoint of the cut edge, with no parent.  Returns the roots of all
        pieces; the caller reroots them once it is done with path queries.
        ``first`` is a known ``path_min(a, b)``.
        """
        tree, ws = self.tree, self.ws
        roots = {root}
        stack = [(a, b, root)]
        while stack:
            a, b, rt = stack.pop()
            if a == b:
                continue
            if first is not None:
                (eid, value), first = first, None
            else:
                eid, value = tree.path_min(a, b)
            if value != 0:
                continue
            p, q, payload = tree.cut_edge(eid)
            ws.set_from_avail(eid, p, payload.avail_down)
            if tree.connected(rt, p):
                root_p, root_q, new = rt, q, q
            else:
                root_p, root_q, new = p, rt, p
            part = tree.tree_size(new)
            self.size[new] = part
            self.size[rt] -= part
            self.parent[new] = None
            roots.add(new)
            if tree.connected(a, p):
                stack.append((q, b, root_q))
                stack.append((a, p, root_p))
            else:
                stack.append((p, b, root_p))
                stack.append((a, q, root_q))
        return roots

    def restore(self, roots) -> None:
        for r in roots:
            self.tree.reroot(r)


def _walk_reached(cf: ClusterForest, starts: list[int]):
    """Reached clusters in discovery order and the reached children of each."""
    children: dict[int, list[int]] = {}
    order: list[int] = []
    for start in starts:
        r = cf.root(start)
        if r in children:
            continue
        children[r] = []
        order.append(r)
        while True:
            par = cf.parent[r]
            if par is None:
                break
            cf.hops += 1
            d = cf.root(par[0])
            if d in children:
                children[d].append(r)
                break
            children[d] = [r]
            order.append(d)
            r = d
    return order, children


def _postorder(order: list[int], children: dict[int, list[int]], parent_of) -> list[int]:
    out = []
    for top in order:
        if parent_of(top) is not None:
            continue
        stack = [(top, False)]
        while stack:
            r, done = stack.pop()
            if done:
                out.append(r)
                continue
            stack.append((r, True))
            for c in reversed(children[r]):
                stack.append((c, False))
    return out


def round_mlogn2m(state: FlowState, policy, k: Optional[int] = None,
                  order_seed: Optional[int] = None, audit: bool = True,
                  observer: Optional[Callable[[int, ClusterForest], None]] = None
                  ) -> tuple[FlowState, RunStats]:
    """Round with clusters of at most ``2k`` nodes.

    ``observer(x, forest)``, when given, is called for every node ``x`` after
    its cycles are canceled and before it joins the forest.
    """
    work, ws, stats = prepare(state, policy)
    n = ws.n
    if k is None:
        k = default_k(n, ws.m)
    if not isinstance(k, int) or k < 1:
        raise InvalidParameterError(f"cluster parameter k must be a positive integer, got {k!r}")
    stats.k = k
    stats.audit = ClusterAudit() if audit else None
    cf = ClusterForest(ws, k)
    tree = cf.tree
    costed = ws.costed
    incident: list[list[int]] = [[] for _ in range(n)]
    for e in range(ws.m):
        u, v = ws.tails[e], ws.heads[e]
        if u != v:
            incident[u].append(e)
            incident[v].append(e)
    processed = [False] * n

    for x in node_order(n, order_seed):
        xedges = []
        for e in sorted(incident[x]):
            w = ws.tails[e] if ws.heads[e] == x else ws.heads[e]
            if processed[w] and ws.fractional(e):
                xedges.append((e, w))
        processed[x] = True
        if not xedges:
            continue
        starts = [w for _, w in xedges]

        # merge small neighbouring clusters on the reached paths
        cf.merge_walk(starts, stats)
        order, children = _walk_reached(cf, starts)
        stats.clusters_touched += len(order)
        stats.max_cluster_size = max(stats.max_cluster_size, max(cf.size[r] for r in order))
        if stats.audit is not None:
            cf.audit(order, children, stats.audit)

        # pair paths to x inside each cluster, children first
        own: dict[int, list[tuple[int, int]]] = {}
        for e, w in xedges:
            own.setdefault(cf.root(w), []).append((e, w))
        pending: dict[int, list[_Path]] = {}
        objects: list[_Path] = []

        for r in _postorder(order, children, lambda c: cf.parent[c]):
            arrivals = pending.pop(r, [])
            for e, w in own.get(r, ()):
                p = _Path(w, ws.avail(e, w), ws.avail(e, x), ws.edge_cost(e, w), xedge=e)
                objects.append(p)
                arrivals.append(p)
            survivors: dict[int, _Path] = {}
            for q in arrivals:
                rt = cf.root(q.entry)
                p = survivors.pop(rt, None)
                if p is None:
                    survivors[rt] = q
                    continue
                s1, s2 = p.entry, q.entry
                a, b = min(p.out, q.inn), min(p.inn, q.out)
                cost = p.cost - q.cost if costed else None
                if s1 != s2:
                    path = tree.path_summary(s2, s1)
                    a = min(a, path.fwd)
                    b = min(b, path.back)
                    if costed:
                        cost += path.cost
                if ws.decide(cost, a, b):
                    down, up, amount = p, q, a
                else:
                    down, up, amount = q, p, b
                down.out -= amount
                down.inn += amount
                down.mark += amount
                up.inn -= amount
                up.out += amount
                up.mark -= amount
                stats.cycles_canceled += 1
                roots = {rt}
                if s1 != s2:
                    low = tree.path_add(up.entry, down.entry, amount)
                    roots = cf.cut_zeros(up.entry, down.entry, rt, first=low)
                cf.restore(roots)
                for alive in (down, up):
                    if alive.out > 0 and alive.inn > 0:
                        where = cf.root(alive.entry)
                        if where in survivors:
                            raise InvariantError("two fractional paths left in one cluster piece")
                        survivors[where] = alive
            # extend the survivor of the root piece out of the cluster
            p = survivors.get(r)
            par = cf.parent[r]
            if p is None or par is None:
                continue
            pnode, g = par
            s = p.entry
            out = min(p.out, ws.avail(g, pnode))
            inn = min(p.inn, ws.avail(g, r))
            cost = ws.edge_cost(g, pnode) + p.cost if costed else None
            if s != r:
                # rooted at r again afterwards, as the cluster needs
                path = tree.path_summary(r, s)
                out = min(out, path.fwd)
                inn = min(inn, path.back)
                if costed:
                    cost += path.cost
            cf.hops += 1
            ext = _Path(pnode, out, inn, cost, uplink=(s, r, g, pnode))
            p.up = ext
            objects.append(ext)
            pending.setdefault(cf.root(pnode), []).append(ext)

        if pending:
            raise InvariantError("paths were left waiting for an unvisited cluster")

        # settle the recorded flow, outermost extensions first
        for obj in reversed(objects):
            obj.net = obj.mark + (obj.up.net if obj.up is not None else 0)
        for obj in objects:
            f = obj.net
            if f == 0:
                continue
            if obj.xedge is not None:
                ws.push(obj.xedge, obj.entry, f)
                continue
            s, r, g, pnode = obj.uplink
            ws.push(g, pnode, f)
            if s != r:
                a, b = (r, s) if f > 0 else (s, r)
                low = tree.path_add(a, b, abs(f))
                cf.restore(cf.cut_zeros(a, b, r, first=low))
            if not ws.fractional(g):
                cf.parent[r] = None

        if observer is not None:
            observer(x, cf)

        # x becomes a cluster and adopts every tree it still touches
        for e, w in xedges:
            if not ws.fractional(e):
                continue
            prev, via, node = x, e, w
            while True:
                r = cf.root(node)
                old = cf.parent[r]
                if r == x or (old is not None and old[0] == x):
                    raise InvariantError(f"node {x} would close a fractional cycle through {w}")
                if r != node:
                    tree.reroot(node)
                    cf.size[node] = cf.size.pop(r)
                    del cf.parent[r]
                cf.parent[node] = (prev, via)
                cf.hops += 1
                if old is None:
                    break
                prev, via, node = r, old[1], old[0]

    if len(tree) or any(p is not None for p in cf.parent.values()):
        raise InvariantError("fractional edges remain after the last node")
    stats.tree_ops = tree.ops + cf.hops
    return ws.finish(), stats
