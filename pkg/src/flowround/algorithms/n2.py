"""Batch rounding, O(n^2): process one node at a time against a forest.

When node ``x`` joins, each tree it touches is traversed bottom-up.  Every
vertex ``u`` collects the paths to ``x`` surviving in its children's subtrees
plus its own edges to ``x``; any two of them form a cycle through ``u`` and
``x`` which is canceled on the path aggregates alone.  Flow on the edges next
to ``x`` is updated at once, flow on tree edges is deferred as marks on the
path ends and settled by one bottom-up pass over each tree.
"""

from __future__ import annotations

from typing import Optional

from ..core import FlowState
from ..errors import InvariantError
from ._common import RunStats, node_order, prepare


class PathAggregate:
    """A fractional path from the current vertex to ``x``.

    ``out``/``inn`` are the availabilities toward and away from ``x``,
    ``cost`` the per-unit cost toward ``x``; ``end`` is the tree vertex that
    the edge ``xedge`` joins to ``x``.
    """

    __slots__ = ("out", "inn", "cost", "end", "xedge")

    def __init__(self, out, inn, cost, end, xedge):
        self.out = out
        self.inn = inn
        self.cost = cost
        self.end = end
        self.xedge = xedge


def _root_tree(forest: list, root: int):
    """Children lists (insertion order), parent edges and a preorder of one tree."""
    parent_edge = {root: None}
    children = {}
    order = [root]
    stack = [root]
    while stack:
        u = stack.pop()
        kids = []
        for e, w in forest[u].items():
            if w not in parent_edge:
                parent_edge[w] = e
                kids.append(w)
        children[u] = kids
        order.extend(kids)
        stack.extend(reversed(kids))
    return children, parent_edge, order


def _component(forest: list, start: int, label: dict, tag: int) -> None:
    stack = [start]
    label[start] = tag
    while stack:
        u = stack.pop()
        for w in forest[u].values():
            if w not in label:
                label[w] = tag
                stack.append(w)


def update_flow(ws, forest: list, order: list, children: dict, parent_edge: dict,
                marks: dict) -> int:
    """Settle deferred marks bottom-up over one rooted tree.

    The flow returned from child ``c`` is the sum of marks in its subtree and
    is pushed from ``c`` toward its parent; tree edges that turn integral are
    dropped from ``forest``.  Returns the total arriving at the root, which
    is zero when the marks balance.
    """
    incoming: dict[int, int] = {}
    for u in reversed(order):
        total = marks.get(u, 0)
        for c in children[u]:
            fc = incoming.pop(c)
            if fc:
                pe = parent_edge[c]
                ws.push(pe, c, fc)
                if not ws.fractional(pe):
                    del forest[u][pe]
                    del forest[c][pe]
            total += fc
        incoming[u] = total
    return incoming[order[0]]


def round_n2(state: FlowState, policy, order_seed: Optional[int] = None
             ) -> tuple[FlowState, RunStats]:
    work, ws, stats = prepare(state, policy)
    n = ws.n
    incident: list[list[int]] = [[] for _ in range(n)]
    for e in range(ws.m):
        u, v = ws.tails[e], ws.heads[e]
        if u != v:
            incident[u].append(e)
            incident[v].append(e)
    forest: list[dict[int, int]] = [dict() for _ in range(n)]  # vertex -> {edge: neighbor}
    processed = [False] * n
    costed = ws.costed

    for x in node_order(n, order_seed):
        xedges: dict[int, list[int]] = {}
        for e in sorted(incident[x]):
            w = ws.tails[e] if ws.heads[e] == x else ws.heads[e]
            if processed[w] and ws.fractional(e):
                xedges.setdefault(w, []).append(e)
        seen: set = set()
        for w0 in xedges:
            if w0 in seen:
                continue
            children, parent_edge, order = _root_tree(forest, w0)
            seen.update(order)
            marks: dict[int, int] = {}
            result: dict[int, Optional[PathAggregate]] = {}
            for u in reversed(order):
                paths = []
                for c in children[u]:
                    p = result.pop(c)
                    if p is None:
                        continue
                    pe = parent_edge[c]
                    p.out = min(ws.avail(pe, u), p.out)
                    p.inn = min(ws.avail(pe, c), p.inn)
                    if costed:
                        p.cost = ws.edge_cost(pe, u) + p.cost
                    paths.append(p)
                    stats.tree_ops += 1
                for e in xedges.get(u, ()):
                    paths.append(PathAggregate(ws.avail(e, u), ws.avail(e, x),
                                               ws.edge_cost(e, u), u, e))
                    stats.tree_ops += 1
                survivor = None
                for q in paths:
                    if survivor is None:
                        survivor = q
                        continue
                    down, up = survivor, q
                    cost = down.cost - up.cost if costed else None
                    if not ws.decide(cost, min(down.out, up.inn), min(down.inn, up.out)):
                        down, up = up, down
                    flow = min(down.out, up.inn)
                    down.out -= flow
                    down.inn += flow
                    up.inn -= flow
                    up.out += flow
                    ws.push(down.xedge, down.end, flow)
                    ws.push(up.xedge, x, flow)
                    marks[down.end] = marks.get(down.end, 0) - flow
                    marks[up.end] = marks.get(up.end, 0) + flow
                    stats.cycles_canceled += 1
                    stats.tree_ops += 1
                    alive = [p for p in (down, up) if p.out > 0 and p.inn > 0]
                    if len(alive) > 1:
                        raise InvariantError("cancellation left both paths fractional")
                    survivor = alive[0] if alive else None
                result[u] = survivor
            total = update_flow(ws, forest, order, children, parent_edge, marks)
            stats.tree_ops += len(order)
            if total != 0:
                raise InvariantError("deferred marks do not balance within a tree")

        remaining = [(e, w) for w, es in xedges.items() for e in es if ws.fractional(e)]
        label: dict[int, int] = {}
        for tag, (e, w) in enumerate(remaining):
            if w in label:
                raise InvariantError(f"node {x} would close a fractional cycle through {w}")
            _component(forest, w, label, tag)
        for e, w in remaining:
            forest[x][e] = w
            forest[w][e] = x
        processed[x] = True

    for u in range(n):
        if forest[u]:
            raise InvariantError("fractional edges remain after the last node")
    return ws.finish(), stats
