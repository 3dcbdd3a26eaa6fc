"""Incremental rounding with one dynamic forest, O(m log n).

Fractional edges are inserted one at a time.  An edge whose endpoints are
already connected closes a cycle with the tree path; that cycle is canceled,
every tree edge that turned integral is cut (its flow written back), and the
new edge is linked only if it is still fractional.
"""

from __future__ import annotations

from typing import Optional

from ..core import FlowState
from ..errors import InvariantError
from ..linkcut import DynTree, TreeEdge
from ._common import RunStats, Workspace, edge_order, prepare


def _payload(ws: Workspace, e: int, u: int) -> TreeEdge:
    v = ws.tails[e] if u == ws.heads[e] else ws.heads[e]
    return TreeEdge(e, ws.avail(e, u), ws.avail(e, v), ws.edge_cost(e, u))


def cut_integral(ws: Workspace, tree: DynTree, x: int, y: int, on_cut=None,
                 first=None) -> None:
    """Cut every zero-availability edge on the x->y path, writing flows back.

    Each cut edge splits the path in two and both halves are searched again,
    the half next to ``x`` first.  ``first`` is a known ``path_min(x, y)``.
    """
    stack = [(x, y)]
    while stack:
        a, b = stack.pop()
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
        if tree.connected(a, p):
            near, far = p, q
        else:
            near, far = q, p
        if on_cut is not None:
            on_cut(eid, near, far)
        stack.append((far, b))
        stack.append((a, near))


def round_mlogn(state: FlowState, policy, order_seed: Optional[int] = None
                ) -> tuple[FlowState, RunStats]:
    work, ws, stats = prepare(state, policy)
    tree = DynTree(ws.n, cost_zero=0 if ws.costed else None)
    for e in edge_order(ws.m, order_seed):
        u, v = ws.tails[e], ws.heads[e]
        if u == v or not ws.fractional(e):
            continue
        path = tree.path_summary(v, u)
        if path is None:
            tree.link(u, v, _payload(ws, e, u))
            continue
        # forward: along e from u to v, then back to u through the tree
        a = min(ws.avail(e, u), path.fwd)
        b = min(ws.avail(e, v), path.back)
        cost = None
        if ws.costed:
            cost = ws.edge_cost(e, u) + path.cost
        if ws.decide(cost, a, b):
            ws.push(e, u, a)
            cut_integral(ws, tree, v, u, first=tree.path_add(v, u, a))
        else:
            ws.push(e, v, b)
            cut_integral(ws, tree, u, v, first=tree.path_add(u, v, b))
        stats.cycles_canceled += 1
        if ws.fractional(e):
            tree.link(u, v, _payload(ws, e, u))
    if len(tree):
        raise InvariantError(f"{len(tree)} fractional edges remain in the forest")
    stats.tree_ops = tree.ops
    return ws.finish(), stats
