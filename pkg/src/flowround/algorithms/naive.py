"""Reference rounder: find any fractional cycle by DFS, cancel it, repeat."""

from __future__ import annotations

from ..core import FlowState
from ..errors import InvariantError
from ._common import RunStats, Workspace, prepare


def _find_cycle(ws: Workspace, adj: list) -> list | None:
    """Return a fractional cycle as ``[(edge, from_node), ...]`` or None."""
    visited = [False] * ws.n
    for root in range(ws.n):
        if visited[root] or not adj[root]:
            continue
        visited[root] = True
        pos = {root: 0}
        nodes = [root]
        via = [None]  # (edge, from_node) used to enter nodes[i]
        iters = [iter(adj[root])]
        while iters:
            v = nodes[-1]
            entered = via[-1]
            advanced = False
            for e, w in iters[-1]:
                if (entered is not None and e == entered[0]) or not ws.fractional(e):
                    continue
                if w in pos:
                    i = pos[w]
                    return via[i + 1:] + [(e, v)]
                if visited[w]:
                    continue
                visited[w] = True
                pos[w] = len(nodes)
                nodes.append(w)
                via.append((e, v))
                iters.append(iter(adj[w]))
                advanced = True
                break
            if not advanced:
                del pos[v]
                nodes.pop()
                via.pop()
                iters.pop()
    return None


def round_naive(state: FlowState, policy, check: bool = False) -> tuple[FlowState, RunStats]:
    """Cancel fractional cycles one at a time until the circulation is integral.

    With ``check=True`` conservation and the flow range are re-verified after
    every cancellation.
    """
    work, ws, stats = prepare(state, policy)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(ws.n)]
    for e in range(ws.m):
        u, v = ws.tails[e], ws.heads[e]
        if u != v and ws.fractional(e):
            adj[u].append((e, v))
            adj[v].append((e, u))
    while True:
        cycle = _find_cycle(ws, adj)
        if cycle is None:
            break
        a = min(ws.avail(e, x) for e, x in cycle)
        b = min(ws.avail(e, ws.tails[e] if x == ws.heads[e] else ws.heads[e]) for e, x in cycle)
        cost = sum(ws.edge_cost(e, x) for e, x in cycle) if ws.costed else None
        if ws.decide(cost, a, b):
            for e, x in cycle:
                ws.push(e, x, a)
        else:
            for e, x in cycle:
                ws.push(e, x, -b)
        stats.cycles_canceled += 1
        stats.tree_ops += len(cycle)
        if check:
            _check_step(ws)
    for e in range(ws.m):
        if ws.fractional(e):
            raise InvariantError(f"edge {e} still fractional after all cycles were canceled")
    return ws.finish(), stats


def _check_step(ws: Workspace) -> None:
    balance = [0] * ws.n
    for e in range(ws.m):
        if not ws.lo[e] <= ws.flow[e] <= ws.hi[e]:
            raise InvariantError(f"edge {e} left its rounding range")
        u, v = ws.tails[e], ws.heads[e]
        balance[u] -= ws.flow[e]
        balance[v] += ws.flow[e]
    if any(balance):
        raise InvariantError("conservation broken after a cancellation")
