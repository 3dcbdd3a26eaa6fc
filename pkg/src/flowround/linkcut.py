"""Link/cut dynamic forest with directional edge availabilities.

Every tree edge is stored as its own splay node sitting between its two
endpoint vertices.  Along a preferred path the in-order sequence runs from the
top of the path to the bottom, so each edge node keeps its availability in the
left-to-right (``lr``) and right-to-left (``rl``) reading directions plus a
per-unit cost in the ``lr`` direction.  Reversing a splay subtree swaps the two
directions and negates costs; pushing ``d`` units left-to-right subtracts ``d``
from ``lr`` availabilities and adds ``d`` to ``rl`` ones, so one additive tag
covers both.

Ties in :meth:`DynTree.path_min` go to the edge nearest the query's first
endpoint.  Aggregates keep the leftmost ``lr`` minimum and the rightmost ``rl``
minimum, which is the same rule seen from the other end after a reversal.

Values only need ``+``, ``-`` and ordering, so plain ints work as well as
fractions.  Cost payloads may be ``None`` (no costs tracked).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple, Optional

from .errors import (
    NegativeAvailabilityError,
    NoSuchEdgeError,
    NotConnectedError,
    SameNodeError,
    SameTreeError,
)


@dataclass
class TreeEdge:
    """Payload of one tree edge, oriented ``u -> v`` for ``link(u, v)``/``cut(u, v)``."""

    edge_id: int
    avail_down: Any
    avail_up: Any
    cost_down: Any = None


class PathSummary(NamedTuple):
    """Both directional minima and the cost of one u..v path, from a single query."""

    fwd_edge: int  # smallest u->v availability, nearest u on ties
    fwd: Any
    back_edge: int  # smallest v->u availability, nearest v on ties
    back: Any
    cost: Any  # summed u->v cost


def _cadd(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


class _Node:
    __slots__ = (
        "left", "right", "parent", "rev", "lazy",
        "key", "edge", "a_lr", "a_rl", "c_lr",
        "min_lr", "arg_lr", "min_rl", "arg_rl", "csum",
        "size", "vsize",
    )

    def __init__(self, key, edge=None, a_lr=None, a_rl=None, c_lr=None):
        self.left = None
        self.right = None
        self.parent = None
        self.rev = False
        self.lazy = 0
        self.key = key
        self.edge = edge
        self.a_lr = a_lr
        self.a_rl = a_rl
        self.c_lr = c_lr
        self.min_lr = a_lr
        self.arg_lr = edge
        self.min_rl = a_rl
        self.arg_rl = edge
        self.csum = c_lr
        self.size = 0 if edge is not None else 1
        self.vsize = 0


def _is_root(x: _Node) -> bool:
    p = x.parent
    return p is None or (p.left is not x and p.right is not x)


def _apply_rev(x: _Node) -> None:
    x.left, x.right = x.right, x.left
    x.a_lr, x.a_rl = x.a_rl, x.a_lr
    x.min_lr, x.min_rl = x.min_rl, x.min_lr
    x.arg_lr, x.arg_rl = x.arg_rl, x.arg_lr
    if x.c_lr is not None:
        x.c_lr = -x.c_lr
    if x.csum is not None:
        x.csum = -x.csum
    x.lazy = -x.lazy
    x.rev = not x.rev


def _apply_add(x: _Node, d) -> None:
    if x.edge is not None:
        x.a_lr -= d
        x.a_rl += d
    if x.min_lr is not None:
        x.min_lr -= d
        x.min_rl += d
    x.lazy += d


def _push(x: _Node) -> None:
    if x.rev:
        if x.left is not None:
            _apply_rev(x.left)
        if x.right is not None:
            _apply_rev(x.right)
        x.rev = False
    if x.lazy:
        if x.left is not None:
            _apply_add(x.left, x.lazy)
        if x.right is not None:
            _apply_add(x.right, x.lazy)
        x.lazy = 0


def _update(x: _Node) -> None:
    left, right = x.left, x.right
    size = x.vsize + (0 if x.edge is not None else 1)
    if left is not None:
        mn, arg = left.min_lr, left.arg_lr
        mr, argr = left.min_rl, left.arg_rl
        cs = left.csum
        size += left.size
    else:
        mn = arg = mr = argr = cs = None
    if x.edge is not None:
        a = x.a_lr
        if mn is None or a < mn:
            mn, arg = a, x.edge
        a = x.a_rl
        if mr is None or a <= mr:
            mr, argr = a, x.edge
        cs = _cadd(cs, x.c_lr)
    if right is not None:
        a = right.min_lr
        if a is not None:
            if mn is None or a < mn:
                mn, arg = a, right.arg_lr
            a = right.min_rl
            if mr is None or a <= mr:
                mr, argr = a, right.arg_rl
        cs = _cadd(cs, right.csum)
        size += right.size
    x.min_lr, x.arg_lr, x.min_rl, x.arg_rl = mn, arg, mr, argr
    x.csum = cs
    x.size = size


class DynTree:
    """Dynamic forest over the vertex ids ``0..n-1``.

    Path queries reroot the tree at their first endpoint, so the root reported
    by :meth:`find_root` follows the most recent path operation, link or
    :meth:`reroot`.  ``ops`` counts public operations and ``rotations`` counts
    splay rotations.
    """

    def __init__(self, n: int, cost_zero: Any = 0):
        self.n = n
        self.cost_zero = cost_zero
        self._vertices: dict[int, _Node] = {}
        self._edges: dict[int, _Node] = {}
        self._ends: dict[int, tuple[int, int]] = {}
        self._pair: dict[tuple[int, int], int] = {}
        self.ops = 0
        self.rotations = 0

    # -- splay machinery -------------------------------------------------

    def _vertex(self, v: int) -> _Node:
        node = self._vertices.get(v)
        if node is None:
            if not 0 <= v < self.n:
                raise IndexError(f"vertex {v} outside 0..{self.n - 1}")
            node = self._vertices[v] = _Node(v)
        return node

    @staticmethod
    def _rotate(x: _Node) -> None:
        """Lift ``x`` over its parent; only the demoted parent is re-aggregated."""
        p = x.parent
        g = p.parent
        if p.left is x:
            b = x.right
            p.left = b
            x.right = p
        else:
            b = x.left
            p.right = b
            x.left = p
        if b is not None:
            b.parent = p
        if g is not None:
            if g.left is p:
                g.left = x
            elif g.right is p:
                g.right = x
        x.parent = g
        p.parent = x
        _update(p)

    def _splay(self, x: _Node) -> None:
        stack = [x]
        y = x
        p = y.parent
        while p is not None and (p.left is y or p.right is y):
            stack.append(p)
            y = p
            p = y.parent
        if len(stack) == 1:
            if x.rev or x.lazy:
                _push(x)
            return
        for y in reversed(stack):
            if y.rev or y.lazy:
                _push(y)
        rotate = self._rotate
        turns = 0
        while True:
            p = x.parent
            if p is None or (p.left is not x and p.right is not x):
                break
            g = p.parent
            if g is not None and (g.left is p or g.right is p):
                if (g.left is p) == (p.left is x):
                    rotate(p)
                else:
                    rotate(x)
                turns += 1
            rotate(x)
            turns += 1
        _update(x)
        self.rotations += turns

    def _access(self, x: _Node) -> None:
        last = None
        y = x
        while y is not None:
            self._splay(y)
            if y.right is not None:
                y.vsize += y.right.size
            if last is not None:
                y.vsize -= last.size
            y.right = last
            _update(y)
            last = y
            y = y.parent
        self._splay(x)

    def _evert(self, x: _Node) -> None:
        self._access(x)
        _apply_rev(x)

    def _root_node(self, x: _Node) -> _Node:
        self._access(x)
        y = x
        _push(y)
        while y.left is not None:
            y = y.left
            _push(y)
        self._splay(y)
        return y

    def _expose(self, u: int, v: int) -> _Node:
        """Make the u..v path one splay tree rooted at ``u`` and return that root."""
        nu = self._vertex(u)
        self._evert(nu)
        if self._root_node(self._vertex(v)) is not nu:
            raise NotConnectedError(f"{u} and {v} are in different trees")
        return nu

    # -- public operations -------------------------------------------------

    def find_root(self, v: int) -> int:
        self.ops += 1
        return self._root_node(self._vertex(v)).key

    def connected(self, u: int, v: int) -> bool:
        if u == v:
            return True
        self.ops += 1
        return self._root_node(self._vertex(u)) is self._root_node(self._vertex(v))

    def reroot(self, v: int) -> None:
        self.ops += 1
        self._evert(self._vertex(v))

    def tree_size(self, v: int) -> int:
        """Number of vertices in the tree containing ``v``."""
        self.ops += 1
        node = self._vertex(v)
        self._access(node)
        return node.size

    def link(self, u: int, v: int, payload: TreeEdge) -> None:
        """Join the trees of ``u`` and ``v`` with ``v`` becoming a child of ``u``.

        ``v`` is rerooted first if it is not already the root of its tree.
        """
        self.ops += 1
        if u == v or self.connected(u, v):
            raise SameTreeError(f"{u} and {v} are already in the same tree")
        if payload.edge_id in self._edges:
            raise ValueError(f"edge {payload.edge_id} is already in the forest")
        nu, nv = self._vertex(u), self._vertex(v)
        e = _Node(("e", payload.edge_id), payload.edge_id,
                  payload.avail_down, payload.avail_up, payload.cost_down)
        self._evert(nv)
        nv.parent = e
        e.vsize += nv.size
        _update(e)
        self._access(nu)
        e.parent = nu
        nu.vsize += e.size
        _update(nu)
        self._edges[payload.edge_id] = e
        self._ends[payload.edge_id] = (u, v)
        self._pair[(min(u, v), max(u, v))] = payload.edge_id

    def edge_between(self, u: int, v: int) -> Optional[int]:
        return self._pair.get((min(u, v), max(u, v)))

    def has_edge(self, edge_id: int) -> bool:
        return edge_id in self._edges

    def edge_ids(self) -> list[int]:
        return sorted(self._edges)

    def endpoints(self, edge_id: int) -> tuple[int, int]:
        """Endpoints of a stored edge, in the ``(u, v)`` order it was linked with."""
        return self._ends[edge_id]

    def __len__(self) -> int:
        return len(self._edges)

    def _isolate_path(self, u: int, v: int, edge_id: int) -> _Node:
        e = self._edges[edge_id]
        self._expose(u, v)
        self._splay(e)
        _push(e)
        return e

    def edge_payload(self, edge_id: int) -> TreeEdge:
        """Current payload of a stored edge, oriented as it was linked."""
        self.ops += 1
        if edge_id not in self._edges:
            raise NoSuchEdgeError(f"edge {edge_id} is not in the forest")
        u, v = self._ends[edge_id]
        e = self._isolate_path(u, v, edge_id)
        return TreeEdge(edge_id, e.a_lr, e.a_rl, e.c_lr)

    def cut(self, u: int, v: int) -> TreeEdge:
        """Remove the edge between ``u`` and ``v``; the payload is oriented ``u -> v``."""
        edge_id = self.edge_between(u, v)
        if edge_id is None:
            raise NoSuchEdgeError(f"no tree edge between {u} and {v}")
        return self._cut(u, v, edge_id)

    def cut_edge(self, edge_id: int) -> tuple[int, int, TreeEdge]:
        """Remove a stored edge by id; returns ``(u, v, payload)`` in link orientation."""
        if edge_id not in self._edges:
            raise NoSuchEdgeError(f"edge {edge_id} is not in the forest")
        u, v = self._ends[edge_id]
        return u, v, self._cut(u, v, edge_id)

    def _cut(self, u: int, v: int, edge_id: int) -> TreeEdge:
        self.ops += 1
        e = self._isolate_path(u, v, edge_id)
        payload = TreeEdge(edge_id, e.a_lr, e.a_rl, e.c_lr)
        for child in (e.left, e.right):
            child.parent = None
        e.left = e.right = None
        del self._edges[edge_id]
        del self._ends[edge_id]
        del self._pair[(min(u, v), max(u, v))]
        return payload

    def path_add(self, u: int, v: int, delta) -> Optional[tuple[int, Any]]:
        """Push ``delta`` units along the u->v path.

        Availabilities in the u->v direction drop by ``delta`` and the opposite
        ones rise by ``delta``.  Raises if any availability would go negative.
        Returns what :meth:`path_min` would now report for u->v, or None when
        ``u == v``.
        """
        self.ops += 1
        if u == v:
            return None
        root = self._expose(u, v)
        if root.min_lr - delta < 0 or root.min_rl + delta < 0:
            raise NegativeAvailabilityError(
                f"pushing {delta} along {u}->{v} exceeds the path availability")
        _apply_add(root, delta)
        return root.arg_lr, root.min_lr

    def path_summary(self, u: int, v: int) -> Optional[PathSummary]:
        """Both path minima and the u->v cost sum, or None if ``u`` and ``v`` are not connected.

        Reroots at ``u`` like the other path queries, connected or not.
        """
        self.ops += 1
        if u == v:
            raise SameNodeError("path_summary needs two distinct vertices")
        nu = self._vertex(u)
        self._evert(nu)
        if self._root_node(self._vertex(v)) is not nu:
            return None
        cost = self.cost_zero if nu.csum is None else nu.csum
        return PathSummary(nu.arg_lr, nu.min_lr, nu.arg_rl, nu.min_rl, cost)

    def path_min(self, u: int, v: int) -> tuple[int, Any]:
        """``(edge_id, value)`` of the smallest u->v availability, nearest ``u`` on ties."""
        self.ops += 1
        if u == v:
            raise SameNodeError("path_min needs two distinct vertices")
        root = self._expose(u, v)
        return root.arg_lr, root.min_lr

    def path_sum(self, u: int, v: int):
        """Sum of per-unit costs along u->v."""
        self.ops += 1
        if u == v:
            return self.cost_zero
        root = self._expose(u, v)
        return self.cost_zero if root.csum is None else root.csum
