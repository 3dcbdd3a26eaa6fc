"""Line-oriented text format for instances and results.

::

    # comments start with '#'
    flows <n> <m> [costed]
    flow <s> <t>                 (optional: an s-t flow, not a circulation)
    <tail> <head> <flow> [<cost>]
    ...                          (m edge lines)
    stats key=value ...          (results only)
    cost <before> -> <after>     (results only, costed mode)
    value <before> -> <after>    (results only, s-t flows)

Numbers are exact rationals written ``p/q``; decimals such as ``1.7`` are
read exactly.  Costs may carry an infinite part, written like ``-2*inf+3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import CostValue, FlowState, Graph, format_rational
from .errors import ParseError

_COST_RE = re.compile(r"^(?P<units>[-+]?[0-9./]+)\*inf(?P<fin>[-+][0-9./eE]+)?$")


def parse_number(token: str, line: Optional[int] = None) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not an exact number: {token!r}", line) from None


def parse_cost(token: str, line: Optional[int] = None) -> CostValue:
    match = _COST_RE.match(token)
    if match is None:
        return CostValue(0, parse_number(token, line))
    fin = match.group("fin")
    return CostValue(parse_number(match.group("units"), line),
                     parse_number(fin, line) if fin else Fraction(0))


def _node(token: str, n: int, line: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"node id must be an integer, got {token!r}", line) from None
    if not 0 <= v < n:
        raise ParseError(f"node {v} outside 0..{n - 1}", line)
    return v


@dataclass
class InstanceFile:
    state: FlowState
    costed: bool = False
    source_sink: Optional[tuple[int, int]] = None
    stats: dict = field(default_factory=dict)
    cost_change: Optional[tuple[CostValue, CostValue]] = None
    value_change: Optional[tuple[Fraction, Fraction]] = None


def parse_instance(text: str) -> InstanceFile:
    """Parse an instance or result file; result trailers are kept, not required."""
    header = None
    st = None
    tails, heads, flows, costs = [], [], [], []
    stats: dict = {}
    cost_change = value_change = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word = parts[0]
        if header is None:
            if word != "flows" or len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "costed"):
                raise ParseError("expected header 'flows <n> <m> [costed]'", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("node and edge counts must be integers", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("counts must be non-negative", lineno)
            header = (n, m, len(parts) == 4)
            continue
        n, m, costed = header
        if word == "flow":
            if len(parts) != 3 or tails or st is not None:
                raise ParseError("'flow <s> <t>' must come once, before the edges", lineno)
            st = (_node(parts[1], n, lineno), _node(parts[2], n, lineno))
            if st[0] == st[1]:
                raise ParseError("source and sink must differ", lineno)
            continue
        if word == "stats":
            for item in parts[1:]:
                key, sep, value = item.partition("=")
                if not sep:
                    raise ParseError(f"stats entries look like key=value, got {item!r}", lineno)
                stats[key] = value
            continue
        if word in ("cost", "value"):
            if len(parts) != 4 or parts[2] != "->":
                raise ParseError(f"expected '{word} <before> -> <after>'", lineno)
            if word == "cost":
                cost_change = (parse_cost(parts[1], lineno), parse_cost(parts[3], lineno))
            else:
                value_change = (parse_number(parts[1], lineno), parse_number(parts[3], lineno))
            continue
        if len(tails) == m:
            raise ParseError(f"more than the declared {m} edges", lineno)
        want = 4 if costed else 3
        if len(parts) != want:
            raise ParseError(f"edge line needs {want} fields, got {len(parts)}", lineno)
        tails.append(_node(parts[0], n, lineno))
        heads.append(_node(parts[1], n, lineno))
        flows.append(parse_number(parts[2], lineno))
        if costed:
            costs.append(parse_cost(parts[3], lineno))
    if header is None:
        raise ParseError("missing 'flows <n> <m>' header")
    n, m, costed = header
    if len(tails) != m:
        raise ParseError(f"declared {m} edges but found {len(tails)}")
    graph = Graph(n, tuple(tails), tuple(heads))
    state = FlowState.from_flows(graph, flows, costs if costed else None)
    return InstanceFile(state, costed, st, stats, cost_change, value_change)


def emit_instance(inst: InstanceFile, flows: Optional[list] = None,
                  comments: tuple = ()) -> str:
    """Serialize ``inst``; ``flows`` replaces the edge flows (defaults to ``f1``)."""
    state = inst.state
    g = state.graph
    flows = state.f1 if flows is None else flows
    out = [f"# {c}" for c in comments]
    out.append(f"flows {g.node_count} {g.edge_count}" + (" costed" if inst.costed else ""))
    if inst.source_sink is not None:
        out.append(f"flow {inst.source_sink[0]} {inst.source_sink[1]}")
    for e in range(g.edge_count):
        fields = [str(g.tails[e]), str(g.heads[e]), format_rational(flows[e])]
        if inst.costed:
            fields.append(str(state.cost[e]))
        out.append(" ".join(fields))
    if inst.stats:
        out.append("stats " + " ".join(f"{k}={v}" for k, v in inst.stats.items()))
    if inst.cost_change is not None:
        out.append(f"cost {inst.cost_change[0]} -> {inst.cost_change[1]}")
    if inst.value_change is not None:
        a, b = inst.value_change
        out.append(f"value {format_rational(a)} -> {format_rational(b)}")
    return "\n".join(out) + "\n"
