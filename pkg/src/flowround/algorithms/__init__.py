"""The four rounders behind one entry point."""

from __future__ import annotations

from typing import Optional

from ..core import FlowState
from ..errors import InvalidParameterError
from ._common import ClusterAudit, RunStats
from .mlogn import round_mlogn
from .mlogn2m import default_k, round_mlogn2m
from .n2 import round_n2
from .naive import round_naive

ALGORITHMS = ("naive", "mlogn", "n2", "mlogn2m")


def run(state: FlowState, policy, algo: str = "mlogn2m", k: Optional[int] = None,
        order_seed: Optional[int] = None) -> tuple[FlowState, RunStats]:
    """Round the working flow of ``state`` with the named algorithm.

    ``k`` only applies to ``mlogn2m``; ``order_seed`` shuffles the processing
    order of edges (``mlogn``) or nodes (``n2``, ``mlogn2m``).
    """
    if algo == "naive":
        return round_naive(state, policy)
    if algo == "mlogn":
        return round_mlogn(state, policy, order_seed=order_seed)
    if algo == "n2":
        return round_n2(state, policy, order_seed=order_seed)
    if algo == "mlogn2m":
        return round_mlogn2m(state, policy, k=k, order_seed=order_seed)
    raise InvalidParameterError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")


__all__ = ["ALGORITHMS", "ClusterAudit", "RunStats", "default_k", "run",
           "round_naive", "round_mlogn", "round_n2", "round_mlogn2m"]
