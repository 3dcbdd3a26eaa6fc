"""Round fractional circulations and flows to integral ones by canceling cycles."""

from .algorithms import ALGORITHMS, RunStats, run
from .core import (
    CostValue,
    DirectedEdgeRef,
    FlowState,
    Graph,
    Rational,
    availability,
    fractional_edges,
    is_circulation,
    is_integral,
    net_flow,
    parse_rational,
    total_cost,
)
from .errors import FlowRoundingError
from .linkcut import DynTree, TreeEdge
from .policy import (
    CostedPolicy,
    RandomizedPolicy,
    circulation_from_flow,
    flow_from_circulation,
    make_policy,
)
from .verify import check_all, expectation_oracle, statistical_expectation

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "CostValue", "CostedPolicy", "DirectedEdgeRef", "DynTree", "FlowRoundingError",
    "FlowState", "Graph", "RandomizedPolicy", "Rational", "RunStats", "TreeEdge", "availability",
    "check_all", "circulation_from_flow", "expectation_oracle", "flow_from_circulation",
    "fractional_edges", "is_circulation", "is_integral", "make_policy", "net_flow",
    "parse_rational", "run", "statistical_expectation", "total_cost",
]
