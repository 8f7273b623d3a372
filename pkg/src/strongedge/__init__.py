"""Strong edge-coloring of 2-degenerate graphs by constructive reduction."""

from .coloring import (
    Coloring,
    Params,
    Violation,
    available_colors,
    greedy_color,
    make_params,
    swap_colors,
    verify_strong,
)
from .errors import InputError, PreconditionError, ReplayError, ResourceLimitError, UsageError
from .graph import (
    Graph,
    SpecialContext,
    build_graph,
    capacity,
    capacity_context,
    class_check,
    degeneracy,
    edge,
    is_two_degenerate,
    n2_edges,
    special_vertices,
)
from .reducer import RunResult, replay_trace, strong_color

__all__ = [
    "Coloring", "Params", "Violation", "available_colors", "greedy_color", "make_params",
    "swap_colors", "verify_strong", "InputError", "PreconditionError", "ReplayError",
    "ResourceLimitError", "UsageError", "Graph", "SpecialContext", "build_graph", "capacity",
    "capacity_context", "class_check", "degeneracy", "edge", "is_two_degenerate", "n2_edges",
    "special_vertices", "RunResult", "replay_trace", "strong_color",
]
