"""Deterministic (Δ+1)-edge-coloring in the LOCAL model for bounded-growth graphs."""

from .edge_coloring import (
    AlgorithmConfig,
    ColoringRunReport,
    EscalationCapExceeded,
    ParallelSafetyError,
    RSelection,
    auto_config,
    parallel_vizing_edge_coloring,
    pr_baseline_edge_coloring,
    select_R,
    verify_edge_coloring,
)
from .graph_core import (
    FAMILIES,
    Graph,
    GraphInputError,
    GrowthProfile,
    ImproperColoringError,
    PowerGraph,
    closed_ball,
    generate,
    growth_profile,
    log_star,
    power_graph_on_edges,
)
from .graphio import GraphParseError, parse_graph_file, parse_graph_text, write_graph
from .local_runtime import (
    BallView,
    LocalityViolation,
    NodeIdentifiers,
    RoundTranscript,
    assign_ids,
    ball_view,
    run_phased_algorithm,
)
from .symmetry_breaking import (
    EdgeClassColoring,
    VertexColoring,
    distance_edge_classes,
    gps_vertex_coloring,
    linial_reduce,
    verify_vertex_coloring,
)
from .vizing_engine import (
    AugmentationResult,
    PartialEdgeColoring,
    augment_in_ball,
    extend_greedy,
    is_augmenting,
    minimal_augmenting_subgraph,
    missing_colors,
    vizing_chain_augment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
