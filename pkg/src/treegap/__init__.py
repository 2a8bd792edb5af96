"""Spectral gaps and Cheeger constants of edge-indexed quotient diagrams of trees."""

from .diagram import (
    CycleInconsistent,
    DanglingPartner,
    Diagram,
    DiagramError,
    Disconnected,
    EdgeIndexedGraph,
    FixedPointInvolution,
    HalfEdge,
    NonPositiveIndex,
    Vertex,
    build_diagram,
    build_graph,
    from_edges,
    graph_from_edges,
    propagate_measure,
    regularity,
    total_volume,
)

__all__ = [
    "CycleInconsistent",
    "DanglingPartner",
    "Diagram",
    "DiagramError",
    "Disconnected",
    "EdgeIndexedGraph",
    "FixedPointInvolution",
    "HalfEdge",
    "NonPositiveIndex",
    "Vertex",
    "build_diagram",
    "build_graph",
    "from_edges",
    "graph_from_edges",
    "propagate_measure",
    "regularity",
    "total_volume",
]

__version__ = "0.1.0"
