"""Reading and writing the line-oriented ``diag v1`` text format.

::

    diag v1
    vertex <id> [boundary]
    edge <id> <from> <to> <i_forward> <i_backward>
    base <vertex-id> [<mass>]

Blank lines and lines starting with ``#`` are ignored.  Any other
directive is an error.
"""

from __future__ import annotations

from pathlib import Path

from .diagram import (
    Diagram,
    DiagramError,
    EdgeIndexedGraph,
    Vertex,
    as_fraction,
    build_diagram,
    build_graph,
    edges_to_half_edges,
)

HEADER = "diag v1"


class DiagramParseError(DiagramError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.source = source


def _parse(text: str, source: str | None):
    vertices: list[Vertex] = []
    edges: list[tuple] = []
    base = None
    mass = "1"
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words = line.split()
        if not seen_header:
            if words != ["diag", "v1"]:
                raise DiagramParseError(f"expected header {HEADER!r}", lineno, source)
            seen_header = True
            continue
        kind, args = words[0], words[1:]
        try:
            if kind == "vertex":
                if len(args) == 1:
                    vertices.append(Vertex(args[0]))
                elif len(args) == 2 and args[1] == "boundary":
                    vertices.append(Vertex(args[0], boundary=True))
                else:
                    raise DiagramParseError("usage: vertex <id> [boundary]", lineno, source)
            elif kind == "edge":
                if len(args) != 5:
                    raise DiagramParseError(
                        "usage: edge <id> <from> <to> <i_forward> <i_backward>", lineno, source
                    )
                eid, u, v, fwd, bwd = args
                edges.append((eid, u, v, as_fraction(fwd), as_fraction(bwd)))
            elif kind == "base":
                if base is not None:
                    raise DiagramParseError("duplicate base directive", lineno, source)
                if len(args) not in (1, 2):
                    raise DiagramParseError("usage: base <vertex-id> [<mass>]", lineno, source)
                base = args[0]
                if len(args) == 2:
                    mass = args[1]
                    as_fraction(mass)
            else:
                raise DiagramParseError(f"unknown directive {kind!r}", lineno, source)
        except ValueError as exc:
            if isinstance(exc, DiagramParseError):
                raise
            raise DiagramParseError(str(exc), lineno, source) from None
    if not seen_header:
        raise DiagramParseError(f"missing header {HEADER!r}", None, source)
    return vertices, edges, base, mass


def parse_diagram(text: str, source: str | None = None) -> Diagram:
    vertices, edges, base, mass = _parse(text, source)
    try:
        return build_diagram(vertices, edges_to_half_edges(edges), base, mass)
    except DiagramParseError:
        raise
    except DiagramError as exc:
        raise type(exc)(f"{source}: {exc}" if source else str(exc)) from None


def parse_graph(text: str, source: str | None = None) -> EdgeIndexedGraph:
    """Parse without deriving a measure (for graphs that admit none)."""
    vertices, edges, _, _ = _parse(text, source)
    return build_graph(vertices, edges_to_half_edges(edges))


def load_diagram(path: str | Path) -> Diagram:
    path = Path(path)
    return parse_diagram(path.read_text(encoding="utf-8"), str(path))


def _edge_name(fwd_id: str, bwd_id: str) -> str:
    if fwd_id.endswith(".f") and bwd_id == fwd_id[:-2] + ".b":
        return fwd_id[:-2]
    return fwd_id


def dump_diagram(graph: EdgeIndexedGraph) -> str:
    lines = [HEADER]
    for v in graph.vertices:
        lines.append(f"vertex {v.id} boundary" if v.boundary else f"vertex {v.id}")
    for fwd, bwd in graph.edge_pairs():
        lines.append(
            f"edge {_edge_name(fwd.id, bwd.id)} {fwd.origin} {bwd.origin} {fwd.index} {bwd.index}"
        )
    if isinstance(graph, Diagram):
        lines.append(f"base {graph.base} {graph.base_mass}")
    return "\n".join(lines) + "\n"


def save_diagram(graph: EdgeIndexedGraph, path: str | Path) -> None:
    Path(path).write_text(dump_diagram(graph), encoding="utf-8")
