"""Graphviz rendering of schema diagrams."""

from __future__ import annotations

from ..model import SchemaGraph


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(graph: SchemaGraph, name: str = "schema") -> str:
    """Classes as boxes, datatypes as rounded boxes, one labelled arrow per edge."""
    lines = [f"digraph {_quote(name)} {{"]
    for cls in sorted(graph.classes):
        lines.append(f"  {_quote(cls)} [shape=box];")
    for dt in sorted(graph.datatypes):
        lines.append(f'  {_quote(dt)} [shape=box, style="rounded"];')
    for ind, cls in sorted(graph.individuals):
        lines.append(f"  {_quote(ind)} [shape=ellipse];")
        lines.append(f'  {_quote(ind)} -> {_quote(cls)} [label="a", style="dashed"];')
    for edge in sorted(graph.edges, key=lambda e: e.sort_key()):
        lines.append(f"  {_quote(edge.source)} -> {_quote(edge.target)} [label={_quote(edge.property)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
