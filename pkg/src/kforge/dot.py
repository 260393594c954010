"""Graphviz rendering of graphs.

Each vertex pair gets one arrow carrying the multiplicity as its label, so
an infinite bundle is drawn once and labeled with the infinity sign rather
than exploded into edges.
"""

from __future__ import annotations

from .graph import INFINITY, Graph


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(e: Graph) -> str:
    lines = ["digraph {"]
    for v in e.vertices:
        lines.append(f"  {_quote(v)};")
    for src, dst, m in e.edge_items():
        label = "∞" if m is INFINITY else str(m)
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
