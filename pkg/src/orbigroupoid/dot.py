"""Graphviz export of a groupoid's object graph.

Objects are grouped into clusters by orbit, each cluster labelled with the
orbit size and isotropy label, and a trailing comment summarises the arrow
space.  Output is canonical: equal groupoids serialize to identical bytes.
"""
from __future__ import annotations

from .groupoid import Groupoid, quotient
from .textfmt import format_id

__all__ = ["export_dot"]


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(G: Groupoid, name: str = "G") -> str:
    q = quotient(G)
    idx = G.objects.index
    lines = [f'graph "{_escape(name)}" {{',
             "  node [shape=box fontsize=10];"]
    for i, (rep, size, (order, element_orders)) in enumerate(q.summary()):
        label = f"orbit {format_id(rep)}: {size} point{'s' if size != 1 else ''}"
        label += f", isotropy {order}"
        if order > 1:
            label += " (" + ",".join(str(k) for k in element_orders) + ")"
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="{_escape(label)}";')
        for v in q.members[rep]:
            lines.append(f'    n{idx[v]} [label="{_escape(format_id(v))}"];')
        lines.append("  }")
    for u, v in G.objects.edges:
        lines.append(f"  n{idx[u]} -- n{idx[v]};")
    comps = len(G.arrows.components())
    lines.append(f"  // arrow space: {G.n_arrows} arrows in {comps} components")
    lines.append("}")
    return "\n".join(lines) + "\n"
