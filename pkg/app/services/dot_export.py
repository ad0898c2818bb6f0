"""
DOT Export
──────────
Graphviz text for the auxiliary graph and for an input graph with its
Hamilton cycle and (optionally) a 2-factor highlighted.

To render:  dot -Kcirco -Tpng aux.dot > aux.png
"""

from __future__ import annotations

import math

from app.models.auxiliary import AuxGraph, Colour
from app.models.graph import HamiltonianInstance, TwoFactor

_RADIUS = 3.0


def _pos(i: int, n: int) -> str:
    angle = math.pi / 2 - 2 * math.pi * i / n
    return f"{_RADIUS * math.cos(angle):.3f},{_RADIUS * math.sin(angle):.3f}!"


def aux_to_dot(aux: AuxGraph) -> str:
    """e1..en on a circle in Hamilton order; red and blue edges as separate
    undirected edges, so a double edge shows twice."""
    n = aux.n
    lines = ["graph A {", "graph [layout=neato splines=true];"]
    append = lines.append

    append('node [shape=circle fontname=Arial fontsize=10 penwidth=1.5 color="#444444"]')
    for i in range(n):
        append(f'"e{i + 1}" [pos="{_pos(i, n)}"];')

    for edge in aux.coloured_edges():
        i, j = edge.endpoints
        style = "solid" if edge.colour is Colour.RED else "dashed"
        append(f'"e{i + 1}" -- "e{j + 1}" [color={edge.colour.value} style={style}];')

    append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(instance: HamiltonianInstance, factor: TwoFactor | None = None) -> str:
    """Vertices in Hamilton order; H edges grey, factor edges bold, the rest light."""
    graph = instance.graph
    n = instance.n
    hamilton = instance.hamilton_edges
    chosen = factor.edges if factor is not None else frozenset()
    lines = ["graph G {", "graph [layout=neato splines=true];"]
    append = lines.append

    append('node [shape=circle fontname=Arial fontsize=10 penwidth=1.5]')
    for i, v in enumerate(instance.order):
        append(f'"{v + 1}" [pos="{_pos(i, n)}"];')

    for u, v in graph.sorted_edges():
        attrs = []
        if (u, v) in chosen:
            attrs.append('penwidth=3 color="#1F6FB2"')
        elif (u, v) in hamilton:
            attrs.append('color="#888888"')
        else:
            attrs.append('color="#DDDDDD"')
        if (u, v) in hamilton:
            attrs.append("style=solid")
        else:
            attrs.append("style=dotted")
        append(f'"{u + 1}" -- "{v + 1}" [{" ".join(attrs)}];')

    append("}")
    return "\n".join(lines) + "\n"
