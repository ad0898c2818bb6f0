"""
Auxiliary Graph Service
───────────────────────
Builds the ordered 2-edge-coloured graph A(G,H) whose vertices are the
Hamilton edges e_i = v_i v_{i+1}.

    red  {e_i, e_j}  <=>  {v_{i+1}, v_{j+1}} is an inner edge
    blue {e_i, e_j}  <=>  {v_i, v_j} is an inner edge

Every inner edge yields exactly one red and one blue edge, so red and blue
degrees of e_i are deg(v_{i+1}) - 2 and deg(v_i) - 2.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from app.core.errors import AuxEdgeError
from app.models.auxiliary import AuxGraph, Colour, ColouredEdge, neighbouring_positions
from app.models.graph import EdgeIndex, HamiltonianInstance, edge_key
from app.services.graph_core import inner_edges

logger = logging.getLogger(__name__)


def build_auxiliary(instance: HamiltonianInstance) -> AuxGraph:
    n = instance.n
    pos = instance.position
    red: set[tuple[int, int]] = set()
    blue: set[tuple[int, int]] = set()
    red_adj = [0] * n
    blue_adj = [0] * n

    for a, b in inner_edges(instance):
        pa, pb = pos[a], pos[b]

        # {v_{i+1}, v_{j+1}} = {a, b}
        i, j = (pa - 1) % n, (pb - 1) % n
        red.add(edge_key(i, j))
        red_adj[i] |= 1 << j
        red_adj[j] |= 1 << i

        blue.add(edge_key(pa, pb))
        blue_adj[pa] |= 1 << pb
        blue_adj[pb] |= 1 << pa

    aux = AuxGraph(
        instance=instance,
        red=frozenset(red),
        blue=frozenset(blue),
        red_adj=tuple(red_adj),
        blue_adj=tuple(blue_adj),
    )
    logger.debug(
        "aux graph: n=%d red=%d blue=%d double=%d",
        n, len(red), len(blue), len(aux.double_edges()),
    )
    return aux


def inner_edge_of(aux: AuxGraph, edge: ColouredEdge) -> tuple[int, int]:
    """The inner edge e(l) of G generating the coloured aux edge ``edge``."""
    i, j = edge.endpoints
    if not aux.has_edge(i, j, edge.colour):
        raise AuxEdgeError(f"{edge.colour.value} edge {{e{i + 1},e{j + 1}}} not in auxiliary graph")
    inst = aux.instance
    if edge.colour is Colour.RED:
        return edge_key(inst.vertex_at(i + 1), inst.vertex_at(j + 1))
    return edge_key(inst.vertex_at(i), inst.vertex_at(j))


@dataclass(frozen=True)
class DegreeIdentity:
    holds: bool
    first_violation: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_degree_identity(instance: HamiltonianInstance, aux: AuxGraph) -> DegreeIdentity:
    g = instance.graph
    for i in range(instance.n):
        red_ok = aux.degree(i, Colour.RED) == g.degree(instance.vertex_at(i + 1)) - 2
        blue_ok = aux.degree(i, Colour.BLUE) == g.degree(instance.vertex_at(i)) - 2
        if not (red_ok and blue_ok):
            return DegreeIdentity(False, i)
    return DegreeIdentity(True)


def neighbouring(aux: AuxGraph, i: EdgeIndex | int, j: EdgeIndex | int) -> bool:
    a = i.index if isinstance(i, EdgeIndex) else i
    b = j.index if isinstance(j, EdgeIndex) else j
    return neighbouring_positions(a, b, aux.n)
