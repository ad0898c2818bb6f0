"""
Transforms Service
──────────────────
The correspondence S -> F(S) between neighbour-free alternating-cycle systems
of A and 2-factors of G, and the two pattern constructions that steer the
number of cycles of F:

    going_up_pattern    U(S, C)   – duplicate cycle C, one more cycle in F
    going_down_pattern  D(S, s_k) – triple the cycle through a separating
                                    vertex s_k, one cycle fewer in F

Patterns live on abstract vertices; fractional indices s_{i+1/2},
s_{i+1/3}, s_{i+2/3} are keys (i, slot) sorted lexicographically and then
renumbered 0..m-1. embed_pattern / embed_pattern_direct resolve them to
concrete positions of A.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from app.core.config import DIRECT_EMBED_BUDGET
from app.core.errors import (
    CapacityExceededError,
    EmbeddingNotFound,
    NeighbouringVerticesError,
    NotATwoFactorError,
    PatternError,
    PipelineInvariantError,
    SearchBudgetExhausted,
)
from app.models.auxiliary import (
    AbstractPattern,
    AltCycle,
    AltCycleSystem,
    AuxGraph,
    BlowupEmbedding,
    Colour,
    ColouredEdge,
    first_neighbouring_pair,
)
from app.models.graph import TwoFactor, bits, edge_key
from app.services.aux_graph import inner_edge_of
from app.services.graph_core import verify_two_factor

logger = logging.getLogger(__name__)

Key = tuple[int, int]


# ══════════════════════════════════════════════════════════════════════════════
# F(S)
# ══════════════════════════════════════════════════════════════════════════════

def check_system_in_aux(aux: AuxGraph, S: AltCycleSystem) -> None:
    for i, j in S.red:
        if not aux.has_edge(i, j, Colour.RED):
            raise PatternError(f"red system edge {{e{i + 1},e{j + 1}}} not in auxiliary graph")
    for i, j in S.blue:
        if not aux.has_edge(i, j, Colour.BLUE):
            raise PatternError(f"blue system edge {{e{i + 1},e{j + 1}}} not in auxiliary graph")


def two_factor_of(aux: AuxGraph, S: AltCycleSystem) -> TwoFactor:
    """
    E(F(S)) = (Hamilton edges outside V(S)) + (inner edges e(l) for l in E(S)).

    The degree-2 conclusion is re-checked on every call.
    """
    pair = first_neighbouring_pair(S.vertices, aux.n)
    if pair is not None:
        raise NeighbouringVerticesError(
            f"system contains neighbouring vertices e{pair[0] + 1}, e{pair[1] + 1}", pair
        )
    check_system_in_aux(aux, S)

    inst = aux.instance
    in_system = set(S.vertices)
    edges = [inst.hamilton_edge(i) for i in range(aux.n) if i not in in_system]
    edges += [inner_edge_of(aux, ColouredEdge(e, Colour.RED)) for e in sorted(S.red)]
    edges += [inner_edge_of(aux, ColouredEdge(e, Colour.BLUE)) for e in sorted(S.blue)]

    if len(set(edges)) != len(edges):
        raise PipelineInvariantError("F(S) uses an edge twice")
    try:
        return verify_two_factor(inst.graph, edges)
    except NotATwoFactorError as exc:
        raise PipelineInvariantError(f"F(S) is not a 2-factor: {exc}") from exc


def separating_vertices(aux: AuxGraph, S: AltCycleSystem, F: TwoFactor) -> list[int]:
    """Positions e_k of S whose endpoints v_k, v_{k+1} lie in different cycles of F."""
    comp = F.component_of
    inst = aux.instance
    return [
        p for p in S.vertices
        if comp[inst.vertex_at(p)] != comp[inst.vertex_at(p + 1)]
    ]


@dataclass(frozen=True)
class ComponentBound:
    components: int
    cycle_length: int
    inner_edges_per_component: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.components <= self.cycle_length and all(
            c >= 2 for c in self.inner_edges_per_component
        )


def component_bound(aux: AuxGraph, cycle: AltCycle) -> ComponentBound:
    """For a single cycle C: count(F(C)) <= |V(C)|, each component has >= 2 inner edges."""
    F = two_factor_of(aux, AltCycleSystem.from_cycles([cycle]))
    hamilton = aux.instance.hamilton_edges
    per_comp = [0] * F.component_count
    for u, v in F.edges:
        if edge_key(u, v) not in hamilton:
            per_comp[F.component_of[u]] += 1
    return ComponentBound(F.component_count, len(cycle), tuple(per_comp))


def component_bound_holds(aux: AuxGraph, cycle: AltCycle) -> bool:
    return component_bound(aux, cycle).holds


# ══════════════════════════════════════════════════════════════════════════════
# Abstract patterns
# ══════════════════════════════════════════════════════════════════════════════

def pattern_from_system(
    S: AltCycleSystem,
    origin: Iterable[int] | None = None,
) -> AbstractPattern:
    """Renumber V(S) to 0..m-1 in increasing order; labels s1..sm."""
    mapping = {v: i for i, v in enumerate(S.vertices)}
    m = len(mapping)
    return AbstractPattern(
        system=S.relabel(mapping),
        labels=tuple(f"s{i + 1}" for i in range(m)),
        origin=tuple(origin) if origin is not None else tuple(range(m)),
    )


def base_pattern(blowup: BlowupEmbedding) -> AbstractPattern:
    """The blow-up's cycle as a pattern whose index order follows the cluster order."""
    order = blowup.cluster_order()
    rank = {cluster: r for r, cluster in enumerate(order)}
    cycle = blowup.pattern
    red: set[Key] = set()
    blue: set[Key] = set()
    for a, b, colour in cycle.edges():
        (red if colour is Colour.RED else blue).add(edge_key(rank[a], rank[b]))
    system = AltCycleSystem(red=frozenset(red), blue=frozenset(blue))
    system.validate()
    return AbstractPattern(
        system=system,
        labels=tuple(f"s{r + 1}" for r in range(len(order))),
        origin=tuple(order),
    )


def _as_pattern(S: AltCycleSystem | AbstractPattern) -> AbstractPattern:
    return S if isinstance(S, AbstractPattern) else pattern_from_system(S)


def _build_pattern(
    base: AbstractPattern,
    keys: set[Key],
    red: set[tuple[Key, Key]],
    blue: set[tuple[Key, Key]],
    suffixes: dict[int, str],
) -> AbstractPattern:
    ordered = sorted(keys)
    index = {key: i for i, key in enumerate(ordered)}

    def pairs(edges: set[tuple[Key, Key]]) -> frozenset[tuple[int, int]]:
        return frozenset(edge_key(index[a], index[b]) for a, b in edges)

    system = AltCycleSystem(red=pairs(red), blue=pairs(blue))
    system.validate()
    if len(system) != len(ordered):
        raise PatternError("pattern vertex without system edges")
    return AbstractPattern(
        system=system,
        labels=tuple(base.labels[i] + suffixes.get(slot, "") for i, slot in ordered),
        origin=tuple(base.origin[i] for i, _ in ordered),
    )


def going_up_pattern(S: AltCycleSystem | AbstractPattern, cycle_id: int) -> AbstractPattern:
    """U(S, C): add s_{i+1/2} for every s_i of C and copy C's edges between them."""
    P = _as_pattern(S)
    cycles = P.system.cycles
    if not 0 <= cycle_id < len(cycles):
        raise PatternError(f"cycle id {cycle_id} out of range 0..{len(cycles) - 1}")
    C = cycles[cycle_id]

    keys = {(i, 0) for i in range(P.size)} | {(i, 1) for i in C.vertices}
    red = {((a, 0), (b, 0)) for a, b in P.system.red}
    blue = {((a, 0), (b, 0)) for a, b in P.system.blue}
    for a, b, colour in C.edges():
        (red if colour is Colour.RED else blue).add(((a, 1), (b, 1)))
    return _build_pattern(P, keys, red, blue, {1: "+1/2"})


def going_down_pattern(S: AltCycleSystem | AbstractPattern, k: int) -> AbstractPattern:
    """
    D(S, s_k): for every s_i of the cycle C through s_k add s_{i+1/3} and
    s_{i+2/3}; edges of C away from s_k are copied twice. The blue edge
    s_b s_k is replaced by s_b s_{k+1/3}, s_{b+1/3} s_{k+2/3}, s_{b+2/3} s_k;
    the red edge s_r s_k stays and s_{r+1/3} s_{k+2/3}, s_{r+2/3} s_{k+1/3}
    are added in red.
    """
    P = _as_pattern(S)
    if not 0 <= k < P.size:
        raise PatternError(f"vertex index {k} out of range 0..{P.size - 1}")
    C = P.system.cycles[P.system.cycle_containing(k)]
    r = P.system.red_partner[k]
    b = P.system.blue_partner[k]

    keys = {(i, 0) for i in range(P.size)}
    keys |= {(i, s) for i in C.vertices for s in (1, 2)}
    red = {((x, 0), (y, 0)) for x, y in P.system.red}
    blue = {((x, 0), (y, 0)) for x, y in P.system.blue if edge_key(x, y) != edge_key(b, k)}

    for x, y, colour in C.edges():
        if k in (x, y):
            continue
        target = red if colour is Colour.RED else blue
        target.add(((x, 1), (y, 1)))
        target.add(((x, 2), (y, 2)))

    blue |= {((b, 0), (k, 1)), ((b, 1), (k, 2)), ((b, 2), (k, 0))}
    red |= {((r, 1), (k, 2)), ((r, 2), (k, 1))}
    return _build_pattern(P, keys, red, blue, {1: "+1/3", 2: "+2/3"})


# ══════════════════════════════════════════════════════════════════════════════
# Embeddings
# ══════════════════════════════════════════════════════════════════════════════

@dataclass
class EmbeddingState:
    """Per-cluster count of vertices already handed out."""

    taken: dict[int, int] = field(default_factory=dict)


def embed_pattern(
    blowup: BlowupEmbedding,
    pattern: AbstractPattern,
    state: EmbeddingState | None = None,
) -> AltCycleSystem:
    """
    Map pattern vertex j (index order) to the lowest unused vertex of the
    cluster it descends from. Requires a consistently ordered, neighbour-free
    blow-up; the result is order-isomorphic to the pattern.
    """
    if not blowup.ordered:
        raise PatternError("embed_pattern needs a consistently ordered blow-up")
    state = state if state is not None else EmbeddingState()
    loads = pattern.cluster_loads()
    for cluster, need in sorted(loads.items()):
        have = len(blowup.clusters[cluster]) - state.taken.get(cluster, 0)
        if need > have:
            raise CapacityExceededError(
                f"pattern needs {need} vertices of cluster {cluster}, {have} available",
                needed=need,
                available=have,
            )

    mapping: dict[int, int] = {}
    for j, cluster in enumerate(pattern.origin):
        slot = state.taken.get(cluster, 0)
        mapping[j] = blowup.clusters[cluster][slot]
        state.taken[cluster] = slot + 1

    S = pattern.system.relabel(mapping)
    if [mapping[j] for j in range(pattern.size)] != sorted(mapping.values()):
        raise PipelineInvariantError("cluster embedding is not order-preserving")
    return S


def embed_pattern_direct(
    aux: AuxGraph,
    pattern: AbstractPattern,
    budget: int = DIRECT_EMBED_BUDGET,
) -> AltCycleSystem:
    """
    Order-preserving, neighbour-free embedding of ``pattern`` anywhere in A.

    Pattern vertices are placed in index order at increasing positions at
    least two apart (0 and n-1 never both used); each candidate set is the
    intersection of the colour neighbourhoods of already placed partners.
    """
    n, m = aux.n, pattern.size
    if m == 0:
        return AltCycleSystem.empty()
    red_p = pattern.system.red_partner
    blue_p = pattern.system.blue_partner
    phi = [0] * m
    spent = [0]

    def place(j: int, lowest: int) -> bool:
        latest = n - 1 - 2 * (m - 1 - j)
        if lowest > latest:
            return False
        mask = ((1 << (latest + 1)) - 1) & ~((1 << lowest) - 1)
        if red_p[j] < j:
            mask &= aux.red_adj[phi[red_p[j]]]
        if blue_p[j] < j:
            mask &= aux.blue_adj[phi[blue_p[j]]]
        if j == m - 1 and phi[0] == 0:
            mask &= ~(1 << (n - 1))
        for x in bits(mask):
            spent[0] += 1
            if spent[0] > budget:
                raise SearchBudgetExhausted(
                    f"direct embedding budget of {budget} expansions exhausted", spent[0]
                )
            phi[j] = x
            if j == m - 1 or place(j + 1, x + 2):
                return True
        return False

    if not place(0, 0):
        raise EmbeddingNotFound(
            f"no order-preserving embedding of a {m}-vertex pattern", spent[0]
        )
    logger.debug("direct embedding of %d vertices in %d expansions", m, spent[0])
    return pattern.system.relabel(dict(enumerate(phi)))


def order_isomorphic(pattern: AbstractPattern | AltCycleSystem, S: AltCycleSystem) -> bool:
    """True iff the increasing bijection V(pattern) -> V(S) maps edges onto edges colourwise."""
    P = pattern.system if isinstance(pattern, AbstractPattern) else pattern
    if len(P) != len(S):
        return False
    mapping = dict(zip(P.vertices, S.vertices))
    relabelled = P.relabel(mapping)
    return relabelled.red == S.red and relabelled.blue == S.blue
