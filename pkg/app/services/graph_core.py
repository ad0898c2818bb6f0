"""
Graph Core Service
──────────────────
Hamilton-cycle bookkeeping and 2-factor verification.

    validate_hamiltonian  – Graph + vertex order -> HamiltonianInstance
    inner_edges           – E(G) minus the Hamilton edges
    verify_two_factor     – edge subset -> TwoFactor (every degree exactly 2)
    verify_cycle_listing  – explicit cycle listing -> TwoFactor
    count_components      – number of cycles of a TwoFactor
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence

from app.core.errors import HamiltonCycleError, NotATwoFactorError
from app.models.graph import Graph, HamiltonianInstance, TwoFactor, edge_key


def validate_hamiltonian(graph: Graph, order: Sequence[int]) -> HamiltonianInstance:
    n = graph.n
    order = tuple(order)
    if n < 3:
        raise HamiltonCycleError(f"a Hamilton cycle needs at least 3 vertices, got {n}")
    if len(order) != n:
        raise HamiltonCycleError(f"order has length {len(order)}, expected {n}")
    if sorted(order) != list(range(n)):
        raise HamiltonCycleError(f"order is not a permutation of 1..{n}")

    for i in range(n):
        u, v = order[i], order[(i + 1) % n]
        if not graph.has_edge(u, v):
            raise HamiltonCycleError(f"missing Hamilton edge {{{u + 1},{v + 1}}}", pair=(u, v))

    position = [0] * n
    for i, v in enumerate(order):
        position[v] = i
    return HamiltonianInstance(graph=graph, order=order, position=tuple(position))


def inner_edges(instance: HamiltonianInstance) -> frozenset[tuple[int, int]]:
    return instance.graph.edges - instance.hamilton_edges


def verify_two_factor(graph: Graph, edge_subset: Iterable[tuple[int, int]]) -> TwoFactor:
    """Decompose ``edge_subset`` into cycles iff every vertex has degree 2 in it."""
    nbrs: dict[int, list[int]] = defaultdict(list)
    for u, v in {edge_key(u, v) for u, v in edge_subset}:
        if not graph.has_edge(u, v):
            raise NotATwoFactorError(f"edge {{{u + 1},{v + 1}}} not in graph", edge=(u, v))
        nbrs[u].append(v)
        nbrs[v].append(u)

    for v in range(graph.n):
        d = len(nbrs.get(v, ()))
        if d != 2:
            raise NotATwoFactorError(f"vertex {v + 1} has degree {d}", vertex=v)

    seen = [False] * graph.n
    cycles: list[list[int]] = []
    for start in range(graph.n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        prev, cur = start, nbrs[start][0]
        while cur != start:
            cyc.append(cur)
            seen[cur] = True
            a, b = nbrs[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(cyc)
    return TwoFactor.from_cycles(cycles)


def verify_cycle_listing(graph: Graph, cycles: Sequence[Sequence[int]]) -> TwoFactor:
    """
    Check an explicit cycle listing (0-based) and return it as a TwoFactor.

    The first violation is reported in the order: id out of range, repeated
    vertex, uncovered vertex, short cycle, missing edge.
    """
    n = graph.n
    counts = [0] * n
    for cyc in cycles:
        for v in cyc:
            if not 0 <= v < n:
                raise NotATwoFactorError(f"vertex {v + 1} out of range 1..{n}")
            counts[v] += 1
    for v, c in enumerate(counts):
        if c > 1:
            raise NotATwoFactorError(f"vertex {v + 1} listed {c} times", vertex=v)
    for v, c in enumerate(counts):
        if c == 0:
            raise NotATwoFactorError(f"vertex {v + 1} uncovered", vertex=v)

    edges: list[tuple[int, int]] = []
    for cyc in cycles:
        if len(cyc) < 3:
            raise NotATwoFactorError(f"cycle of length {len(cyc)} starting at vertex {cyc[0] + 1}")
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            if not graph.has_edge(a, b):
                raise NotATwoFactorError(f"edge {{{a + 1},{b + 1}}} not in graph", edge=(a, b))
            edges.append((a, b))

    return verify_two_factor(graph, edges)


def count_components(tf: TwoFactor) -> int:
    return tf.component_count


def hamilton_factor(instance: HamiltonianInstance) -> TwoFactor:
    """H itself as a one-cycle 2-factor."""
    return TwoFactor.from_cycles([instance.order])
