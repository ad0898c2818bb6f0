"""
Core graph types: simple undirected graphs on bitset adjacency, Hamilton-cycle
bookkeeping and 2-factors.

Vertex ids are 0-based internally. Text and JSON outputs convert to 1-based at
the boundary (see graph_parser / json_formatter).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import networkx as nx


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]
    adj: tuple[int, ...] = field(compare=False, repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        from app.core.errors import InvalidGraphError

        if n < 0:
            raise InvalidGraphError(f"negative vertex count {n}")
        adj = [0] * n
        keys: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise InvalidGraphError(f"loop edge at vertex {u + 1}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraphError(f"edge {{{u + 1},{v + 1}}} out of range 1..{n}")
            keys.add(edge_key(u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n=n, edges=frozenset(keys), adj=tuple(adj))

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbours(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    @property
    def min_degree(self) -> int:
        return min((self.degree(v) for v in range(self.n)), default=0)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G


@dataclass(frozen=True)
class EdgeIndex:
    """Index of a Hamilton edge e_i; arithmetic is modulo n (0-based index)."""

    index: int
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", self.index % self.n)

    @classmethod
    def from_external(cls, i: int, n: int) -> "EdgeIndex":
        return cls(i - 1, n)

    def succ(self) -> "EdgeIndex":
        return EdgeIndex(self.index + 1, self.n)

    def pred(self) -> "EdgeIndex":
        return EdgeIndex(self.index - 1, self.n)

    @property
    def label(self) -> str:
        return f"e{self.index + 1}"


@dataclass(frozen=True)
class HamiltonianInstance:
    """A graph with a fixed Hamilton cycle H = v_0 v_1 ... v_{n-1} v_0.

    Build through ``graph_core.validate_hamiltonian``; ``position[v]`` is the
    index of vertex v along H.
    """

    graph: Graph
    order: tuple[int, ...]
    position: tuple[int, ...] = field(compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def vertex_at(self, i: int) -> int:
        return self.order[i % self.n]

    def hamilton_edge(self, i: int) -> tuple[int, int]:
        """Endpoints of e_i = v_i v_{i+1}."""
        return edge_key(self.vertex_at(i), self.vertex_at(i + 1))

    @cached_property
    def hamilton_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.hamilton_edge(i) for i in range(self.n))


def canonical_cycle(cycle: Iterable[int]) -> tuple[int, ...]:
    """Rotate to the smallest vertex, then orient toward the smaller neighbour."""
    seq = list(cycle)
    start = seq.index(min(seq))
    seq = seq[start:] + seq[:start]
    if len(seq) > 2 and seq[-1] < seq[1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


@dataclass(frozen=True)
class TwoFactor:
    """Spanning 2-regular subgraph stored as canonical vertex cycles."""

    cycles: tuple[tuple[int, ...], ...]

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]]) -> "TwoFactor":
        canon = sorted(canonical_cycle(c) for c in cycles)
        return cls(cycles=tuple(canon))

    @property
    def component_count(self) -> int:
        return len(self.cycles)

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for cyc in self.cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                out.add(edge_key(a, b))
        return frozenset(out)

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {v: idx for idx, cyc in enumerate(self.cycles) for v in cyc}

    def to_external(self) -> list[list[int]]:
        return [[v + 1 for v in cyc] for cyc in self.cycles]
