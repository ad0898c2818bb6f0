"""
Types of the 2-edge-coloured side of the engine: the auxiliary graph A(G,H),
colour-alternating cycles and their unions, abstract ordered patterns,
the red-blue path digraph and blow-up embeddings.

Vertices of A are Hamilton-edge positions 0..n-1 (position i stands for
e_{i+1} in 1-based notation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator

import networkx as nx
import numpy as np

from app.core.errors import PatternError
from app.models.graph import HamiltonianInstance, bits, edge_key


class Colour(str, Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def other(self) -> "Colour":
        return Colour.BLUE if self is Colour.RED else Colour.RED


def neighbouring_positions(i: int, j: int, n: int) -> bool:
    """e_i and e_j are neighbouring iff |i - j| = 1 modulo n."""
    d = (i - j) % n
    return d == 1 or d == n - 1


# ══════════════════════════════════════════════════════════════════════════════
# Auxiliary graph
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class ColouredEdge:
    endpoints: tuple[int, int]
    colour: Colour

    @classmethod
    def of(cls, i: int, j: int, colour: Colour | str) -> "ColouredEdge":
        return cls(endpoints=edge_key(i, j), colour=Colour(colour))


@dataclass(frozen=True)
class AuxGraph:
    """Ordered 2-edge-coloured graph on e_0 < e_1 < ... < e_{n-1}.

    The same pair may appear in both ``red`` and ``blue`` (a double edge).
    """

    instance: HamiltonianInstance = field(repr=False)
    red: frozenset[tuple[int, int]]
    blue: frozenset[tuple[int, int]]
    red_adj: tuple[int, ...] = field(compare=False, repr=False)
    blue_adj: tuple[int, ...] = field(compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.instance.n

    def adjacency(self, colour: Colour) -> tuple[int, ...]:
        return self.red_adj if colour is Colour.RED else self.blue_adj

    def edge_set(self, colour: Colour) -> frozenset[tuple[int, int]]:
        return self.red if colour is Colour.RED else self.blue

    def has_edge(self, i: int, j: int, colour: Colour) -> bool:
        return bool(self.adjacency(colour)[i] >> j & 1)

    def degree(self, i: int, colour: Colour) -> int:
        return self.adjacency(colour)[i].bit_count()

    def min_degree(self, colour: Colour) -> int:
        return min((self.degree(i, colour) for i in range(self.n)), default=0)

    def double_edges(self) -> frozenset[tuple[int, int]]:
        return self.red & self.blue

    def coloured_edges(self) -> list[ColouredEdge]:
        out = [ColouredEdge(e, Colour.RED) for e in sorted(self.red)]
        out += [ColouredEdge(e, Colour.BLUE) for e in sorted(self.blue)]
        return out


# ══════════════════════════════════════════════════════════════════════════════
# Alternating cycles and their unions
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class AltCycle:
    """Cyclic vertex sequence; ``colours[i]`` colours the edge vertices[i] -> vertices[i+1]."""

    vertices: tuple[int, ...]
    colours: tuple[Colour, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> Iterator[tuple[int, int, Colour]]:
        m = len(self.vertices)
        for i in range(m):
            yield self.vertices[i], self.vertices[(i + 1) % m], self.colours[i]

    def is_alternating(self) -> bool:
        m = len(self.vertices)
        if m < 2 or m % 2 or len(self.colours) != m:
            return False
        if len(set(self.vertices)) != m:
            return False
        return all(self.colours[i] is not self.colours[(i + 1) % m] for i in range(m))


@dataclass(frozen=True)
class AltCycleSystem:
    """Vertex-disjoint union of colour-alternating cycles, stored as its two
    colour classes (each a perfect matching on the vertex set)."""

    red: frozenset[tuple[int, int]]
    blue: frozenset[tuple[int, int]]

    @classmethod
    def empty(cls) -> "AltCycleSystem":
        return cls(red=frozenset(), blue=frozenset())

    @classmethod
    def from_cycles(cls, cycles: Iterable[AltCycle]) -> "AltCycleSystem":
        red: set[tuple[int, int]] = set()
        blue: set[tuple[int, int]] = set()
        for cyc in cycles:
            for a, b, colour in cyc.edges():
                (red if colour is Colour.RED else blue).add(edge_key(a, b))
        system = cls(red=frozenset(red), blue=frozenset(blue))
        system.validate()
        return system

    @cached_property
    def red_partner(self) -> dict[int, int]:
        return _partner_map(self.red, "red")

    @cached_property
    def blue_partner(self) -> dict[int, int]:
        return _partner_map(self.blue, "blue")

    def partner(self, v: int, colour: Colour) -> int:
        return (self.red_partner if colour is Colour.RED else self.blue_partner)[v]

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.red_partner))

    def __len__(self) -> int:
        return len(self.vertices)

    def validate(self) -> None:
        """Every vertex has exactly one red and one blue system edge."""
        if set(self.red_partner) != set(self.blue_partner):
            raise PatternError("system vertex missing a red or a blue edge")

    @property
    def no_double_edges(self) -> bool:
        return not (self.red & self.blue)

    def neighbour_free(self, n: int) -> bool:
        return first_neighbouring_pair(self.vertices, n) is None

    @cached_property
    def cycles(self) -> tuple[AltCycle, ...]:
        """Canonical decomposition: each cycle starts at its smallest vertex
        and leaves it along its red edge; cycles sorted by start vertex."""
        seen: set[int] = set()
        out: list[AltCycle] = []
        for start in self.vertices:
            if start in seen:
                continue
            verts = [start]
            colours = [Colour.RED]
            seen.add(start)
            cur, colour = self.red_partner[start], Colour.RED
            while cur != start:
                seen.add(cur)
                verts.append(cur)
                colour = colour.other
                colours.append(colour)
                cur = self.partner(cur, colour)
            out.append(AltCycle(tuple(verts), tuple(colours)))
        return tuple(out)

    def cycle_containing(self, v: int) -> int:
        for idx, cyc in enumerate(self.cycles):
            if v in cyc.vertices:
                return idx
        raise PatternError(f"vertex {v} not in system")

    def relabel(self, mapping: dict[int, int]) -> "AltCycleSystem":
        return AltCycleSystem(
            red=frozenset(edge_key(mapping[a], mapping[b]) for a, b in self.red),
            blue=frozenset(edge_key(mapping[a], mapping[b]) for a, b in self.blue),
        )


def _partner_map(pairs: Iterable[tuple[int, int]], colour: str) -> dict[int, int]:
    partner: dict[int, int] = {}
    for a, b in pairs:
        if a in partner or b in partner:
            raise PatternError(f"vertex with two {colour} system edges")
        partner[a] = b
        partner[b] = a
    return partner


def first_neighbouring_pair(vertices: Iterable[int], n: int) -> tuple[int, int] | None:
    """Smallest pair of neighbouring positions among ``vertices`` or None."""
    vs = sorted(set(vertices))
    for a, b in zip(vs, vs[1:]):
        if b - a == 1:
            return (a, b)
    if len(vs) >= 2 and vs[0] == 0 and vs[-1] == n - 1 and n > 2:
        return (vs[0], vs[-1])
    return None


@dataclass(frozen=True)
class AbstractPattern:
    """Ordered alternating-cycle system on abstract vertices 0..m-1.

    Index order is the embedding order. ``labels`` keep the fractional-index
    names (``s1``, ``s1+1/2``, ``s2+1/3`` ...), ``origin`` names the base-cycle
    vertex, and so the blow-up cluster, every pattern vertex descends from.
    """

    system: AltCycleSystem
    labels: tuple[str, ...]
    origin: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def cluster_loads(self) -> dict[int, int]:
        loads: dict[int, int] = {}
        for o in self.origin:
            loads[o] = loads.get(o, 0) + 1
        return loads


# ══════════════════════════════════════════════════════════════════════════════
# Search structures
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class PathDigraph:
    """Arc v -> u iff at least ``threshold`` vertices w have vw red and wu blue."""

    n: int
    threshold: int
    arcs: tuple[tuple[int, int], ...]
    witness_counts: np.ndarray | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "PathDigraph":
        clean = sorted({(v, u) for v, u in arcs if v != u})
        return cls(n=n, threshold=1, arcs=tuple(clean))

    @cached_property
    def out_adj(self) -> tuple[int, ...]:
        adj = [0] * self.n
        for v, u in self.arcs:
            adj[v] |= 1 << u
        return tuple(adj)

    def out_degree(self, v: int) -> int:
        return self.out_adj[v].bit_count()

    def successors(self, v: int) -> list[int]:
        return list(bits(self.out_adj[v]))

    def to_networkx(self) -> nx.DiGraph:
        D = nx.DiGraph()
        D.add_nodes_from(range(self.n))
        D.add_edges_from(self.arcs)
        return D


@dataclass(frozen=True)
class BlowupEmbedding:
    """Clusters of A realising the blow-up of an alternating cycle pattern.

    ``pattern`` lives on abstract vertices 0..L-1 and ``clusters[i]`` is the
    sorted set of A-positions standing for pattern vertex i.
    """

    pattern: AltCycle
    clusters: tuple[tuple[int, ...], ...]
    ordered: bool = False

    @property
    def length(self) -> int:
        return len(self.clusters)

    @property
    def cluster_size(self) -> int:
        return min((len(c) for c in self.clusters), default=0)

    def cluster_order(self) -> list[int]:
        """Cluster ids sorted by their smallest position."""
        return sorted(range(self.length), key=lambda i: self.clusters[i][0])

    def vertices(self) -> list[int]:
        return sorted(v for c in self.clusters for v in c)


@dataclass(frozen=True)
class SearchParams:
    """Constants of the many-alternating-cycles bound for a density gamma."""

    gamma: float
    k: int
    L: int
    K: int
    log10_c: float

    @property
    def c(self) -> float:
        # underflows to 0.0 for every practical gamma
        return 10.0 ** self.log10_c

    def witness_threshold(self, n: int) -> int:
        return max(1, math.ceil(self.gamma ** 2 * n / 2))
