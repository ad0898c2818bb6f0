"""
Instance Generators
───────────────────
Seeded instance generators (numpy default_rng, deterministic per seed):

    gen_random_hamiltonian – planted Hamilton cycle 1..n, min degree raised to ceil(delta n)
    gen_extremal           – cycle of length n-k+1 plus k-1 fully joined independent apexes
    gen_planted_blowup     – instance whose auxiliary graph contains a planted C(t)
    gen_random_digraph     – random digraph with fixed out-degree
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from app.core.config import PLANTED_PADDING
from app.core.errors import InfeasibleGeometryError, ParameterError
from app.models.auxiliary import BlowupEmbedding, Colour, PathDigraph
from app.models.graph import Graph, HamiltonianInstance, edge_key
from app.services.altcycle_search import abstract_cycle
from app.services.graph_core import validate_hamiltonian

logger = logging.getLogger(__name__)


# ══════════════════════════════════════════════════════════════════════════════
# Random Hamiltonian graphs
# ══════════════════════════════════════════════════════════════════════════════

def gen_random_hamiltonian(n: int, delta_frac: float, seed: int) -> HamiltonianInstance:
    """Add edges at the current minimum-degree vertex (lowest id on ties)
    to a uniformly chosen non-neighbour until min degree >= ceil(delta_frac n)."""
    if n < 3:
        raise ParameterError(f"n must be >= 3, got {n}")
    if not 0.0 < delta_frac < 1.0:
        raise ParameterError(f"delta_frac must lie in (0, 1), got {delta_frac}")
    target = math.ceil(round(delta_frac * n, 9))
    if target > n - 1:
        raise ParameterError(f"min degree {target} impossible on {n} vertices")

    rng = np.random.default_rng(seed)
    adj = [0] * n
    edges: set[tuple[int, int]] = set()

    def join(u: int, v: int) -> None:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        edges.add(edge_key(u, v))

    for i in range(n):
        join(i, (i + 1) % n)

    while True:
        degrees = [a.bit_count() for a in adj]
        v = int(np.argmin(degrees))
        if degrees[v] >= target:
            break
        others = [u for u in range(n) if u != v and not adj[v] >> u & 1]
        join(v, others[int(rng.integers(len(others)))])

    graph = Graph.from_edges(n, edges)
    return validate_hamiltonian(graph, range(n))


# ══════════════════════════════════════════════════════════════════════════════
# Extremal construction
# ══════════════════════════════════════════════════════════════════════════════

def _check_extremal(n: int, k: int) -> None:
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if n < 2 * k:
        raise ParameterError(f"extremal construction needs n >= 2k, got n={n}, k={k}")
    if n < 3:
        raise ParameterError(f"n must be >= 3, got {n}")


def gen_extremal(n: int, k: int) -> Graph:
    """
    Cycle c_0 .. c_{m-1} (m = n-k+1, ids 0..m-1) and independent apexes
    u_1 .. u_{k-1} (ids m..n-1) joined to every cycle vertex. Every cycle of
    a 2-factor meets an apex, so no 2-factor has k cycles; min degree k+1.
    """
    _check_extremal(n, k)
    m = n - k + 1
    edges = [(i, (i + 1) % m) for i in range(m)]
    edges += [(u, c) for u in range(m, n) for c in range(m)]
    return Graph.from_edges(n, edges)


def extremal_hamilton_order(n: int, k: int) -> tuple[int, ...]:
    """c_0, u_1, c_1, u_2, ..., u_{k-1}, c_{k-1}, c_k, ..., c_{m-1}."""
    _check_extremal(n, k)
    m = n - k + 1
    order = [0]
    for j in range(1, k):
        order += [m + j - 1, j]
    order += list(range(k, m))
    return tuple(order)


def gen_extremal_instance(n: int, k: int) -> HamiltonianInstance:
    return validate_hamiltonian(gen_extremal(n, k), extremal_hamilton_order(n, k))


# ══════════════════════════════════════════════════════════════════════════════
# Planted blow-ups
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class PlantedBlowup:
    instance: HamiltonianInstance
    certificate: BlowupEmbedding


def gen_planted_blowup(
    pattern_len: int,
    t: int,
    noise: float,
    seed: int,
    n: int | None = None,
    ordered: bool = False,
) -> PlantedBlowup:
    """
    Plant C(t) for the alternating cycle C of length ``pattern_len``.

    Clusters occupy the even positions 0, 2, ..., 2(Lt-1) of H = 0..n-1, so
    no two planted positions are neighbouring. Each cross pair (x, y) of a
    red pattern edge gets the inner edge {v_{x+1}, v_{y+1}}, of a blue one
    {v_x, v_y}. ``noise`` is the fraction of the remaining non-edges added.
    With ``ordered`` the clusters fill consecutive blocks in a random order.
    """
    if pattern_len < 4 or pattern_len % 2:
        raise ParameterError(f"pattern_len must be even and >= 4, got {pattern_len}")
    if t < 1:
        raise ParameterError(f"t must be >= 1, got {t}")
    if not 0.0 <= noise <= 1.0:
        raise ParameterError(f"noise must lie in [0, 1], got {noise}")

    slots_needed = pattern_len * t
    minimum = 2 * slots_needed + PLANTED_PADDING
    if n is None:
        n = minimum
    elif n < minimum:
        raise InfeasibleGeometryError(
            f"{pattern_len} clusters of size {t} need n >= {minimum}, got {n}"
        )

    rng = np.random.default_rng(seed)
    slots = [2 * i for i in range(slots_needed)]
    if ordered:
        block_order = [int(i) for i in rng.permutation(pattern_len)]
        clusters = [[] for _ in range(pattern_len)]
        for block, cluster in enumerate(block_order):
            clusters[cluster] = slots[block * t:(block + 1) * t]
    else:
        shuffled = [int(s) for s in rng.permutation(slots)]
        clusters = [sorted(shuffled[i * t:(i + 1) * t]) for i in range(pattern_len)]

    pattern = abstract_cycle(pattern_len)
    edges = {edge_key(i, (i + 1) % n) for i in range(n)}
    for a, b, colour in pattern.edges():
        for x in clusters[a]:
            for y in clusters[b]:
                if colour is Colour.RED:
                    edges.add(edge_key((x + 1) % n, (y + 1) % n))
                else:
                    edges.add(edge_key(x, y))

    if noise > 0:
        missing = [
            (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges
        ]
        extra = int(round(noise * len(missing)))
        if extra:
            for idx in sorted(int(i) for i in rng.choice(len(missing), size=extra, replace=False)):
                edges.add(missing[idx])

    instance = validate_hamiltonian(Graph.from_edges(n, edges), range(n))
    certificate = BlowupEmbedding(
        pattern=pattern,
        clusters=tuple(tuple(c) for c in clusters),
        ordered=ordered,
    )
    logger.debug("planted C_%d(%d) on n=%d with %d edges", pattern_len, t, n, len(edges))
    return PlantedBlowup(instance=instance, certificate=certificate)


# ══════════════════════════════════════════════════════════════════════════════
# Random digraphs
# ══════════════════════════════════════════════════════════════════════════════

def gen_random_digraph(n: int, out_degree: int, seed: int) -> PathDigraph:
    if not 0 <= out_degree <= n - 1:
        raise ParameterError(f"out_degree must lie in 0..{n - 1}, got {out_degree}")
    rng = np.random.default_rng(seed)
    arcs = []
    for v in range(n):
        others = [u for u in range(n) if u != v]
        for idx in rng.choice(len(others), size=out_degree, replace=False):
            arcs.append((v, others[int(idx)]))
    return PathDigraph.from_arcs(n, arcs)
