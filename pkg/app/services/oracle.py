"""
Oracle Service
──────────────
Brute-force ground truth on small graphs.

1. brute_force_two_factors – degree-saturating edge-subset backtracking
2. cycle_cover_counts      – independent enumerator over directed cycle covers
3. find_hamilton_cycle     – backtracking Hamilton-cycle search with a node budget
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

from app.core.config import HAMILTON_BUDGET, SECOND_ENUMERATOR_MAX_N, oracle_cap
from app.core.errors import HamiltonCycleNotFound, OracleCapError
from app.models.graph import Graph, TwoFactor, bits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    n: int
    achievable: frozenset[int]
    witnesses: dict[int, TwoFactor] = field(default_factory=dict)
    exhaustive: bool = True


def _cycles_of(nbrs: list[list[int]]) -> list[list[int]]:
    n = len(nbrs)
    seen = [False] * n
    cycles: list[list[int]] = []
    for start in range(n):
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
    return cycles


def brute_force_two_factors(graph: Graph, n_cap: int | None = None) -> OracleResult:
    """
    Exact set of achievable cycle counts of 2-factors of ``graph``.

    Vertices are completed in id order: vertex v takes its missing degree
    from neighbours u > v that still have degree < 2. The search stops once
    every count 1..n//3 has a witness.
    """
    cap = oracle_cap() if n_cap is None else n_cap
    n = graph.n
    if n > cap:
        raise OracleCapError(f"oracle capped at n <= {cap}, got n = {n}")
    if n < 3:
        return OracleResult(n=n, achievable=frozenset())

    upper = [[u for u in graph.neighbours(v) if u > v] for v in range(n)]
    deg = [0] * n
    nbrs: list[list[int]] = [[] for _ in range(n)]
    witnesses: dict[int, TwoFactor] = {}
    everything = n // 3

    def record() -> bool:
        count = len(_cycles_of(nbrs))
        if count not in witnesses:
            witnesses[count] = TwoFactor.from_cycles(_cycles_of(nbrs))
        return len(witnesses) == everything

    def complete(v: int) -> bool:
        if v == n:
            return record()
        need = 2 - deg[v]
        if need == 0:
            return complete(v + 1)
        free = [u for u in upper[v] if deg[u] < 2]
        if len(free) < need:
            return False
        for picks in combinations(free, need):
            for u in picks:
                deg[u] += 1
                nbrs[u].append(v)
                nbrs[v].append(u)
            deg[v] = 2
            done = complete(v + 1)
            deg[v] = 2 - need
            for u in picks:
                deg[u] -= 1
                nbrs[u].pop()
                nbrs[v].pop()
            if done:
                return True
        return False

    complete(0)
    logger.debug("oracle n=%d achievable=%s", n, sorted(witnesses))
    return OracleResult(n=n, achievable=frozenset(witnesses), witnesses=witnesses)


def cycle_cover_counts(graph: Graph, n_cap: int = SECOND_ENUMERATOR_MAX_N) -> frozenset[int]:
    """
    Achievable cycle counts via successor assignments: a permutation with
    succ(v) adjacent to v and no 2-cycles. Every 2-factor with c cycles shows
    up as 2^c such permutations.
    """
    n = graph.n
    if n > n_cap:
        raise OracleCapError(f"cycle-cover enumerator capped at n <= {n_cap}, got n = {n}")
    if n < 3:
        return frozenset()
    succ = [-1] * n
    found: set[int] = set()
    everything = n // 3

    def count_cycles() -> int:
        seen = [False] * n
        cycles = 0
        for s in range(n):
            if not seen[s]:
                cycles += 1
                v = s
                while not seen[v]:
                    seen[v] = True
                    v = succ[v]
        return cycles

    def assign(v: int, taken: int) -> bool:
        if v == n:
            found.add(count_cycles())
            return len(found) == everything
        for u in bits(graph.adj[v] & ~taken):
            if u < v and succ[u] == v:
                continue
            succ[v] = u
            if assign(v + 1, taken | 1 << u):
                return True
        succ[v] = -1
        return False

    assign(0, 0)
    return frozenset(found)


def find_hamilton_cycle(graph: Graph, budget: int = HAMILTON_BUDGET) -> tuple[int, ...]:
    """
    Backtracking from vertex 0, preferring neighbours with the fewest
    unvisited neighbours (ties by id). Failure after a complete search sets
    ``exhaustive``; running out of budget does not certify anything.
    """
    n = graph.n
    if n < 3:
        raise HamiltonCycleNotFound("no Hamilton cycle found (exhaustive)", exhaustive=True)
    if graph.min_degree < 2:
        raise HamiltonCycleNotFound("no Hamilton cycle found (exhaustive)", exhaustive=True)

    adj = graph.adj
    path = [0]
    spent = [0]

    def extend(visited: int) -> bool:
        last = path[-1]
        if len(path) == n:
            return bool(adj[last] & 1)
        options = sorted(
            bits(adj[last] & ~visited),
            key=lambda u: ((adj[u] & ~visited).bit_count(), u),
        )
        for u in options:
            spent[0] += 1
            if spent[0] > budget:
                raise HamiltonCycleNotFound(
                    f"no Hamilton cycle found within {budget} expansions", exhaustive=False
                )
            path.append(u)
            if extend(visited | 1 << u):
                return True
            path.pop()
        return False

    if not extend(1):
        raise HamiltonCycleNotFound("no Hamilton cycle found (exhaustive)", exhaustive=True)
    logger.debug("Hamilton cycle found after %d expansions", spent[0])
    return tuple(path)
