"""
Alternating-Cycle Search Service
────────────────────────────────
Finds colour-alternating cycles and their blow-ups inside an AuxGraph.

1. Path digraph        – arc v -> u when enough red-blue paths v-w-u exist
2. Directed cycles     – short cycles of the path digraph (networkx / DFS)
3. Expansion           – directed cycle -> alternating cycle via distinct witnesses
4. Blow-up search      – exact backtracking (n <= EXACT_SEARCH_MAX_N) or greedy growth
5. Ordering            – recursive median split into a consistently ordered blow-up
6. Thinning            – drop every second vertex of each run of consecutive positions

Tie-breaking is lowest index first everywhere; budgets count node expansions.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import networkx as nx
import numpy as np

from app.core.config import (
    DEFAULT_MAX_CLUSTER,
    DEFAULT_MAX_PATTERN_LEN,
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_WITNESS_THRESHOLD,
    EXACT_SEARCH_MAX_N,
)
from app.core.errors import (
    AlternatingCycleAbsent,
    BlowupOrderingError,
    ParameterError,
    PipelineInvariantError,
    SearchBudgetExhausted,
    ThinningError,
    WitnessExhausted,
)
from app.models.auxiliary import (
    AltCycle,
    AuxGraph,
    BlowupEmbedding,
    Colour,
    PathDigraph,
    SearchParams,
    first_neighbouring_pair,
)
from app.models.graph import bits

logger = logging.getLogger(__name__)


class _Budget:
    """Node-expansion counter shared across one search call."""

    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise SearchBudgetExhausted(
                f"search budget of {self.limit} expansions exhausted", self.used
            )


# ══════════════════════════════════════════════════════════════════════════════
# Search constants
# ══════════════════════════════════════════════════════════════════════════════

def lemma_params(gamma: float) -> SearchParams:
    """
    k = ceil((8/g^2) ln(8/g^2)), L = 2k, K = ceil(8k/g^2),
    c = (g/2)^(2k) / (4 k^(k+1)), kept as log10 since it underflows.
    """
    if not 0 < gamma < 1:
        raise ParameterError(f"gamma must lie in (0, 1), got {gamma}")
    x = 8.0 / gamma ** 2
    k = math.ceil(x * math.log(x))
    K = math.ceil(8 * k / gamma ** 2)
    log10_c = 2 * k * math.log10(gamma / 2) - math.log10(4) - (k + 1) * math.log10(k)
    return SearchParams(gamma=gamma, k=k, L=2 * k, K=K, log10_c=log10_c)


# ══════════════════════════════════════════════════════════════════════════════
# 1. PATH DIGRAPH
# ══════════════════════════════════════════════════════════════════════════════

def _colour_matrix(aux: AuxGraph, colour: Colour) -> np.ndarray:
    M = np.zeros((aux.n, aux.n), dtype=np.int64)
    pairs = list(aux.edge_set(colour))
    if pairs:
        idx = np.array(pairs, dtype=np.int64)
        M[idx[:, 0], idx[:, 1]] = 1
        M[idx[:, 1], idx[:, 0]] = 1
    return M


def build_path_digraph(aux: AuxGraph, threshold: int = DEFAULT_WITNESS_THRESHOLD) -> PathDigraph:
    """Witness counts W = R @ B, i.e. W[v, u] = #{w : vw red, wu blue}; loops dropped."""
    if threshold < 1:
        raise ParameterError(f"threshold must be >= 1, got {threshold}")
    W = _colour_matrix(aux, Colour.RED) @ _colour_matrix(aux, Colour.BLUE)
    np.fill_diagonal(W, 0)
    arcs = tuple((int(v), int(u)) for v, u in np.argwhere(W >= threshold))
    logger.debug("path digraph: n=%d threshold=%d arcs=%d", aux.n, threshold, len(arcs))
    return PathDigraph(n=aux.n, threshold=threshold, arcs=arcs, witness_counts=W)


def witnesses(aux: AuxGraph, v: int, u: int) -> list[int]:
    return list(bits(aux.red_adj[v] & aux.blue_adj[u]))


# ══════════════════════════════════════════════════════════════════════════════
# 2. DIRECTED CYCLES
# ══════════════════════════════════════════════════════════════════════════════

def _rotate_min_first(cycle: Sequence[int]) -> tuple[int, ...]:
    i = cycle.index(min(cycle))
    return tuple(cycle[i:]) + tuple(cycle[:i])


def enumerate_short_directed_cycles(d: PathDigraph, max_len: int) -> list[tuple[int, ...]]:
    """All simple directed cycles of length 2..max_len, smallest vertex first,
    sorted by (length, vertex sequence)."""
    if max_len < 2:
        raise ParameterError(f"max_len must be >= 2, got {max_len}")
    found = {
        _rotate_min_first(c)
        for c in nx.simple_cycles(d.to_networkx(), length_bound=max_len)
        if len(c) >= 2
    }
    return sorted(found, key=lambda c: (len(c), c))


def iter_directed_cycles(d: PathDigraph, length: int) -> Iterator[tuple[int, ...]]:
    """Lazily yield the directed cycles of exactly ``length`` in lexicographic order."""
    out_adj = d.out_adj
    path: list[int] = []

    def extend(start: int, visited: int) -> Iterator[tuple[int, ...]]:
        last = path[-1]
        if len(path) == length:
            if out_adj[last] >> start & 1:
                yield tuple(path)
            return
        higher = out_adj[last] & ~visited & ~((1 << (start + 1)) - 1)
        for x in bits(higher):
            path.append(x)
            yield from extend(start, visited | 1 << x)
            path.pop()

    for s in range(d.n):
        path.append(s)
        yield from extend(s, 1 << s)
        path.pop()


@dataclass(frozen=True)
class DigraphLemmaCheck:
    k: int
    required_out_degree: int
    min_out_degree: int
    counts: dict[int, int] = field(default_factory=dict)
    meeting_length: int | None = None

    @property
    def hypothesis_met(self) -> bool:
        return self.min_out_degree >= self.required_out_degree

    @property
    def holds(self) -> bool:
        return self.meeting_length is not None


def cycle_count_bound(n: int, length: int, k: int) -> float:
    return n ** length / (2 * k ** (length + 1))


def digraph_lemma_check(d: PathDigraph, k: int) -> DigraphLemmaCheck:
    """Count directed cycles of each length 2..k until one meets n^l / (2 k^(l+1))."""
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    required = math.ceil(d.n * math.log(2 * k) / (k - 1))
    min_out = min((d.out_degree(v) for v in range(d.n)), default=0)
    counts: dict[int, int] = {}
    for length in range(2, k + 1):
        counts[length] = sum(1 for _ in iter_directed_cycles(d, length))
        if counts[length] >= cycle_count_bound(d.n, length, k):
            return DigraphLemmaCheck(k, required, min_out, counts, length)
    return DigraphLemmaCheck(k, required, min_out, counts, None)


# ══════════════════════════════════════════════════════════════════════════════
# 3. EXPANSION TO ALTERNATING CYCLES
# ══════════════════════════════════════════════════════════════════════════════

def alternating_colours(length: int) -> tuple[Colour, ...]:
    return tuple(Colour.RED if i % 2 == 0 else Colour.BLUE for i in range(length))


def abstract_cycle(length: int) -> AltCycle:
    """The pattern cycle 0, 1, ..., length-1 with edge (i, i+1) red for even i."""
    return AltCycle(tuple(range(length)), alternating_colours(length))


def check_alt_cycle(aux: AuxGraph, cycle: AltCycle) -> bool:
    """Alternation plus host-edge check."""
    if not cycle.is_alternating():
        return False
    n = aux.n
    if any(not 0 <= v < n for v in cycle.vertices):
        return False
    return all(aux.has_edge(a, b, colour) for a, b, colour in cycle.edges())


def expand_to_alternating(
    aux: AuxGraph,
    dcycle: Sequence[int],
    used: Iterable[int] = (),
    budget: _Budget | None = None,
) -> AltCycle:
    """
    Replace each arc v_i -> v_{i+1} by a red-blue path v_i w_i v_{i+1}.

    Witnesses are distinct, avoid ``used`` and the cycle itself, and are
    chosen lowest first with backtracking.
    """
    length = len(dcycle)
    blocked = 0
    for v in list(used) + list(dcycle):
        blocked |= 1 << v
    chosen: list[int] = []
    deepest = [0]

    def assign(i: int, blocked: int) -> bool:
        if i == length:
            return True
        v, u = dcycle[i], dcycle[(i + 1) % length]
        deepest[0] = max(deepest[0], i)
        for w in bits(aux.red_adj[v] & aux.blue_adj[u] & ~blocked):
            if budget is not None:
                budget.spend()
            chosen.append(w)
            if assign(i + 1, blocked | 1 << w):
                return True
            chosen.pop()
        return False

    if not assign(0, blocked):
        i = deepest[0]
        arc = (dcycle[i], dcycle[(i + 1) % length])
        raise WitnessExhausted(f"no unused witness for arc e{arc[0] + 1}->e{arc[1] + 1}", arc)

    vertices: list[int] = []
    for v, w in zip(dcycle, chosen):
        vertices += [v, w]
    return AltCycle(tuple(vertices), alternating_colours(2 * length))


def shortest_alternating_cycle(
    aux: AuxGraph,
    digraph: PathDigraph,
    max_len: int,
    budget: _Budget,
) -> AltCycle:
    """Shortest, then lexicographically smallest, expandable directed cycle."""
    for half in range(2, max_len // 2 + 1):
        for dcycle in iter_directed_cycles(digraph, half):
            budget.spend()
            try:
                return expand_to_alternating(aux, dcycle, budget=budget)
            except WitnessExhausted:
                continue
    raise AlternatingCycleAbsent(f"no alternating cycle of length 4..{max_len}")


# ══════════════════════════════════════════════════════════════════════════════
# 4. BLOW-UP SEARCH
# ══════════════════════════════════════════════════════════════════════════════

def _search_exact(aux: AuxGraph, length: int, t: int, budget: _Budget) -> list[list[int]] | None:
    """
    Backtracking over cluster assignments, round-robin over clusters.

    cand[j] holds the vertices still joined in the right colours to every
    chosen vertex of the clusters adjacent to j. Picks increase inside a
    cluster and the first pick of every even cluster exceeds that of cluster 0.
    """
    colours = alternating_colours(length)
    to_prev = [aux.adjacency(colours[(i - 1) % length]) for i in range(length)]
    to_next = [aux.adjacency(colours[i]) for i in range(length)]
    clusters: list[list[int]] = [[] for _ in range(length)]
    total = length * t

    def dfs(step: int, cand: list[int]) -> bool:
        if step == total:
            return True
        i = step % length
        mask = cand[i]
        if clusters[i]:
            mask &= ~((1 << (clusters[i][-1] + 1)) - 1)
        elif i and i % 2 == 0:
            mask &= ~((1 << (clusters[0][0] + 1)) - 1)
        for x in bits(mask):
            budget.spend()
            bit = 1 << x
            nxt = [c & ~bit for c in cand]
            nxt[(i - 1) % length] &= to_prev[i][x]
            nxt[(i + 1) % length] &= to_next[i][x]
            clusters[i].append(x)
            feasible = (nxt[i] >> (x + 1)).bit_count() >= t - len(clusters[i]) and all(
                nxt[j].bit_count() >= t - len(clusters[j]) for j in range(length)
            )
            if feasible and dfs(step + 1, nxt):
                return True
            clusters[i].pop()
        return False

    full = (1 << aux.n) - 1
    return clusters if dfs(0, [full] * length) else None


def _search_greedy(
    aux: AuxGraph,
    digraph: PathDigraph,
    length: int,
    t: int,
    budget: _Budget,
) -> list[list[int]] | None:
    """Grow clusters around successive base cycles by common-neighbourhood intersection."""
    colours = alternating_colours(length)
    full = (1 << aux.n) - 1
    for dcycle in iter_directed_cycles(digraph, length // 2):
        budget.spend()
        try:
            base = expand_to_alternating(aux, dcycle, budget=budget)
        except WitnessExhausted:
            continue

        clusters = [[v] for v in base.vertices]
        used = 0
        for v in base.vertices:
            used |= 1 << v
        cand = []
        for i in range(length):
            prev, nxt = base.vertices[(i - 1) % length], base.vertices[(i + 1) % length]
            mask = aux.adjacency(colours[(i - 1) % length])[prev] & aux.adjacency(colours[i])[nxt]
            cand.append(mask & full & ~used)

        stalled = False
        for _ in range(t - 1):
            for i in range(length):
                budget.spend()
                mask = cand[i] & ~used
                if not mask:
                    stalled = True
                    break
                x = (mask & -mask).bit_length() - 1
                clusters[i].append(x)
                used |= 1 << x
                cand[(i - 1) % length] &= aux.adjacency(colours[(i - 1) % length])[x]
                cand[(i + 1) % length] &= aux.adjacency(colours[i])[x]
            if stalled:
                break
        if not stalled:
            return clusters
    return None


def check_blowup(aux: AuxGraph, embedding: BlowupEmbedding) -> None:
    """Raise PipelineInvariantError unless clusters are disjoint and every
    cross pair of adjacent clusters carries the pattern edge's colour."""
    seen: set[int] = set()
    for cluster in embedding.clusters:
        if seen & set(cluster):
            raise PipelineInvariantError("blow-up clusters overlap")
        seen |= set(cluster)
    for a, b, colour in embedding.pattern.edges():
        for x in embedding.clusters[a]:
            for y in embedding.clusters[b]:
                if not aux.has_edge(x, y, colour):
                    raise PipelineInvariantError(
                        f"missing {colour.value} edge {{e{x + 1},e{y + 1}}} in blow-up"
                    )
    if embedding.ordered and not is_consistently_ordered(embedding):
        raise PipelineInvariantError("blow-up flagged ordered but clusters interleave")


def find_alternating_cycle_blowup(
    aux: AuxGraph,
    t: int = 1,
    max_len: int = DEFAULT_MAX_PATTERN_LEN,
    budget: int = DEFAULT_SEARCH_BUDGET,
    threshold: int = DEFAULT_WITNESS_THRESHOLD,
) -> BlowupEmbedding:
    """
    Blow-up C(t) of a double-edge-free alternating cycle C, |C| in 4..max_len.

    The shortest alternating cycle fixes the first length tried; longer
    lengths follow until one admits clusters of size t.
    """
    if t < 1:
        raise ParameterError(f"t must be >= 1, got {t}")
    if max_len < 4 or max_len % 2:
        raise ParameterError(f"max_len must be even and >= 4, got {max_len}")
    if not aux.red or not aux.blue:
        raise AlternatingCycleAbsent("auxiliary graph lacks red or blue edges")

    digraph = build_path_digraph(aux, threshold)
    if not digraph.arcs:
        raise AlternatingCycleAbsent("path digraph has no arcs")

    counter = _Budget(budget)
    base = shortest_alternating_cycle(aux, digraph, max_len, counter)
    exact = aux.n <= EXACT_SEARCH_MAX_N

    for length in range(len(base), max_len + 1, 2):
        if exact:
            clusters = _search_exact(aux, length, t, counter)
        else:
            clusters = _search_greedy(aux, digraph, length, t, counter)
        if clusters is None:
            logger.debug("no blow-up of length %d with t=%d", length, t)
            continue
        embedding = BlowupEmbedding(
            pattern=abstract_cycle(length),
            clusters=tuple(tuple(sorted(c)) for c in clusters),
        )
        check_blowup(aux, embedding)
        logger.debug("blow-up: length=%d t=%d expansions=%d", length, t, counter.used)
        return embedding

    raise AlternatingCycleAbsent(
        f"no alternating cycle blow-up with cluster size {t} of length {len(base)}..{max_len}"
    )


@dataclass(frozen=True)
class BlowupAttempt:
    t: int
    outcome: str            # "found" | "absent" | "budget"
    expansions: int = 0


@dataclass(frozen=True)
class LargestBlowup:
    embedding: BlowupEmbedding
    attempts: tuple[BlowupAttempt, ...]


def find_largest_blowup(
    aux: AuxGraph,
    max_t: int = DEFAULT_MAX_CLUSTER,
    max_len: int = DEFAULT_MAX_PATTERN_LEN,
    budget: int = DEFAULT_SEARCH_BUDGET,
    threshold: int = DEFAULT_WITNESS_THRESHOLD,
) -> LargestBlowup:
    """Try t = 1, 2, ... and keep the last success; failure at t = 1 propagates."""
    best: BlowupEmbedding | None = None
    attempts: list[BlowupAttempt] = []
    for t in range(1, max_t + 1):
        try:
            emb = find_alternating_cycle_blowup(aux, t, max_len, budget, threshold)
        except AlternatingCycleAbsent:
            if best is None:
                raise
            attempts.append(BlowupAttempt(t, "absent"))
            break
        except SearchBudgetExhausted as exc:
            if best is None:
                raise
            logger.warning("blow-up search for t=%d exhausted its budget", t)
            attempts.append(BlowupAttempt(t, "budget", exc.expansions))
            break
        attempts.append(BlowupAttempt(t, "found"))
        best = emb
    assert best is not None
    return LargestBlowup(best, tuple(attempts))


# ══════════════════════════════════════════════════════════════════════════════
# 5. ORDERING
# ══════════════════════════════════════════════════════════════════════════════

def is_consistently_ordered(embedding: BlowupEmbedding) -> bool:
    """All-pairs check: clusters occupy disjoint intervals of the aux order."""
    clusters = [c for c in embedding.clusters if c]
    for a in range(len(clusters)):
        for b in range(a + 1, len(clusters)):
            A, B = clusters[a], clusters[b]
            if not (max(A) < min(B) or max(B) < min(A)):
                return False
    return True


def _intervals_ordered(clusters: dict[int, list[int]]) -> bool:
    spans = sorted((c[0], c[-1]) for c in clusters.values())
    return all(prev[1] < nxt[0] for prev, nxt in zip(spans, spans[1:]))


def order_blowup(embedding: BlowupEmbedding, t_target: int) -> BlowupEmbedding:
    """
    Recursive median split.

    At each level the remaining cluster with the smallest median keeps its
    elements up to and including the median and is fixed; every other cluster
    keeps the elements strictly above its own median. The median of s
    elements is the ((s-1)//2)-th smallest. A level whose clusters already sit
    in disjoint ordered intervals finishes immediately.
    """
    if t_target < 1:
        raise ParameterError(f"t_target must be >= 1, got {t_target}")
    remaining = {i: sorted(c) for i, c in enumerate(embedding.clusters)}
    fixed: dict[int, list[int]] = {}
    level = 0

    while remaining:
        short = [i for i, c in remaining.items() if len(c) < t_target]
        if short:
            raise BlowupOrderingError(
                f"cluster {short[0]} shrank below {t_target} at level {level}", level
            )
        if len(remaining) == 1 or _intervals_ordered(remaining):
            for i, c in remaining.items():
                fixed[i] = c[:t_target]
            break

        medians = {i: c[(len(c) - 1) // 2] for i, c in remaining.items()}
        low = min(remaining, key=lambda i: (medians[i], i))
        c = remaining.pop(low)
        fixed[low] = c[: (len(c) - 1) // 2 + 1][:t_target]
        if len(fixed[low]) < t_target:
            raise BlowupOrderingError(
                f"cluster {low} keeps fewer than {t_target} vertices at level {level}", level
            )
        for i, c in remaining.items():
            remaining[i] = c[(len(c) - 1) // 2 + 1:]
        level += 1
        logger.debug("median split level %d fixed cluster %d", level, low)

    out = BlowupEmbedding(
        pattern=embedding.pattern,
        clusters=tuple(tuple(fixed[i]) for i in range(embedding.length)),
        ordered=True,
    )
    if not is_consistently_ordered(out):
        raise PipelineInvariantError("median split produced interleaved clusters")
    return out


# ══════════════════════════════════════════════════════════════════════════════
# 6. THINNING
# ══════════════════════════════════════════════════════════════════════════════

def _runs(positions: list[int], n: int) -> list[list[int]]:
    """Maximal runs of cyclically consecutive positions, each in cyclic order."""
    if not positions:
        return []
    members = set(positions)
    if len(members) == n:
        return [list(range(n))]
    runs: list[list[int]] = []
    for p in positions:
        if (p - 1) % n in members:
            continue
        run = [p]
        q = (p + 1) % n
        while q in members:
            run.append(q)
            q = (q + 1) % n
        runs.append(run)
    return runs


def thin_non_neighbouring(embedding: BlowupEmbedding, n: int) -> BlowupEmbedding:
    """
    Keep the 1st, 3rd, 5th ... vertex of every maximal run of consecutive
    positions in the union of the clusters, then cut every cluster to the
    common minimum size (lowest vertices kept). Residual neighbouring pairs
    lose their smaller vertex.
    """
    owner = {v: i for i, c in enumerate(embedding.clusters) for v in c}
    keep: set[int] = set()
    for run in _runs(sorted(owner), n):
        keep.update(run[::2])

    clusters = [sorted(v for v in c if v in keep) for c in embedding.clusters]
    while True:
        if any(not c for c in clusters):
            raise ThinningError("a cluster emptied during thinning")
        size = min(len(c) for c in clusters)
        clusters = [c[:size] for c in clusters]
        pair = first_neighbouring_pair((v for c in clusters for v in c), n)
        if pair is None:
            break
        victim = pair[0]
        clusters = [[v for v in c if v != victim] for c in clusters]

    return BlowupEmbedding(
        pattern=embedding.pattern,
        clusters=tuple(tuple(c) for c in clusters),
        ordered=embedding.ordered,
    )


# ══════════════════════════════════════════════════════════════════════════════
# 7. SINGLE ALTERNATING CYCLES
# ══════════════════════════════════════════════════════════════════════════════

def _neighbour_masks(n: int) -> list[int]:
    return [(1 << ((v - 1) % n)) | (1 << ((v + 1) % n)) for v in range(n)]


def iter_alternating_cycles(
    aux: AuxGraph,
    length: int,
    neighbour_free: bool = False,
    budget: _Budget | None = None,
) -> Iterator[AltCycle]:
    """
    Every alternating cycle of exactly ``length`` once: it starts at its
    smallest vertex and leaves it along its red edge. Length 2 means a double
    edge. With ``neighbour_free`` no two cycle vertices are neighbouring.
    """
    if length < 2 or length % 2:
        raise ParameterError(f"alternating cycle length must be even and >= 2, got {length}")
    n = aux.n
    nb = _neighbour_masks(n)
    colours = alternating_colours(length)
    path: list[int] = []

    def extend(start: int, blocked: int) -> Iterator[AltCycle]:
        last = path[-1]
        if len(path) == length:
            if aux.blue_adj[last] >> start & 1:
                yield AltCycle(tuple(path), colours)
            return
        colour = colours[len(path) - 1]
        for x in bits(aux.adjacency(colour)[last] & ~blocked):
            if budget is not None:
                budget.spend()
            path.append(x)
            yield from extend(start, blocked | 1 << x | (nb[x] if neighbour_free else 0))
            path.pop()

    for s in range(n):
        below = (1 << (s + 1)) - 1
        path.append(s)
        yield from extend(s, below | (nb[s] if neighbour_free else 0))
        path.pop()
