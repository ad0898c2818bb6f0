"""
Path digraph, directed cycles, expansion, blow-up search, ordering and thinning.
"""

from __future__ import annotations

import math
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.errors import (
    AlternatingCycleAbsent,
    BlowupOrderingError,
    ParameterError,
    PipelineInvariantError,
    ThinningError,
    WitnessExhausted,
)
from app.models.auxiliary import AltCycle, BlowupEmbedding, Colour, PathDigraph, first_neighbouring_pair
from app.models.graph import edge_key
from app.services.altcycle_search import (
    abstract_cycle,
    build_path_digraph,
    check_alt_cycle,
    check_blowup,
    cycle_count_bound,
    digraph_lemma_check,
    enumerate_short_directed_cycles,
    expand_to_alternating,
    find_alternating_cycle_blowup,
    find_largest_blowup,
    is_consistently_ordered,
    iter_alternating_cycles,
    iter_directed_cycles,
    lemma_params,
    order_blowup,
    thin_non_neighbouring,
    witnesses,
)
from app.services.aux_graph import build_auxiliary
from app.services.generators import gen_planted_blowup, gen_random_digraph, gen_random_hamiltonian
from tests.builders import complete_instance, cycle_instance, hamiltonian_instances
from tests.settings import SLOW_SETTINGS, STANDARD_SETTINGS

R, B = Colour.RED, Colour.BLUE


def _embedding(*clusters: tuple[int, ...]) -> BlowupEmbedding:
    return BlowupEmbedding(pattern=abstract_cycle(2 * ((len(clusters) + 1) // 2)), clusters=clusters)


# ── Constants ─────────────────────────────────────────────────────────────────

def test_lemma_params_at_half():
    p = lemma_params(0.5)
    assert (p.k, p.L, p.K) == (111, 222, 3552)
    assert p.c == 0.0
    assert p.log10_c < -300
    assert p.witness_threshold(100) == math.ceil(0.25 * 100 / 2)


@pytest.mark.parametrize("gamma", [0.0, 1.0, -0.2])
def test_lemma_params_rejects_gamma(gamma):
    with pytest.raises(ParameterError):
        lemma_params(gamma)


# ── Path digraph and directed cycles ──────────────────────────────────────────

def test_short_cycles_of_complete_digraph():
    d = PathDigraph.from_arcs(3, [(a, b) for a in range(3) for b in range(3)])
    assert enumerate_short_directed_cycles(d, 3) == [(0, 1), (0, 2), (1, 2), (0, 1, 2), (0, 2, 1)]
    assert list(iter_directed_cycles(d, 3)) == [(0, 1, 2), (0, 2, 1)]
    with pytest.raises(ParameterError):
        enumerate_short_directed_cycles(d, 1)


def test_path_digraph_of_complete_graph():
    aux = build_auxiliary(complete_instance(8))
    d = build_path_digraph(aux)
    assert (0, 4) in d.arcs and (4, 0) in d.arcs
    assert all(v != u for v, u in d.arcs)
    assert witnesses(aux, 0, 4) == [2, 6]
    assert int(d.witness_counts[0, 4]) == 2


def test_path_digraph_threshold():
    aux = build_auxiliary(complete_instance(8))
    assert build_path_digraph(aux, threshold=3).arcs
    assert not build_path_digraph(aux, threshold=5).arcs
    with pytest.raises(ParameterError):
        build_path_digraph(aux, threshold=0)


def test_digraph_lemma_check_on_complete_digraph():
    d = PathDigraph.from_arcs(4, [(a, b) for a in range(4) for b in range(4)])
    check = digraph_lemma_check(d, 2)
    assert check.counts == {2: 6}
    assert check.meeting_length == 2 and check.holds
    assert check.required_out_degree == 6
    assert not check.hypothesis_met
    assert cycle_count_bound(4, 2, 2) == 1.0


def test_random_digraph_out_degree():
    d = gen_random_digraph(7, 3, seed=5)
    assert all(d.out_degree(v) == 3 for v in range(7))
    assert gen_random_digraph(7, 3, seed=5) == d


@pytest.mark.parametrize("n, delta, seed", [(20, 0.3, 0), (37, 0.4, 1), (60, 0.3, 2)])
def test_witness_counts_match_triple_loop(n, delta, seed):
    aux = build_auxiliary(gen_random_hamiltonian(n, delta, seed))
    red, blue = aux.edge_set(R), aux.edge_set(B)
    counts = {
        (v, u): sum(1 for w in range(n) if edge_key(v, w) in red and edge_key(w, u) in blue)
        for v in range(n)
        for u in range(n)
        if v != u
    }
    for threshold in (1, 3):
        d = build_path_digraph(aux, threshold=threshold)
        assert set(d.arcs) == {arc for arc, c in counts.items() if c >= threshold}
    assert all(int(d.witness_counts[v, u]) == c for (v, u), c in counts.items())


def _cycles_by_permutation(d: PathDigraph, max_len: int) -> list[tuple[int, ...]]:
    arcs = set(d.arcs)
    found = []
    for length in range(2, max_len + 1):
        for seq in permutations(range(d.n), length):
            if seq[0] != min(seq):
                continue
            if all((seq[i], seq[(i + 1) % length]) in arcs for i in range(length)):
                found.append(seq)
    return sorted(found, key=lambda c: (len(c), c))


@given(
    st.integers(min_value=2, max_value=9).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.integers(min_value=0, max_value=n - 1),
            st.integers(min_value=2, max_value=min(n, 5)),
            st.integers(min_value=0, max_value=2**16),
        )
    )
)
@SLOW_SETTINGS
def test_short_cycles_match_permutation_enumeration(case):
    n, out_degree, max_len, seed = case
    d = gen_random_digraph(n, out_degree, seed)
    assert enumerate_short_directed_cycles(d, max_len) == _cycles_by_permutation(d, max_len)
    for length in range(2, max_len + 1):
        expected = [c for c in _cycles_by_permutation(d, length) if len(c) == length]
        assert list(iter_directed_cycles(d, length)) == expected


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_cycle_count_bound_under_out_degree_hypothesis(seed):
    n, k = 30, 3
    required = math.ceil(n * math.log(2 * k) / (k - 1))
    check = digraph_lemma_check(gen_random_digraph(n, required, seed), k)
    assert check.required_out_degree == required == 27
    assert check.hypothesis_met
    assert check.holds, check.counts
    length = check.meeting_length
    assert check.counts[length] >= cycle_count_bound(n, length, k)


# ── Expansion ─────────────────────────────────────────────────────────────────

class TestExpandToAlternating:
    def test_lowest_witnesses(self):
        aux = build_auxiliary(complete_instance(8))
        cycle = expand_to_alternating(aux, (0, 4))
        assert cycle == AltCycle((0, 2, 4, 6), (R, B, R, B))
        assert check_alt_cycle(aux, cycle)

    def test_used_vertices_exhaust_witnesses(self):
        aux = build_auxiliary(complete_instance(8))
        with pytest.raises(WitnessExhausted) as info:
            expand_to_alternating(aux, (0, 4), used={6})
        assert info.value.arc == (4, 0)


def test_check_alt_cycle_rejects_missing_edge(c6_chorded):
    aux = build_auxiliary(c6_chorded)
    assert check_alt_cycle(aux, AltCycle((0, 2), (R, B)))
    assert not check_alt_cycle(aux, AltCycle((1, 3), (R, B)))
    assert not check_alt_cycle(aux, AltCycle((0, 2), (R, R)))


# ── Single alternating cycles ─────────────────────────────────────────────────

def test_double_edges_are_two_cycles(k4, c6_chorded):
    assert list(iter_alternating_cycles(build_auxiliary(c6_chorded), 2)) == [AltCycle((0, 2), (R, B))]
    assert [c.vertices for c in iter_alternating_cycles(build_auxiliary(k4), 2)] == [(0, 2), (1, 3)]
    assert list(iter_alternating_cycles(build_auxiliary(k4), 4)) == []
    with pytest.raises(ParameterError):
        list(iter_alternating_cycles(build_auxiliary(k4), 3))


@given(hamiltonian_instances(min_n=4, max_n=9), st.sampled_from([2, 4]))
@STANDARD_SETTINGS
def test_enumerated_cycles_are_alternating_and_canonical(instance, length):
    aux = build_auxiliary(instance)
    seen = set()
    for cycle in iter_alternating_cycles(aux, length, neighbour_free=True):
        assert check_alt_cycle(aux, cycle)
        assert cycle.vertices[0] == min(cycle.vertices)
        assert cycle.colours[0] is R
        assert first_neighbouring_pair(cycle.vertices, aux.n) is None
        assert cycle.vertices not in seen
        seen.add(cycle.vertices)


# ── Blow-up search ────────────────────────────────────────────────────────────

def test_no_alternating_cycle_in_chorded_hexagon(c6_chorded):
    with pytest.raises(AlternatingCycleAbsent, match="length 4..8"):
        find_alternating_cycle_blowup(build_auxiliary(c6_chorded))


def test_plain_cycle_has_no_coloured_edges():
    with pytest.raises(AlternatingCycleAbsent, match="lacks red or blue"):
        find_alternating_cycle_blowup(build_auxiliary(cycle_instance(6)))


@pytest.mark.parametrize("kwargs", [{"t": 0}, {"max_len": 5}, {"max_len": 2}])
def test_blowup_parameter_checks(kwargs):
    with pytest.raises(ParameterError):
        find_alternating_cycle_blowup(build_auxiliary(complete_instance(8)), **kwargs)


def test_blowup_in_complete_graph():
    aux = build_auxiliary(complete_instance(8))
    emb = find_alternating_cycle_blowup(aux, t=1)
    assert emb.length == 4
    assert emb.cluster_size == 1
    check_blowup(aux, emb)


def test_planted_blowup_is_recovered():
    planted = gen_planted_blowup(4, 2, 0.0, seed=1)
    aux = build_auxiliary(planted.instance)
    check_blowup(aux, planted.certificate)
    largest = find_largest_blowup(aux, max_t=2, budget=500_000)
    assert largest.embedding.cluster_size == 2
    assert [a.outcome for a in largest.attempts] == ["found", "found"]
    check_blowup(aux, largest.embedding)


def test_check_blowup_rejects_overlap():
    aux = build_auxiliary(complete_instance(8))
    with pytest.raises(PipelineInvariantError, match="overlap"):
        check_blowup(aux, _embedding((0,), (2,), (0,), (6,)))


def test_check_blowup_rejects_missing_colour():
    aux = build_auxiliary(complete_instance(8))
    with pytest.raises(PipelineInvariantError, match="missing red edge"):
        check_blowup(aux, _embedding((0,), (1,), (4,), (6,)))


# ── Ordering ──────────────────────────────────────────────────────────────────

class TestOrderBlowup:
    def test_interleaved_clusters(self):
        out = order_blowup(_embedding((0, 2, 4, 6), (1, 3, 5, 7)), 1)
        assert out.clusters == ((0,), (5,))
        assert out.ordered

    def test_already_ordered_clusters_are_cut(self):
        out = order_blowup(_embedding((0, 1, 2), (5, 6, 7)), 2)
        assert out.clusters == ((0, 1), (5, 6))
        assert is_consistently_ordered(out)

    def test_too_small(self):
        with pytest.raises(BlowupOrderingError) as info:
            order_blowup(_embedding((0,), (5,)), 2)
        assert info.value.level == 0

    def test_rejects_zero_target(self):
        with pytest.raises(ParameterError):
            order_blowup(_embedding((0,), (5,)), 0)


@given(
    st.integers(min_value=2, max_value=3).flatmap(
        lambda length: st.permutations(range(6 * length)).map(
            lambda perm: [sorted(perm[i::length]) for i in range(length)]
        )
    )
)
@STANDARD_SETTINGS
def test_median_split_yields_ordered_sub_clusters(clusters):
    emb = _embedding(*(tuple(c) for c in clusters))
    out = order_blowup(emb, 1)
    assert is_consistently_ordered(out)
    for before, after in zip(emb.clusters, out.clusters):
        assert len(after) == 1
        assert set(after) <= set(before)


@given(
    st.tuples(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=3)).flatmap(
        lambda lt: st.tuples(
            st.just(lt[1]),
            st.permutations(range(lt[0] * lt[1] * 2 ** lt[0])).map(
                lambda perm, length=lt[0]: [sorted(perm[i::length]) for i in range(length)]
            ),
        )
    )
)
@SLOW_SETTINGS
def test_ordering_keeps_t_from_t_times_two_to_the_length(case):
    t, clusters = case
    emb = _embedding(*(tuple(c) for c in clusters))
    assert emb.cluster_size == t * 2 ** emb.length
    out = order_blowup(emb, t)
    assert out.ordered and is_consistently_ordered(out)
    for before, after in zip(emb.clusters, out.clusters):
        assert len(after) == t
        assert set(after) <= set(before)


# ── Thinning ──────────────────────────────────────────────────────────────────

class TestThinning:
    def test_runs_keep_every_other_vertex(self):
        # a single pass over the union would keep 2, 4, 8
        out = thin_non_neighbouring(_embedding((2, 3, 4), (7, 8, 9)), 12)
        assert out.clusters == ((2, 4), (7, 9))

    def test_run_across_the_wrap_starts_at_its_cyclic_start(self):
        out = thin_non_neighbouring(_embedding((0, 11), (1, 10)), 12)
        assert out.clusters == ((0,), (10,))

    def test_cluster_can_empty(self):
        with pytest.raises(ThinningError):
            thin_non_neighbouring(_embedding((5,), (6,)), 12)

    def test_spread_clusters_unchanged(self):
        emb = _embedding((0, 4), (8, 12))
        assert thin_non_neighbouring(emb, 16).clusters == emb.clusters

    def test_wraparound_pair(self):
        out = thin_non_neighbouring(_embedding((0, 4), (8, 11)), 12)
        assert first_neighbouring_pair([v for c in out.clusters for v in c], 12) is None


@given(
    st.integers(min_value=8, max_value=30).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.integers(min_value=0, max_value=n - 1), min_size=4, max_size=n, unique=True),
        )
    )
)
@SLOW_SETTINGS
def test_thinning_is_neighbour_free(case):
    n, positions = case
    emb = _embedding(tuple(sorted(positions[::2])), tuple(sorted(positions[1::2])))
    try:
        out = thin_non_neighbouring(emb, n)
    except ThinningError:
        return
    flat = [v for c in out.clusters for v in c]
    assert first_neighbouring_pair(flat, n) is None
    assert len({len(c) for c in out.clusters}) == 1
