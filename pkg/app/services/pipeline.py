"""
Pipeline Service
────────────────
End-to-end search for a 2-factor with exactly k cycles.

Stages
──────
1. aux        – build A(G, H)
2. blowup     – largest certified blow-up C(t) of an alternating cycle
3. order      – consistently ordered sub-blow-up (median split)
4. thin       – drop neighbouring positions
5. base       – embed C, l = number of cycles of F(C)
6. transforms – |k - l| going-up / going-down rounds, each re-embedded from
                scratch into the thinned blow-up, or directly into A when the
                clusters run out
7. verify     – independent 2-factor check

Failures are results: ``solve`` returns (None, report) with a machine-readable
``failure_reason``, after trying ``fallback_direct_search`` when enabled.
"""

from __future__ import annotations

import logging
import math
import time
from contextlib import contextmanager
from itertools import count, islice
from typing import Iterator

from app.core.config import (
    FALLBACK_BUDGET,
    FALLBACK_MAX_CYCLE_LEN,
    FALLBACK_MAX_CYCLES,
    FALLBACK_MAX_SYSTEM,
)
from app.core.errors import (
    AlternatingCycleAbsent,
    BlowupOrderingError,
    CapacityExceededError,
    EmbeddingNotFound,
    FallbackExhausted,
    ParameterError,
    PipelineInvariantError,
    SearchBudgetExhausted,
    ThinningError,
)
from app.models.auxiliary import AbstractPattern, AltCycle, AltCycleSystem, AuxGraph, BlowupEmbedding
from app.models.graph import HamiltonianInstance, TwoFactor
from app.models.schemas import PipelineConfig, RunReport, TheoreticalParams, TransformStep
from app.services import json_formatter
from app.services.altcycle_search import (
    _Budget,
    find_largest_blowup,
    iter_alternating_cycles,
    lemma_params,
    order_blowup,
    thin_non_neighbouring,
)
from app.services.aux_graph import build_auxiliary
from app.services.graph_core import hamilton_factor, verify_two_factor
from app.services.transforms import (
    base_pattern,
    embed_pattern,
    embed_pattern_direct,
    going_down_pattern,
    going_up_pattern,
    separating_vertices,
    two_factor_of,
)

logger = logging.getLogger(__name__)


# ══════════════════════════════════════════════════════════════════════════════
# Theoretical parameters
# ══════════════════════════════════════════════════════════════════════════════

def theoretical_params(epsilon: float, target_k: int, n: int | None = None) -> TheoreticalParams:
    """
    L, K from the many-cycles constants at gamma = epsilon/2, N >= max(4/epsilon, K),
    and the blow-up sizes 2^k 6^L, 2^k 3^L, 2^(k-1) 3^L as log10 values.
    """
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    if target_k < 1:
        raise ParameterError(f"k must be >= 1, got {target_k}")
    params = lemma_params(epsilon / 2)
    N = max(math.ceil(4 / epsilon), params.K)
    k, L = target_k, params.L
    sizes = {
        "2^k*6^L": round(k * math.log10(2) + L * math.log10(6), 6),
        "2^k*3^L": round(k * math.log10(2) + L * math.log10(3), 6),
        "2^(k-1)*3^L": round((k - 1) * math.log10(2) + L * math.log10(3), 6),
    }
    return TheoreticalParams(
        epsilon=epsilon,
        target_k=k,
        gamma=epsilon / 2,
        L=L,
        K=params.K,
        N=N,
        log10_blowup_sizes=sizes,
        search=json_formatter.search_params_model(params),
        n=n,
        desk_scale=(n < N) if n is not None else None,
    )


# ══════════════════════════════════════════════════════════════════════════════
# Fallback direct search
# ══════════════════════════════════════════════════════════════════════════════

def iter_systems(
    aux: AuxGraph,
    size: int,
    cycles_by_len: dict[int, list[AltCycle]],
) -> Iterator[AltCycleSystem]:
    """
    Neighbour-free systems with |V(S)| = ``size`` built from the cycles in
    ``cycles_by_len``; cycles are combined in list order, each system once.
    """
    n = aux.n
    pool = [c for length in sorted(cycles_by_len) for c in cycles_by_len[length]]
    masks = []
    for cyc in pool:
        own = 0
        for v in cyc.vertices:
            own |= 1 << v
        near = own
        for v in cyc.vertices:
            near |= 1 << ((v - 1) % n) | 1 << ((v + 1) % n)
        masks.append((own, near))
    chosen: list[AltCycle] = []

    def pick(start: int, remaining: int, occupied: int) -> Iterator[AltCycleSystem]:
        if remaining == 0:
            yield AltCycleSystem.from_cycles(chosen)
            return
        for idx in range(start, len(pool)):
            cyc = pool[idx]
            if len(cyc) > remaining:
                continue
            own, near = masks[idx]
            if near & occupied:
                continue
            chosen.append(cyc)
            yield from pick(idx + 1, remaining - len(cyc), occupied | own)
            chosen.pop()

    yield from pick(0, size, 0)


def fallback_direct_search(
    aux: AuxGraph,
    target_k: int,
    budget: int = FALLBACK_BUDGET,
    max_cycle_len: int = FALLBACK_MAX_CYCLE_LEN,
    max_system: int = FALLBACK_MAX_SYSTEM,
    max_cycles: int = FALLBACK_MAX_CYCLES,
) -> tuple[TwoFactor, AltCycleSystem]:
    """
    First neighbour-free system S, by increasing |V(S)| (so S = {} first),
    with count(F(S)) = target_k. Only the first ``max_cycles`` cycles of each
    length take part; ``exhaustive`` on failure means none were cut off.
    """
    if target_k < 1:
        raise ParameterError(f"k must be >= 1, got {target_k}")
    counter = _Budget(budget)
    empty = AltCycleSystem.empty()
    F = two_factor_of(aux, empty)
    if F.component_count == target_k:
        return F, empty

    cycles_by_len: dict[int, list[AltCycle]] = {}
    truncated = False
    largest = min(max_system, aux.n // 2)
    try:
        for size in range(2, largest + 1, 2):
            if size <= max_cycle_len:
                found = iter_alternating_cycles(aux, size, neighbour_free=True, budget=counter)
                cycles_by_len[size] = list(islice(found, max_cycles + 1))
                if len(cycles_by_len[size]) > max_cycles:
                    truncated = True
                    cycles_by_len[size].pop()
            for S in iter_systems(aux, size, cycles_by_len):
                counter.spend()
                F = two_factor_of(aux, S)
                if F.component_count == target_k:
                    logger.info("fallback hit with |V(S)| = %d", size)
                    return F, S
    except SearchBudgetExhausted as exc:
        raise FallbackExhausted(
            f"fallback exhausted its budget of {budget} expansions", exhaustive=False
        ) from exc
    raise FallbackExhausted(
        f"no system with |V(S)| <= {largest} gives {target_k} cycles", exhaustive=not truncated
    )


# ══════════════════════════════════════════════════════════════════════════════
# solve
# ══════════════════════════════════════════════════════════════════════════════

class _Run:
    """Mutable report state of one solve call."""

    def __init__(self, instance: HamiltonianInstance, config: PipelineConfig) -> None:
        self.instance = instance
        self.config = config
        self.fields: dict = {
            "target_k": config.target_k,
            "n": instance.n,
            "seed": config.seed,
            "transforms": [],
            "diagnostics": [],
            "blowup_attempts": [],
        }
        self.timings: dict[str, float] = {}
        self.reason = "transform path failed"

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = time.perf_counter() - start

    def note(self, message: str) -> None:
        logger.info(message)
        self.fields["diagnostics"].append(message)

    def success(self, F: TwoFactor, S: AltCycleSystem) -> tuple[TwoFactor, RunReport]:
        with self.stage("verify"):
            checked = verify_two_factor(self.instance.graph, F.edges)
        if checked.component_count != self.config.target_k:
            raise PipelineInvariantError(
                f"verified factor has {checked.component_count} cycles, wanted {self.config.target_k}"
            )
        report = RunReport(
            status="success",
            factor=checked.to_external(),
            components=checked.component_count,
            system=json_formatter.system_model(S, self.instance.n),
            timings=self.timings,
            **self.fields,
        )
        return checked, report

    def failure(self, reason: str) -> tuple[None, RunReport]:
        logger.warning("solve failed: %s", reason)
        report = RunReport(
            status="search_failure",
            failure_reason=reason,
            timings=self.timings,
            **self.fields,
        )
        return None, report


def _embed(
    aux: AuxGraph,
    thinned: BlowupEmbedding | None,
    pattern: AbstractPattern,
    budget: int,
) -> tuple[AltCycleSystem, str]:
    """Fresh embedding into the thinned blow-up, else directly into A."""
    if thinned is not None:
        try:
            return embed_pattern(thinned, pattern), "blowup"
        except CapacityExceededError as exc:
            logger.debug("blow-up capacity exhausted (%s); embedding directly", exc)
    return embed_pattern_direct(aux, pattern, budget), "direct"


def _required_cluster_size(initial: int, target_k: int) -> int:
    if target_k >= initial:
        return 1 + (target_k - initial)
    return 3 ** (initial - target_k)


def solve(
    instance: HamiltonianInstance,
    config: PipelineConfig,
) -> tuple[TwoFactor | None, RunReport]:
    run = _Run(instance, config)
    k = config.target_k
    n = instance.n
    try:
        run.fields["theoretical"] = theoretical_params(config.epsilon, k, n)
    except ParameterError as exc:
        run.note(f"theoretical parameters unavailable: {exc}")

    # ── k = 1: H itself ──────────────────────────────────────────────────────
    if k == 1:
        run.note("k = 1: Hamilton cycle returned")
        return run.success(hamilton_factor(instance), AltCycleSystem.empty())
    if 3 * k > n:
        return run.failure(f"k = {k} exceeds n/3 = {n // 3}; cycles need 3 vertices each")

    # ── 1. Auxiliary graph ───────────────────────────────────────────────────
    with run.stage("aux"):
        aux = build_auxiliary(instance)
    run.fields["aux"] = json_formatter.aux_summary(aux)

    outcome = _transform_path(run, aux)
    if outcome is not None:
        return run.success(*outcome)

    # ── Fallback ─────────────────────────────────────────────────────────────
    if not config.fallback_enabled:
        return run.failure(run.reason)
    run.fields["used_fallback"] = True
    try:
        with run.stage("fallback"):
            F, S = fallback_direct_search(aux, k, config.fallback_budget)
    except FallbackExhausted as exc:
        hint = run.reason
        return run.failure(f"{hint}; fallback: {exc}")
    run.note(f"fallback found a system with {len(S)} vertices")
    return run.success(F, S)


def _transform_path(run: _Run, aux: AuxGraph) -> tuple[TwoFactor, AltCycleSystem] | None:
    """Stages 2-6; None on a clean failure with the reason stored on ``run``."""
    config = run.config
    k = config.target_k
    fields = run.fields

    def fail(reason: str) -> None:
        run.reason = reason
        run.note(reason)

    # ── 2. Largest blow-up ───────────────────────────────────────────────────
    try:
        with run.stage("blowup"):
            largest = find_largest_blowup(
                aux,
                max_t=config.max_cluster,
                max_len=config.max_pattern_len,
                budget=config.search_budget,
                threshold=config.witness_threshold,
            )
    except AlternatingCycleAbsent as exc:
        fail(f"no alternating cycle: {exc}")
        return None
    except SearchBudgetExhausted as exc:
        fail(f"blow-up search: {exc}")
        return None
    blowup = largest.embedding
    fields["blowup"] = json_formatter.blowup_model(blowup)
    fields["blowup_attempts"] = [json_formatter.attempt_model(a) for a in largest.attempts]

    # ── 3. Ordering ──────────────────────────────────────────────────────────
    ordered: BlowupEmbedding | None = None
    with run.stage("order"):
        for t_target in range(blowup.cluster_size, 0, -1):
            try:
                ordered = order_blowup(blowup, t_target)
                break
            except BlowupOrderingError as exc:
                logger.debug("ordering with t=%d failed at level %d", t_target, exc.level)
    if ordered is None:
        fail("blow-up could not be ordered")
        return None
    fields["ordered_blowup"] = json_formatter.blowup_model(ordered)

    # ── 4. Thinning ──────────────────────────────────────────────────────────
    thinned: BlowupEmbedding | None
    try:
        with run.stage("thin"):
            thinned = thin_non_neighbouring(ordered, aux.n)
        fields["thinned_blowup"] = json_formatter.blowup_model(thinned)
    except ThinningError as exc:
        run.note(f"thinning failed ({exc}); embedding directly into A")
        thinned = None

    # ── 5. Base cycle ────────────────────────────────────────────────────────
    pattern = base_pattern(ordered)
    try:
        with run.stage("base"):
            S, mode = _embed(aux, thinned, pattern, config.direct_budget)
            F = two_factor_of(aux, S)
    except (EmbeddingNotFound, SearchBudgetExhausted) as exc:
        fail(f"base cycle could not be embedded without neighbours: {exc}")
        return None
    current = F.component_count
    fields["initial_components"] = current
    run.note(f"base cycle of length {pattern.size} embedded ({mode}): {current} cycles")
    fields["required_cluster_size"] = _required_cluster_size(current, k)
    available = thinned.cluster_size if thinned is not None else 0
    if available < fields["required_cluster_size"]:
        run.note(
            f"blow-up capacity {available} below {fields['required_cluster_size']} "
            f"needed for {abs(k - current)} rounds"
        )

    # ── 6. Transforms ────────────────────────────────────────────────────────
    with run.stage("transforms"):
        for step in count(1):
            if current == k:
                break
            if current < k:
                kind, pivot = "up", 0
                nxt = going_up_pattern(pattern, pivot)
            else:
                seps = separating_vertices(aux, S, F)
                if not seps:
                    raise PipelineInvariantError(
                        f"{current}-cycle factor without a separating vertex"
                    )
                kind, pivot = "down", S.vertices.index(seps[0])
                nxt = going_down_pattern(pattern, pivot)
            try:
                S_next, mode = _embed(aux, thinned, nxt, config.direct_budget)
            except (EmbeddingNotFound, SearchBudgetExhausted) as exc:
                fail(f"round {step} ({kind}) could not be embedded: {exc}")
                return None
            F_next = two_factor_of(aux, S_next)
            expected = current + (1 if kind == "up" else -1)
            if F_next.component_count != expected:
                raise PipelineInvariantError(
                    f"round {step} ({kind}) gave {F_next.component_count} cycles, expected {expected}"
                )
            pattern, S, F, current = nxt, S_next, F_next, expected
            fields["transforms"].append(
                TransformStep(
                    step=step,
                    kind=kind,
                    pivot=pivot if kind == "up" else pivot + 1,
                    pattern_size=pattern.size,
                    pattern=json_formatter.pattern_model(pattern),
                    embedding=mode,
                    components=current,
                )
            )
            logger.info("round %d (%s, %s): %d cycles", step, kind, mode, current)
    return F, S
