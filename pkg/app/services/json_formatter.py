"""
JSON Formatter Service
──────────────────────
Converts engine objects (blow-ups, systems, patterns, oracle results) into
the pydantic models of app.models.schemas, shifting every id to 1-based.
"""

from __future__ import annotations

from app.models.auxiliary import (
    AbstractPattern,
    AltCycle,
    AltCycleSystem,
    AuxGraph,
    BlowupEmbedding,
    Colour,
    SearchParams,
)
from app.models.schemas import (
    AbstractPatternModel,
    AltCycleModel,
    AltCycleSystemModel,
    AuxSummary,
    BlowupAttemptModel,
    BlowupModel,
    OracleReport,
    SearchParamsModel,
)
from app.services.altcycle_search import BlowupAttempt
from app.services.aux_graph import check_degree_identity
from app.services.oracle import OracleResult


def cycle_model(cycle: AltCycle) -> AltCycleModel:
    return AltCycleModel(
        vertices=[v + 1 for v in cycle.vertices],
        colours=[c.value for c in cycle.colours],
    )


def system_model(S: AltCycleSystem, n: int) -> AltCycleSystemModel:
    return AltCycleSystemModel(
        size=len(S),
        cycles=[cycle_model(c) for c in S.cycles],
        neighbour_free=S.neighbour_free(n),
        double_edge_free=S.no_double_edges,
    )


def pattern_model(P: AbstractPattern) -> AbstractPatternModel:
    def labelled(pairs: frozenset[tuple[int, int]]) -> list[list[str]]:
        return [[P.labels[a], P.labels[b]] for a, b in sorted(pairs)]

    return AbstractPatternModel(
        labels=list(P.labels),
        origin=[o + 1 for o in P.origin],
        red=labelled(P.system.red),
        blue=labelled(P.system.blue),
    )


def blowup_model(embedding: BlowupEmbedding) -> BlowupModel:
    return BlowupModel(
        pattern_length=embedding.length,
        pattern_colours=[c.value for c in embedding.pattern.colours],
        clusters=[[v + 1 for v in c] for c in embedding.clusters],
        cluster_size=embedding.cluster_size,
        ordered=embedding.ordered,
    )


def attempt_model(attempt: BlowupAttempt) -> BlowupAttemptModel:
    return BlowupAttemptModel(t=attempt.t, outcome=attempt.outcome, expansions=attempt.expansions)


def aux_summary(aux: AuxGraph) -> AuxSummary:
    return AuxSummary(
        n=aux.n,
        red_edges=len(aux.red),
        blue_edges=len(aux.blue),
        double_edges=len(aux.double_edges()),
        min_red_degree=aux.min_degree(Colour.RED),
        min_blue_degree=aux.min_degree(Colour.BLUE),
        degree_identity=bool(check_degree_identity(aux.instance, aux)),
    )


def search_params_model(params: SearchParams) -> SearchParamsModel:
    return SearchParamsModel(
        gamma=params.gamma,
        k=params.k,
        L=params.L,
        K=params.K,
        log10_c=round(params.log10_c, 6),
        c=params.c,
    )


def oracle_report(result: OracleResult, second: set[int] | None = None) -> OracleReport:
    return OracleReport(
        n=result.n,
        achievable=sorted(result.achievable),
        witnesses={
            str(count): tf.to_external() for count, tf in sorted(result.witnesses.items())
        },
        exhaustive=result.exhaustive,
        second_enumerator=sorted(second) if second is not None else None,
    )
