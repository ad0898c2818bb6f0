"""
Pydantic v2 schemas for every JSON artefact (run reports, oracle results,
blow-ups, systems, parameters, sweep rows).
All vertex ids are 1-based; aux vertices e1..en are reported by index.
"""

from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.core.config import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_CLUSTER,
    DEFAULT_MAX_PATTERN_LEN,
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_SEED,
    DEFAULT_WITNESS_THRESHOLD,
    DIRECT_EMBED_BUDGET,
    FALLBACK_BUDGET,
)


class PipelineConfig(BaseModel):
    """Inputs of one solve run."""
    target_k: int = Field(..., ge=1)
    epsilon: float = DEFAULT_EPSILON          # reporting only
    max_pattern_len: int = DEFAULT_MAX_PATTERN_LEN
    search_budget: int = Field(DEFAULT_SEARCH_BUDGET, ge=1)
    direct_budget: int = Field(DIRECT_EMBED_BUDGET, ge=1)
    fallback_budget: int = Field(FALLBACK_BUDGET, ge=1)
    max_cluster: int = Field(DEFAULT_MAX_CLUSTER, ge=1)
    witness_threshold: int = Field(DEFAULT_WITNESS_THRESHOLD, ge=1)
    seed: int = DEFAULT_SEED
    fallback_enabled: bool = True

    @field_validator("epsilon")
    @classmethod
    def epsilon_in_unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        return v

    @field_validator("max_pattern_len")
    @classmethod
    def even_pattern_len(cls, v: int) -> int:
        if v < 4 or v % 2:
            raise ValueError("max_pattern_len must be even and >= 4")
        return v


class AltCycleModel(BaseModel):
    vertices: List[int]          # 1-based aux indices
    colours: List[str]           # colours[i] joins vertices[i] and vertices[i+1]


class AltCycleSystemModel(BaseModel):
    size: int
    cycles: List[AltCycleModel]
    neighbour_free: bool
    double_edge_free: bool


class AbstractPatternModel(BaseModel):
    labels: List[str]
    origin: List[int]            # 1-based cluster ids
    red: List[List[str]]
    blue: List[List[str]]


class BlowupModel(BaseModel):
    pattern_length: int
    pattern_colours: List[str]
    clusters: List[List[int]]    # 1-based aux indices, one list per pattern vertex
    cluster_size: int
    ordered: bool


class BlowupAttemptModel(BaseModel):
    t: int
    outcome: str
    expansions: int = 0


class AuxSummary(BaseModel):
    n: int
    red_edges: int
    blue_edges: int
    double_edges: int
    min_red_degree: int
    min_blue_degree: int
    degree_identity: bool


class TransformStep(BaseModel):
    step: int
    kind: Literal["up", "down"]
    pivot: int                   # cycle id (up) or 1-based pattern index (down)
    pattern_size: int
    pattern: AbstractPatternModel
    embedding: Literal["blowup", "direct"]
    components: int


class SearchParamsModel(BaseModel):
    gamma: float
    k: int
    L: int
    K: int
    log10_c: float
    c: float


class TheoreticalParams(BaseModel):
    epsilon: float
    target_k: int
    gamma: float
    L: int
    K: int
    N: int
    log10_blowup_sizes: Dict[str, float]
    search: SearchParamsModel
    n: Optional[int] = None
    desk_scale: Optional[bool] = None      # n below theoretical N


class RunReport(BaseModel):
    """Outcome of one solve run; ``timings`` is the only non-deterministic field."""
    status: Literal["success", "search_failure"]
    target_k: int
    n: int
    seed: int
    failure_reason: Optional[str] = None
    aux: Optional[AuxSummary] = None
    blowup: Optional[BlowupModel] = None
    blowup_attempts: List[BlowupAttemptModel] = []
    ordered_blowup: Optional[BlowupModel] = None
    thinned_blowup: Optional[BlowupModel] = None
    required_cluster_size: Optional[int] = None
    initial_components: Optional[int] = None
    transforms: List[TransformStep] = []
    used_fallback: bool = False
    system: Optional[AltCycleSystemModel] = None
    factor: Optional[List[List[int]]] = None
    components: Optional[int] = None
    theoretical: Optional[TheoreticalParams] = None
    diagnostics: List[str] = []
    timings: Dict[str, float] = {}

    @field_validator("timings", mode="before")
    @classmethod
    def round_timings(cls, v: Dict[str, float]) -> Dict[str, float]:
        return {name: round(float(sec), 4) for name, sec in v.items()}

    @model_validator(mode="after")
    def success_has_factor(self) -> "RunReport":
        if self.status == "success":
            if self.factor is None or self.components != self.target_k:
                raise ValueError("a successful report needs a factor with target_k cycles")
            if len(self.factor) != self.components:
                raise ValueError("factor cycle count disagrees with components")
        return self

    def deterministic_json(self) -> str:
        return self.model_dump_json(exclude={"timings"}, indent=2)


class OracleReport(BaseModel):
    n: int
    achievable: List[int]
    witnesses: Dict[str, List[List[int]]]    # count -> cycles (1-based)
    exhaustive: bool = True
    second_enumerator: Optional[List[int]] = None


class VerifyResult(BaseModel):
    valid: bool
    components: Optional[int] = None
    error: Optional[str] = None


class SweepRow(BaseModel):
    n: int
    delta: float
    k: int
    seed: int
    status: str
    components: Optional[int] = None
    initial_components: Optional[int] = None
    used_fallback: bool
    embedding_modes: str
    failure_reason: Optional[str] = None
    seconds: float

    @field_validator("seconds", mode="before")
    @classmethod
    def round_seconds(cls, v: float) -> float:
        return round(float(v), 3)
