"""Request and response models for the HTTP API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GraphSource(BaseModel):
    """Where the graph comes from: a file on the server, inline edge-list
    text, or a generator model with its parameters."""

    model_config = ConfigDict(extra="forbid")

    path: str | None = None
    text: str | None = None
    model: Literal["ws", "ba", "plc"] | None = None
    n: int | None = Field(default=None, ge=1)
    d: int | None = Field(default=None, ge=1)
    p: float = Field(default=0.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _one_source(self) -> "GraphSource":
        given = sum(x is not None for x in (self.path, self.text, self.model))
        if given != 1:
            raise ValueError("give exactly one of path, text, or model")
        if self.model is not None and (self.n is None or self.d is None):
            raise ValueError("generator sources need n and d")
        return self


class SeedSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertex: str | None = None
    select: Literal["degree"] | None = None

    @model_validator(mode="after")
    def _one_rule(self) -> "SeedSpec":
        if (self.vertex is None) == (self.select is None):
            raise ValueError("give exactly one of vertex or select")
        return self


class HkprRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphSource
    seed: SeedSpec
    t: float = Field(ge=0.0)
    mode: Literal["exact", "approx"] = "approx"
    eps: float = Field(default=0.1, gt=0.0, lt=1.0)
    r: int | None = Field(default=None, ge=1)
    K: int | None = Field(default=None, ge=0)
    tol: float = Field(default=1e-9, gt=0.0)
    rng_seed: int = 0


class VectorEntry(BaseModel):
    vertex: str
    value: float


class HkprResponse(BaseModel):
    n: int
    m: int
    seed_vertex: str
    mode: str
    t: float
    eps: float | None
    r: int | None
    K: int | None
    work: int
    entries: list[VectorEntry]


class TrialFailure(BaseModel):
    trial: int
    error: str


class RankExperimentRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphSource
    seed: SeedSpec
    t: float = Field(gt=0.0)
    eps: float = Field(default=0.1, gt=0.0, lt=1.0)
    k_values: list[int] | None = None
    r: int | None = Field(default=None, ge=1)
    trials: int = Field(default=1, ge=1)
    topk: int = Field(default=10, ge=1)
    rng_seed: int = 0
    workers: int = Field(default=1, ge=1)
    tol: float = Field(default=1e-9, gt=0.0)


class RankRow(BaseModel):
    trial: int
    seed_vertex: str
    K: int
    avg_l1: float
    eps_error: float
    dist: float
    dist_topk: float
    work: int
    wall_ms: float


class RankExperimentResponse(BaseModel):
    topk: int
    rows: list[RankRow]
    failures: list[TrialFailure]


class ClusterRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphSource
    seed: SeedSpec
    phi: float = Field(gt=0.0, lt=1.0)
    target_size: int = Field(ge=1)
    target_volume: int = Field(ge=1)
    eps: float = Field(default=0.1, gt=0.0, lt=1.0)
    r: int | None = Field(default=None, ge=1)
    K: int | None = Field(default=None, ge=1)
    trials: int = Field(default=1, ge=1)
    sweep_mode: Literal["window", "half"] = "window"
    rng_seed: int = 0
    workers: int = Field(default=1, ge=1)


class ClusterRow(BaseModel):
    trial: int
    seed_vertex: str
    verdict: str
    ratio: float | None
    volume: int
    size: int
    t: float
    work: int
    wall_ms: float


class ClusterResponse(BaseModel):
    ratio_bound: float
    rows: list[ClusterRow]
    failures: list[TrialFailure]


class CompareRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphSource
    seed: SeedSpec
    phi: float = Field(gt=0.0, lt=1.0)
    target_size: int = Field(ge=1)
    target_volume: int = Field(ge=1)
    eps: float = Field(default=0.1, gt=0.0, lt=1.0)
    r: int | None = Field(default=None, ge=1)
    K: int | None = Field(default=None, ge=1)
    trials: int = Field(default=1, ge=1)
    rng_seed: int = 0
    workers: int = Field(default=1, ge=1)
    tol: float = Field(default=1e-9, gt=0.0)


class CompareRow(BaseModel):
    trial: int
    seed_vertex: str
    algorithm: str
    setting: str
    ratio: float
    volume: int
    size: int
    wall_ms: float


class CompareResponse(BaseModel):
    rows: list[CompareRow]
    failures: list[TrialFailure]


class GenRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    model: Literal["ws", "ba", "plc"]
    n: int = Field(ge=1)
    d: int = Field(ge=1)
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    rng_seed: int = 0


class GenResponse(BaseModel):
    n: int
    m: int
    edges: str


class HealthResponse(BaseModel):
    status: str
    version: str
