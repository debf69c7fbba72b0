"""FastAPI application exposing the diffusion and clustering pipelines."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..experiments import (
    GraphSpec,
    SeedSpec as CoreSeedSpec,
    run_cluster,
    run_compare,
    run_gen,
    run_hkpr,
    run_rank_experiment,
)
from ..sweep import ClusterParams
from .schemas import (
    ClusterRequest,
    ClusterResponse,
    ClusterRow,
    CompareRequest,
    CompareResponse,
    CompareRow,
    GenRequest,
    GenResponse,
    GraphSource,
    HealthResponse,
    HkprRequest,
    HkprResponse,
    RankExperimentRequest,
    RankExperimentResponse,
    RankRow,
    SeedSpec,
    TrialFailure,
    VectorEntry,
)


def _graph_spec(src: GraphSource) -> GraphSpec:
    return GraphSpec(path=src.path, text=src.text, model=src.model, n=src.n, d=src.d, p=src.p)


def _seed_spec(seed: SeedSpec) -> CoreSeedSpec:
    return CoreSeedSpec(vertex=seed.vertex, select=seed.select)


def create_app() -> FastAPI:
    app = FastAPI(title="hkcluster", version=__version__)

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/hkpr", response_model=HkprResponse)
    def hkpr(req: HkprRequest) -> HkprResponse:
        try:
            out = run_hkpr(
                _graph_spec(req.graph),
                _seed_spec(req.seed),
                t=req.t,
                mode=req.mode,
                eps=req.eps,
                r=req.r,
                K=req.K,
                tol=req.tol,
                rng_seed=req.rng_seed,
            )
        except (ValueError, KeyError, OSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        entries = [VectorEntry(vertex=v, value=x) for v, x in out.pop("entries")]
        return HkprResponse(entries=entries, **out)

    @app.post("/v1/rank-experiment", response_model=RankExperimentResponse)
    def rank_experiment(req: RankExperimentRequest) -> RankExperimentResponse:
        try:
            rows, failures = run_rank_experiment(
                _graph_spec(req.graph),
                _seed_spec(req.seed),
                t=req.t,
                eps=req.eps,
                k_values=req.k_values,
                r=req.r,
                trials=req.trials,
                topk=req.topk,
                rng_seed=req.rng_seed,
                workers=req.workers,
                tol=req.tol,
            )
        except (ValueError, KeyError, OSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return RankExperimentResponse(
            topk=req.topk,
            rows=[
                RankRow(
                    trial=r_["trial"],
                    seed_vertex=r_["seed_vertex"],
                    K=r_["K"],
                    avg_l1=r_["avg_l1"],
                    eps_error=r_["eps_error"],
                    dist=r_["dist"],
                    dist_topk=r_["dist_topk"],
                    work=r_["work"],
                    wall_ms=r_["wall_ms"],
                )
                for r_ in rows
            ],
            failures=[TrialFailure(**f) for f in failures],
        )

    @app.post("/v1/cluster", response_model=ClusterResponse)
    def cluster(req: ClusterRequest) -> ClusterResponse:
        params = ClusterParams(phi=req.phi, s=req.target_size, sigma=req.target_volume, eps=req.eps)
        try:
            rows, failures = run_cluster(
                _graph_spec(req.graph),
                _seed_spec(req.seed),
                params,
                r=req.r,
                K=req.K,
                trials=req.trials,
                sweep_mode=req.sweep_mode,
                rng_seed=req.rng_seed,
                workers=req.workers,
            )
        except (ValueError, KeyError, OSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return ClusterResponse(
            ratio_bound=params.ratio_bound,
            rows=[ClusterRow(**r_) for r_ in rows],
            failures=[TrialFailure(**f) for f in failures],
        )

    @app.post("/v1/compare", response_model=CompareResponse)
    def compare(req: CompareRequest) -> CompareResponse:
        params = ClusterParams(phi=req.phi, s=req.target_size, sigma=req.target_volume, eps=req.eps)
        try:
            rows, failures = run_compare(
                _graph_spec(req.graph),
                _seed_spec(req.seed),
                params,
                r=req.r,
                K=req.K,
                trials=req.trials,
                rng_seed=req.rng_seed,
                workers=req.workers,
                tol=req.tol,
            )
        except (ValueError, KeyError, OSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return CompareResponse(
            rows=[CompareRow(**r_) for r_ in rows],
            failures=[TrialFailure(**f) for f in failures],
        )

    @app.post("/v1/gen", response_model=GenResponse)
    def gen(req: GenRequest) -> GenResponse:
        try:
            G, text = run_gen(req.model, req.n, req.d, req.p, req.rng_seed)
        except (ValueError, RuntimeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return GenResponse(n=G.n, m=G.m, edges=text)

    return app
