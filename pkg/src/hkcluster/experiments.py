"""Trial drivers shared by the service endpoints and the CLI.

Each driver realizes a graph per trial (fresh substream for generator
sources, one shared parse for files), picks a seed vertex, runs the
requested pipeline, and returns plain-data rows ordered by trial index.
Trials may run on a thread pool; results are bitwise independent of the
worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gen import GenParams, barabasi_albert, powerlaw_cluster, watts_strogatz_connected
from .graph import Graph, parse_edge_list
from .hkpr import Distribution, HkprParams, hkpr_approx_seed, hkpr_exact
from .metrics import avg_l1_error, eps_error, intersection_difference, topk_intersection_difference
from .rng import derive_seed, substream
from .sweep import ClusterParams, cluster_hkpr, compare_clusters, rank_by_value

GENERATORS: dict[str, Callable[[GenParams], Graph]] = {
    "ws": watts_strogatz_connected,
    "ba": barabasi_albert,
    "plc": powerlaw_cluster,
}


@dataclass(frozen=True)
class GraphSpec:
    """One graph source: an edge-list file, inline text, or a generator."""

    path: str | None = None
    text: str | None = None
    model: str | None = None
    n: int | None = None
    d: int | None = None
    p: float = 0.0

    def validate(self) -> None:
        sources = [self.path is not None, self.text is not None, self.model is not None]
        if sum(sources) != 1:
            raise ValueError("exactly one of path, text, or model must be given")
        if self.model is not None:
            if self.model not in GENERATORS:
                raise ValueError(f"unknown model {self.model!r}; expected one of {sorted(GENERATORS)}")
            if self.n is None or self.d is None:
                raise ValueError("generator sources need n and d")


@dataclass(frozen=True)
class SeedSpec:
    """Seed vertex selection: an explicit label/id, or degree-proportional."""

    vertex: str | None = None
    select: str | None = None

    def validate(self) -> None:
        if (self.vertex is None) == (self.select is None):
            raise ValueError("give exactly one of an explicit seed vertex or a selection rule")
        if self.select is not None and self.select != "degree":
            raise ValueError(f"unknown seed selection rule {self.select!r}")


def realize_graph(spec: GraphSpec, master_seed: int, trial: int, cache: dict) -> Graph:
    """The graph for one trial; generator sources get a fresh substream."""
    spec.validate()
    if spec.model is not None:
        params = GenParams(
            n=spec.n, d=spec.d, p=spec.p, rng_seed=derive_seed(master_seed, trial, 0)
        )
        return GENERATORS[spec.model](params)
    if "graph" not in cache:
        if spec.path is not None:
            with open(spec.path, "r", encoding="utf-8") as fh:
                cache["graph"] = parse_edge_list(fh)
        else:
            cache["graph"] = parse_edge_list(spec.text.splitlines())
    return cache["graph"]


def pick_seed(G: Graph, spec: SeedSpec, master_seed: int, trial: int) -> int:
    spec.validate()
    if spec.vertex is not None:
        u = G.resolve_vertex(spec.vertex)
    else:
        rng = substream(master_seed, trial, 1)
        total = G.total_volume
        if total == 0:
            raise ValueError("cannot pick a degree-proportional seed on an edgeless graph")
        u = int(np.searchsorted(np.cumsum(G.degree), rng.integers(total), side="right"))
    if G.degree[u] == 0:
        raise ValueError(f"seed vertex {G.label_of(u)} is isolated")
    return u


def _run_trials(trials: int, workers: int, one: Callable[[int], dict]) -> tuple[list[dict], list[dict]]:
    """Run trials (possibly on a pool), splitting successes from failures."""

    def guarded(trial: int) -> dict:
        try:
            started = time.perf_counter()
            row = one(trial)
            row["wall_ms"] = (time.perf_counter() - started) * 1000.0
            return row
        except Exception as exc:  # noqa: BLE001 - trial isolation is the point
            return {"trial": trial, "error": f"{type(exc).__name__}: {exc}"}

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(guarded, range(trials)))
    else:
        results = [guarded(i) for i in range(trials)]
    rows = [r for r in results if "error" not in r]
    failures = [r for r in results if "error" in r]
    return rows, failures


def run_hkpr(
    graph: GraphSpec,
    seed: SeedSpec,
    t: float,
    mode: str = "approx",
    eps: float = 0.1,
    r: int | None = None,
    K: int | None = None,
    tol: float = 1e-9,
    rng_seed: int = 0,
) -> dict:
    """One diffusion vector, exact or approximate."""
    if mode not in ("exact", "approx"):
        raise ValueError(f"mode must be 'exact' or 'approx', got {mode!r}")
    cache: dict = {}
    G = realize_graph(graph, rng_seed, 0, cache)
    u = pick_seed(G, seed, rng_seed, 0)
    out: dict = {
        "n": G.n,
        "m": G.m,
        "seed_vertex": G.label_of(u),
        "mode": mode,
        "t": t,
        "eps": eps if mode == "approx" else None,
        "work": 0,
    }
    if mode == "exact":
        rho = hkpr_exact(G, Distribution.indicator(G.n, u), t, tol)
        entries = [(G.label_of(v), float(rho.values[v])) for v in range(G.n)]
        out["r"] = None
        out["K"] = None
    else:
        params = HkprParams(t=t, eps=eps, r=r, K=K, rng_seed=derive_seed(rng_seed, 0, 2)).resolved(G.n)
        rho_hat = hkpr_approx_seed(G, t, u, eps, params)
        entries = [(G.label_of(v), rho_hat.counts[v] / rho_hat.r) for v in rho_hat.support()]
        out["r"] = params.r
        out["K"] = params.K
        out["work"] = rho_hat.walk_steps
    out["entries"] = entries
    return out


def default_k_values(t: float, count: int = 10) -> list[int]:
    """Log-spaced integer walk caps between 1 and ceil(t)."""
    top = max(1, math.ceil(t))
    return sorted({int(round(x)) for x in np.geomspace(1, top, count)})


def run_rank_experiment(
    graph: GraphSpec,
    seed: SeedSpec,
    t: float,
    eps: float = 0.1,
    k_values: list[int] | None = None,
    r: int | None = None,
    trials: int = 1,
    topk: int = 10,
    rng_seed: int = 0,
    workers: int = 1,
    tol: float = 1e-9,
) -> tuple[list[dict], list[dict]]:
    """Exact-vs-approximate error measures across walk caps K."""
    ks = k_values if k_values else default_k_values(t)
    if any(k < 0 for k in ks):
        raise ValueError(f"walk caps must be nonnegative, got {ks}")

    def one(trial: int) -> dict:
        cache: dict = {}
        G = realize_graph(graph, rng_seed, trial, cache)
        u = pick_seed(G, seed, rng_seed, trial)
        rho = hkpr_exact(G, Distribution.indicator(G.n, u), t, tol)
        ranked_exact = rank_by_value(rho)
        measures = []
        for ki, K in enumerate(ks):
            params = HkprParams(
                t=t, eps=eps, r=r, K=K, rng_seed=derive_seed(rng_seed, trial, 2, ki)
            )
            rho_hat = hkpr_approx_seed(G, t, u, eps, params)
            ranked_approx = rank_by_value(rho_hat)
            measures.append(
                {
                    "K": K,
                    "avg_l1": avg_l1_error(rho, rho_hat),
                    "eps_error": eps_error(rho, rho_hat, eps),
                    "dist": intersection_difference(ranked_exact, ranked_approx),
                    "dist_topk": topk_intersection_difference(
                        ranked_exact, ranked_approx, min(topk, G.n)
                    ),
                    "work": rho_hat.walk_steps,
                }
            )
        return {"trial": trial, "seed_vertex": G.label_of(u), "measures": measures}

    nested, failures = _run_trials(trials, workers, one)
    rows = []
    for item in nested:
        for ms in item["measures"]:
            rows.append(
                {"trial": item["trial"], "seed_vertex": item["seed_vertex"], **ms, "wall_ms": item["wall_ms"]}
            )
    return rows, failures


def run_cluster(
    graph: GraphSpec,
    seed: SeedSpec,
    params: ClusterParams,
    r: int | None = None,
    K: int | None = None,
    trials: int = 1,
    sweep_mode: str = "window",
    rng_seed: int = 0,
    workers: int = 1,
) -> tuple[list[dict], list[dict]]:
    """ClusterParams-driven local clustering, one row per trial."""

    def one(trial: int) -> dict:
        cache: dict = {}
        G = realize_graph(graph, rng_seed, trial, cache)
        u = pick_seed(G, seed, rng_seed, trial)
        res = cluster_hkpr(
            G,
            u,
            params,
            rng_seed=derive_seed(rng_seed, trial, 2),
            sweep_mode=sweep_mode,
            r=r,
            K=K,
        )
        return {
            "trial": trial,
            "seed_vertex": G.label_of(u),
            "verdict": res.verdict,
            "ratio": res.ratio,
            "volume": res.volume,
            "size": res.size,
            "t": res.t_used,
            "work": res.work,
        }

    return _run_trials(trials, workers, one)


def run_compare(
    graph: GraphSpec,
    seed: SeedSpec,
    params: ClusterParams,
    r: int | None = None,
    K: int | None = None,
    trials: int = 1,
    rng_seed: int = 0,
    workers: int = 1,
    tol: float = 1e-9,
) -> tuple[list[dict], list[dict]]:
    """Three-way cluster comparison, three rows per trial."""

    def one(trial: int) -> dict:
        cache: dict = {}
        G = realize_graph(graph, rng_seed, trial, cache)
        u = pick_seed(G, seed, rng_seed, trial)
        rows = compare_clusters(
            G, u, params, rng_seed=derive_seed(rng_seed, trial, 2), r=r, K=K, tol=tol
        )
        return {
            "trial": trial,
            "seed_vertex": G.label_of(u),
            "rows": [
                {
                    "algorithm": row.algorithm,
                    "setting": row.setting,
                    "ratio": row.ratio,
                    "volume": row.volume,
                    "size": row.size,
                }
                for row in rows
            ],
        }

    nested, failures = _run_trials(trials, workers, one)
    rows = []
    for item in nested:
        for sub in item["rows"]:
            rows.append(
                {"trial": item["trial"], "seed_vertex": item["seed_vertex"], **sub, "wall_ms": item["wall_ms"]}
            )
    return rows, failures


def run_gen(model: str, n: int, d: int, p: float = 0.0, rng_seed: int = 0) -> tuple[Graph, str]:
    """Generate a graph and its edge-list text."""
    if model not in GENERATORS:
        raise ValueError(f"unknown model {model!r}; expected one of {sorted(GENERATORS)}")
    G = GENERATORS[model](GenParams(n=n, d=d, p=p, rng_seed=rng_seed))
    lines = []
    for u in range(G.n):
        for v in G.neighbors(u):
            if u < int(v):
                lines.append(f"{G.label_of(u)} {G.label_of(int(v))}")
    return G, "\n".join(lines) + "\n"
