"""Seeded random-graph generators for the three experiment models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .rng import substream

MAX_CONNECT_ATTEMPTS = 100


@dataclass(frozen=True)
class GenParams:
    """Shared generator parameters: n vertices, neighbor parameter d,
    probability parameter p, and the master seed."""

    n: int
    d: int
    p: float = 0.0
    rng_seed: int = 0

    def validate(self) -> None:
        if not self.n > self.d >= 1:
            raise ValueError(f"need n > d >= 1, got n={self.n}, d={self.d}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")


def watts_strogatz_connected(params: GenParams) -> Graph:
    """Small-world ring lattice with rewiring, regenerated until connected.

    Each vertex starts joined to its floor(d/2) nearest neighbors on each
    side; every lattice edge (u, v) is rewired to (u, w) with probability p,
    w drawn uniformly and resampled while it would create a self-loop or a
    duplicate edge. The edge count n * floor(d/2) is preserved exactly.
    """
    params.validate()
    n, half = params.n, params.d // 2
    if half < 1:
        raise ValueError(f"d = {params.d} gives an empty ring lattice")
    if 2 * half >= n:
        raise ValueError(f"ring with {half} neighbors per side needs n > {2 * half}")
    for attempt in range(MAX_CONNECT_ATTEMPTS):
        rng = substream(params.rng_seed, attempt)
        edges: set[tuple[int, int]] = set()
        degree = np.full(n, 2 * half, dtype=np.int64)

        def key(a: int, b: int) -> tuple[int, int]:
            return (a, b) if a < b else (b, a)

        for j in range(1, half + 1):
            for u in range(n):
                edges.add(key(u, (u + j) % n))
        for j in range(1, half + 1):
            for u in range(n):
                if rng.random() >= params.p:
                    continue
                if degree[u] >= n - 1:
                    continue  # u already adjacent to everyone else
                v = (u + j) % n
                w = int(rng.integers(n))
                while w == u or key(u, w) in edges:
                    w = int(rng.integers(n))
                edges.remove(key(u, v))
                edges.add(key(u, w))
                degree[v] -= 1
                degree[w] += 1
        G = Graph.from_edges(n, edges)
        if G.is_connected():
            return G
    raise RuntimeError(
        f"no connected graph after {MAX_CONNECT_ATTEMPTS} attempts (n={n}, d={params.d}, p={params.p})"
    )


def _preferential_growth(params: GenParams, p: float) -> Graph:
    """Growth with preferential attachment; p is the triangle-closing rate.

    Starts from d isolated vertices. Each arriving vertex adds exactly d
    edges: targets are drawn from the repeated-endpoints urn with duplicate
    rejection, except that after an edge to w, with probability p the next
    edge goes to a random neighbor of w not yet adjacent to the newcomer.
    """
    n, d = params.n, params.d
    rng = substream(params.rng_seed)
    edges: list[tuple[int, int]] = []
    adj: list[set[int]] = [set() for _ in range(n)]
    urn: list[int] = []

    def connect(source: int, target: int) -> None:
        edges.append((source, target))
        adj[source].add(target)
        adj[target].add(source)
        urn.append(target)

    for source in range(d, n):
        if not urn:
            for w in range(d):
                connect(source, w)
        else:
            last = -1
            for _ in range(d):
                w = -1
                if last >= 0 and p > 0 and rng.random() < p:
                    shared = [x for x in sorted(adj[last]) if x != source and x not in adj[source]]
                    if shared:
                        w = shared[int(rng.integers(len(shared)))]
                if w < 0:
                    w = urn[int(rng.integers(len(urn)))]
                    while w == source or w in adj[source]:
                        w = urn[int(rng.integers(len(urn)))]
                connect(source, w)
                last = w
        urn.extend([source] * d)
    return Graph.from_edges(n, edges)


def barabasi_albert(params: GenParams) -> Graph:
    """Preferential-attachment graph with d edges per arriving vertex;
    the edge count is exactly d * (n - d)."""
    params.validate()
    return _preferential_growth(params, p=0.0)


def powerlaw_cluster(params: GenParams) -> Graph:
    """Preferential attachment with triangle-closing steps at rate p."""
    params.validate()
    return _preferential_growth(params, p=params.p)
