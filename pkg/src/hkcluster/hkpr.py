"""Heat kernel pagerank: exact diffusion, Monte-Carlo approximation, and
the supporting Poisson walk-length machinery.

The heat kernel pagerank of a starting distribution f at temperature t is
the expected endpoint distribution of a random walk from f whose length is
Poisson(t); equivalently exp(-t) * sum_k (t^k / k!) f P^k for the lazy-free
walk matrix P with P_uv = 1/d_u on edges.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .graph import Graph, VertexSet, volume
from .rng import substream

INVERSION_MAX_T = 30.0
_CHUNK = 4096


class Distribution:
    """Dense per-vertex probability vector."""

    __slots__ = ("values",)

    def __init__(self, values, *, check: bool = True, tol: float = 1e-9):
        arr = np.asarray(values, dtype=np.float64).copy()
        if arr.ndim != 1:
            raise ValueError("distribution must be one-dimensional")
        if check:
            if arr.min(initial=0.0) < -1e-12:
                raise ValueError("distribution has a negative entry")
            total = float(arr.sum())
            if not (1.0 - tol <= total <= 1.0 + 1e-9):
                raise ValueError(f"distribution mass {total} outside [1 - {tol}, 1]")
        self.values = arr

    @classmethod
    def indicator(cls, n: int, u: int) -> "Distribution":
        vals = np.zeros(n)
        vals[u] = 1.0
        return cls(vals, check=False)

    def value(self, v: int) -> float:
        return float(self.values[v])

    def support(self) -> np.ndarray:
        return np.nonzero(self.values)[0]

    def __len__(self) -> int:
        return len(self.values)


class ApproxDistribution:
    """Empirical endpoint counts from r sampled walks (values are counts/r)."""

    __slots__ = ("counts", "r", "n", "walk_steps")

    def __init__(self, counts: dict[int, int], r: int, n: int, walk_steps: int = 0):
        self.counts = counts
        self.r = int(r)
        self.n = int(n)
        self.walk_steps = int(walk_steps)
        total = sum(counts.values())
        if total != self.r:
            raise ValueError(f"counts sum to {total}, expected r = {self.r}")
        if any(c <= 0 for c in counts.values()):
            raise ValueError("counts must be positive on the support")

    def value(self, v: int) -> float:
        return self.counts.get(int(v), 0) / self.r

    def to_dense(self) -> np.ndarray:
        vals = np.zeros(self.n)
        for v, c in self.counts.items():
            vals[v] = c / self.r
        return vals

    def support(self) -> list[int]:
        return sorted(self.counts)

    def __len__(self) -> int:
        return self.n


def default_sample_count(eps: float, n: int) -> int:
    """Walk count r = ceil((16/eps^3) ln n), at least 1."""
    return max(1, math.ceil(16.0 / eps**3 * math.log(max(n, 2))))


def default_walk_cap(eps: float, c: float = 4.0) -> int:
    """Walk-length cap K = ceil(c ln(1/eps) / ln ln(1/eps)), at least 1."""
    x = math.log(1.0 / eps)
    if x <= 1.0:
        return 1
    return max(1, math.ceil(c * x / math.log(x)))


@dataclass(frozen=True)
class HkprParams:
    """Parameters of one Monte-Carlo approximation run."""

    t: float
    eps: float
    r: int | None = None
    K: int | None = None
    rng_seed: int = 0

    def resolved(self, n: int) -> "HkprParams":
        """Fill r and K defaults for a graph on n vertices and validate."""
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if self.t < 0:
            raise ValueError(f"t must be nonnegative, got {self.t}")
        r = self.r if self.r is not None else default_sample_count(self.eps, n)
        K = self.K if self.K is not None else default_walk_cap(self.eps)
        if r < 1 or K < 0:
            raise ValueError(f"need r >= 1 and K >= 0, got r={r}, K={K}")
        return replace(self, r=int(r), K=int(K))


def poisson_weights(t: float, k_max: int) -> np.ndarray:
    """Poisson(t) probabilities p_k = e^-t t^k/k! for k = 0..k_max.

    Computed through the log-space recurrence
    log p_k = log p_{k-1} + log t - log k, so large t cannot overflow.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")
    if t == 0:
        out = np.zeros(k_max + 1)
        out[0] = 1.0
        return out
    k = np.arange(1, k_max + 1, dtype=np.float64)
    logp = np.concatenate(([-t], -t + np.cumsum(np.log(t) - np.log(k))))
    return np.exp(logp)


def _truncation_weights(t: float, tol: float) -> np.ndarray:
    """Poisson weights out to the first k whose tail mass drops below tol."""
    k_max = max(32, int(t + 12.0 * math.sqrt(t + 1.0) + 32))
    while True:
        w = poisson_weights(t, k_max)
        cum = np.cumsum(w)
        idx = int(np.searchsorted(cum, 1.0 - tol))
        if idx < len(cum):
            return w[: idx + 1]
        k_max *= 2


def _poisson_cdf_table(t: float) -> np.ndarray:
    w = poisson_weights(t, max(32, int(t + 16.0 * math.sqrt(t + 1.0) + 40)))
    return np.cumsum(w)


def _sample_poisson_ptrs(t: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Hormann's transformed-rejection sampler, exact for large t."""
    b = 0.931 + 2.53 * math.sqrt(t)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)

    out = np.empty(size, dtype=np.int64)
    pending = np.arange(size)
    while pending.size:
        u = rng.random(pending.size) - 0.5
        v = rng.random(pending.size)
        us = 0.5 - np.abs(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            k = np.floor((2.0 * a / us + b) * u + t + 0.43)
            quick = (us >= 0.07) & (v <= v_r)
            bail = (k < 0) | ((us < 0.013) & (v > us))
            lhs = np.log(v) + np.log(inv_alpha) - np.log(a / (us * us) + b)
            rhs = k * math.log(t) - t - gammaln(k + 1.0)
        accept = quick | (~bail & (lhs <= rhs))
        accept &= np.isfinite(k)
        out[pending[accept]] = k[accept].astype(np.int64)
        pending = pending[~accept]
    return out


def sample_walk_lengths(t: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """size independent Poisson(t) draws from rng.

    Exact inversion through the cumulative table for t <= 30; exact
    transformed rejection beyond that. Never a normal approximation.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if t == 0:
        return np.zeros(size, dtype=np.int64)
    if t <= INVERSION_MAX_T:
        cdf = _poisson_cdf_table(t)
        u = rng.random(size)
        k = np.searchsorted(cdf, u, side="left")
        return np.minimum(k, len(cdf) - 1).astype(np.int64)
    return _sample_poisson_ptrs(t, size, rng)


def sample_walk_length(t: float, rng: np.random.Generator) -> int:
    """One Poisson(t) walk length."""
    return int(sample_walk_lengths(t, 1, rng)[0])


def random_walk(G: Graph, u: int, steps: int, rng: np.random.Generator) -> int:
    """Endpoint of a steps-step uniform-neighbor walk from u."""
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    cur = int(u)
    for _ in range(steps):
        d = int(G.degree[cur])
        if d == 0:
            raise ValueError(f"random walk reached isolated vertex {cur}")
        cur = int(G.indices[G.indptr[cur] + rng.integers(d)])
    return cur


def _as_prob_values(G: Graph, f) -> np.ndarray:
    if isinstance(f, Distribution):
        vals = f.values
    else:
        vals = Distribution(f).values
    if len(vals) != G.n:
        raise ValueError(f"distribution length {len(vals)} != vertex count {G.n}")
    total = float(vals.sum())
    if vals.min(initial=0.0) < -1e-12 or not (0.999999999 <= total <= 1.0 + 1e-9):
        raise ValueError("f is not a probability vector")
    if np.any(vals[G.degree == 0] > 0):
        raise ValueError("f places mass on an isolated vertex; the walk is undefined there")
    return vals


def hkpr_exact(G: Graph, f, t: float, tol: float = 1e-9) -> Distribution:
    """Exact heat kernel pagerank by Taylor truncation.

    Sums e^-t t^k/k! f P^k until the Poisson tail is below tol, so the
    returned mass lies in [1 - tol, 1].
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    vals = _as_prob_values(G, f)
    if t == 0:
        return Distribution(vals, check=False)
    weights = _truncation_weights(t, tol)
    A = G.adjacency_matrix()
    inv_deg = np.where(G.degree > 0, 1.0 / np.maximum(G.degree, 1), 0.0)
    cur = vals.copy()
    out = weights[0] * cur
    for w in weights[1:]:
        cur = (cur * inv_deg) @ A
        out += w * cur
    return Distribution(out, check=False)


def pagerank_exact(G: Graph, f, alpha: float, tol: float = 1e-9) -> Distribution:
    """Personalized PageRank alpha * sum_k (1-alpha)^k f P^k.

    Evaluated as the exact limit of the geometric series by solving
    x (I - (1-alpha) P) = alpha f; the fixed-point residual is checked
    against tol.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    from scipy.sparse import diags, identity
    from scipy.sparse.linalg import spsolve

    vals = _as_prob_values(G, f)
    A = G.adjacency_matrix()
    inv_deg = np.where(G.degree > 0, 1.0 / np.maximum(G.degree, 1), 0.0)
    system = (identity(G.n, format="csc") - (1.0 - alpha) * (A @ diags(inv_deg))).tocsc()
    x = spsolve(system, alpha * vals)
    x = np.maximum(x, 0.0)
    residual = np.abs(x - (alpha * vals + (1.0 - alpha) * ((x * inv_deg) @ A))).sum()
    if residual > tol:
        raise ArithmeticError(f"pagerank fixed-point residual {residual} exceeds {tol}")
    return Distribution(x, check=False)


def degree_seed_dist(G: Graph, S) -> Distribution:
    """The degree-proportional distribution restricted to S."""
    members = S.members if isinstance(S, VertexSet) else frozenset(int(v) for v in S)
    vol = volume(G, members)
    if vol == 0:
        raise ValueError("seed set has zero volume")
    vals = np.zeros(G.n)
    for v in members:
        vals[v] = G.degree[v] / vol
    return Distribution(vals, check=False)


def _walk_chunk(G: Graph, t: float, u: int, K: int, size: int, rng: np.random.Generator):
    lengths = np.minimum(sample_walk_lengths(t, size, rng), K)
    cur = np.full(size, u, dtype=np.int64)
    max_len = int(lengths.max(initial=0))
    for step in range(max_len):
        active = np.nonzero(lengths > step)[0]
        if active.size == 0:
            break
        v = cur[active]
        deg = G.degree[v]
        hop = rng.integers(0, deg)
        cur[active] = G.indices[G.indptr[v] + hop]
    return np.bincount(cur, minlength=G.n), int(lengths.sum())


def hkpr_approx_seed(
    G: Graph,
    t: float,
    u: int,
    eps: float,
    params: HkprParams | None = None,
    *,
    workers: int = 1,
) -> ApproxDistribution:
    """Monte-Carlo heat kernel pagerank from a single seed vertex.

    Runs r independent walks of length min(Poisson(t), K) and returns
    endpoint counts over r. Deterministic per rng_seed: walks are processed
    in fixed-size chunks, each chunk on its own counter-derived substream,
    so the result is bitwise identical for any worker count.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    u = int(u)
    if not 0 <= u < G.n:
        raise ValueError(f"seed vertex {u} outside 0..{G.n - 1}")
    if G.degree[u] == 0:
        raise ValueError(f"seed vertex {u} is isolated")
    base = params if params is not None else HkprParams(t=t, eps=eps)
    base = replace(base, t=t, eps=eps).resolved(G.n)
    r, K, seed = base.r, base.K, base.rng_seed

    chunks = [(c, min(_CHUNK, r - c * _CHUNK)) for c in range((r + _CHUNK - 1) // _CHUNK)]

    def run(chunk) -> tuple[np.ndarray, int]:
        c, size = chunk
        return _walk_chunk(G, t, u, K, size, substream(seed, c))

    counts = np.zeros(G.n, dtype=np.int64)
    steps = 0
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for chunk_counts, chunk_steps in pool.map(run, chunks):
                counts += chunk_counts
                steps += chunk_steps
    else:
        for chunk in chunks:
            chunk_counts, chunk_steps = run(chunk)
            counts += chunk_counts
            steps += chunk_steps

    nz = np.nonzero(counts)[0]
    return ApproxDistribution(
        {int(v): int(counts[v]) for v in nz}, r=r, n=G.n, walk_steps=steps
    )


class Violation(NamedTuple):
    """One vertex breaking the eps-approximation bounds."""

    vertex: int
    kind: str  # 'above', 'below', or 'off_support'
    observed: float
    bound: float
    slack: float


def is_eps_approximate(exact: Distribution, approx: ApproxDistribution, eps: float):
    """Check the componentwise eps-approximation contract.

    On the support of the approximation, (1-eps) rho(v) - eps <= nu(v)
    <= (1+eps) rho(v) (boundaries inclusive); off the support rho(v) <= eps.
    Returns (ok, violations) with per-vertex slack amounts.
    """
    if len(exact) != approx.n:
        raise ValueError(f"dimension mismatch: {len(exact)} != {approx.n}")
    rho = exact.values
    violations: list[Violation] = []
    in_support = np.zeros(approx.n, dtype=bool)
    for v, c in sorted(approx.counts.items()):
        in_support[v] = True
        nu = c / approx.r
        lower = (1.0 - eps) * rho[v] - eps
        upper = (1.0 + eps) * rho[v]
        if nu < lower:
            violations.append(Violation(v, "below", nu, lower, lower - nu))
        elif nu > upper:
            violations.append(Violation(v, "above", nu, upper, nu - upper))
    for v in np.nonzero(~in_support & (rho > eps))[0]:
        violations.append(Violation(int(v), "off_support", 0.0, eps, float(rho[v] - eps)))
    violations.sort(key=lambda viol: viol.vertex)
    return not violations, violations
