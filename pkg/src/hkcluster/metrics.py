"""Error measures between exact and approximate vectors and rankings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hkpr import ApproxDistribution, Distribution

DEFAULT_TOP_K = 10


@dataclass(frozen=True)
class ErrorReport:
    """One row of vector-vs-vector comparison results."""

    avg_l1: float
    eps_error: float
    intersection_difference: float
    topk_difference: float
    k_used: int


def _dense(d, n: int) -> np.ndarray:
    if isinstance(d, ApproxDistribution):
        if d.n != n:
            raise ValueError(f"dimension mismatch: {d.n} != {n}")
        return d.to_dense()
    if isinstance(d, Distribution):
        vals = d.values
    else:
        vals = np.asarray(d, dtype=np.float64)
    if len(vals) != n:
        raise ValueError(f"dimension mismatch: {len(vals)} != {n}")
    return vals


def avg_l1_error(exact: Distribution, approx) -> float:
    """Mean absolute per-vertex difference, (1/n) sum |rho - nu|."""
    rho = exact.values
    nu = _dense(approx, len(rho))
    return float(np.abs(rho - nu).mean())


def eps_error(exact: Distribution, approx, eps: float) -> float:
    """Accumulated error beyond an eps-approximation.

    sum over support(nu) of max(|rho - nu| - eps rho, 0) plus, off the
    support, max(rho - eps, 0).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    rho = exact.values
    nu = _dense(approx, len(rho))
    on = nu > 0
    support_term = np.maximum(np.abs(rho[on] - nu[on]) - eps * rho[on], 0.0).sum()
    off_term = np.maximum(rho[~on] - eps, 0.0).sum()
    return float(support_term + off_term)


def _padded(order, n: int) -> list[int]:
    seq = [int(v) for v in (order.order if hasattr(order, "order") else order)]
    seen = set(seq)
    if len(seen) != len(seq):
        raise ValueError("ranking contains duplicate vertices")
    for v in seq:
        if not 0 <= v < n:
            raise ValueError(f"ranked vertex {v} outside 0..{n - 1}")
    # unranked vertices follow in ascending id order
    seq.extend(v for v in range(n) if v not in seen)
    return seq


def _prefix_differences(A, B, n: int) -> np.ndarray:
    """|A_i xor B_i| / 2i for i = 1..n, via incremental prefix intersection."""
    a = _padded(A, n)
    b = _padded(B, n)
    seen_a: set[int] = set()
    seen_b: set[int] = set()
    common = 0
    out = np.empty(n)
    for i in range(n):
        x, y = a[i], b[i]
        if x == y:
            common += 1
        else:
            if x in seen_b:
                common += 1
            if y in seen_a:
                common += 1
        seen_a.add(x)
        seen_b.add(y)
        # |A_i xor B_i| = 2 (i - |A_i intersect B_i|)
        out[i] = (i + 1 - common) / (i + 1)
    return out


def _universe(A, B) -> int:
    na = getattr(A, "n", None)
    nb = getattr(B, "n", None)
    if na is not None and nb is not None and na != nb:
        raise ValueError(f"rankings over different universes: {na} != {nb}")
    if na is not None:
        return na
    seq_a = list(A.order if hasattr(A, "order") else A)
    seq_b = list(B.order if hasattr(B, "order") else B)
    return max(len(seq_a), len(seq_b), *(int(v) + 1 for v in seq_a + seq_b))


def intersection_difference(A, B) -> float:
    """Ranking distance (1/n) sum_i |A_i xor B_i| / 2i, in [0, 1]."""
    n = _universe(A, B)
    return float(_prefix_differences(A, B, n).mean())


def topk_intersection_difference(A, B, k: int = DEFAULT_TOP_K) -> float:
    """The same prefix sum truncated to the first k ranks."""
    n = _universe(A, B)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    return float(_prefix_differences(A, B, n)[:k].mean())
