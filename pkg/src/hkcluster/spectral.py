"""Dirichlet eigenvalues of restricted normalized Laplacians.

Used as a numerical verification tool for the local Cheeger inequality,
not as a performance path, so everything is dense and size-guarded.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, VertexSet

MAX_DENSE_SET = 500
EIG_RESIDUAL = 1e-10


def restricted_laplacian(G: Graph, S) -> tuple[np.ndarray, list[int]]:
    """L_S = I - D^-1/2 A_S D^-1/2 over S, with degrees from the full graph.

    Returns the dense symmetric matrix and the vertex order indexing it.
    """
    members = sorted(S.members if isinstance(S, VertexSet) else {int(v) for v in S})
    k = len(members)
    if not 1 <= k <= MAX_DENSE_SET:
        raise ValueError(f"|S| must lie in 1..{MAX_DENSE_SET}, got {k}")
    pos = {v: i for i, v in enumerate(members)}
    deg = np.array([G.degree[v] for v in members], dtype=np.float64)
    if np.any(deg == 0):
        raise ValueError("S contains a vertex of degree 0; L_S is undefined there")
    L = np.eye(k)
    for v in members:
        i = pos[v]
        for w in G.neighbors(v):
            j = pos.get(int(w))
            if j is not None:
                L[i, j] = -1.0 / np.sqrt(deg[i] * deg[j])
    return L, members


def dirichlet_lambda(G: Graph, S) -> float:
    """Smallest eigenvalue of the restricted normalized Laplacian of S."""
    L, _ = restricted_laplacian(G, S)
    vals, vecs = np.linalg.eigh(L)
    lam = float(vals[0])
    x = vecs[:, 0]
    residual = float(np.linalg.norm(L @ x - lam * x))
    if residual > EIG_RESIDUAL:
        raise ArithmeticError(f"eigenpair residual {residual} exceeds {EIG_RESIDUAL}")
    return lam
