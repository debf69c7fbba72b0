"""Immutable undirected graphs and the cut quantities built on them."""

from __future__ import annotations

from collections import deque
from pathlib import Path
from typing import IO, Iterable

import numpy as np

MAX_BRUTE_SET = 20


class Graph:
    """Simple undirected graph in CSR form.

    Vertices are dense ids 0..n-1. Neighbor lists are sorted, free of
    self-loops and duplicates, and symmetric. Optional string labels are
    kept for graphs ingested from edge-list files.
    """

    __slots__ = (
        "n",
        "indptr",
        "indices",
        "degree",
        "labels",
        "self_loops_dropped",
        "duplicates_dropped",
        "_label_to_id",
        "_adjacency_matrix",
    )

    def __init__(
        self,
        n: int,
        indptr: np.ndarray,
        indices: np.ndarray,
        labels: tuple[str, ...] | None = None,
        self_loops_dropped: int = 0,
        duplicates_dropped: int = 0,
    ):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.degree = np.diff(indptr)
        self.labels = labels
        self.self_loops_dropped = self_loops_dropped
        self.duplicates_dropped = duplicates_dropped
        self._label_to_id = (
            {lab: i for i, lab in enumerate(labels)} if labels is not None else None
        )
        self._adjacency_matrix = None

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: tuple[str, ...] | None = None,
    ) -> "Graph":
        """Build a graph from an edge iterable, dropping loops and duplicates."""
        seen: set[tuple[int, int]] = set()
        loops = 0
        dups = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                dups += 1
                continue
            seen.add(key)
        m = len(seen)
        if m:
            arr = np.array(sorted(seen), dtype=np.int64)
            heads = np.concatenate([arr[:, 0], arr[:, 1]])
            tails = np.concatenate([arr[:, 1], arr[:, 0]])
        else:
            heads = np.empty(0, dtype=np.int64)
            tails = np.empty(0, dtype=np.int64)
        order = np.lexsort((tails, heads))
        heads = heads[order]
        tails = tails[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, heads + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(
            n,
            indptr,
            tails,
            labels=labels,
            self_loops_dropped=loops,
            duplicates_dropped=dups,
        )

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def total_volume(self) -> int:
        """Sum of all degrees, 2m."""
        return len(self.indices)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    def label_of(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def resolve_vertex(self, key: str | int) -> int:
        """Map a label or numeric id to a vertex id."""
        if self._label_to_id is not None and str(key) in self._label_to_id:
            return self._label_to_id[str(key)]
        try:
            v = int(key)
        except (TypeError, ValueError):
            raise KeyError(f"unknown vertex label {key!r}") from None
        if not 0 <= v < self.n:
            raise KeyError(f"vertex id {v} outside 0..{self.n - 1}")
        return v

    def adjacency_matrix(self):
        """Symmetric CSR adjacency with unit weights (built lazily)."""
        if self._adjacency_matrix is None:
            from scipy.sparse import csr_matrix

            data = np.ones(len(self.indices), dtype=np.float64)
            self._adjacency_matrix = csr_matrix(
                (data, self.indices, self.indptr), shape=(self.n, self.n)
            )
        return self._adjacency_matrix

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    queue.append(int(w))
        return count == self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class VertexSet:
    """A subset of vertices with its volume cached."""

    __slots__ = ("members", "volume")

    def __init__(self, G: Graph, members: Iterable[int]):
        ms = frozenset(int(v) for v in members)
        for v in ms:
            if not 0 <= v < G.n:
                raise ValueError(f"vertex {v} outside 0..{G.n - 1}")
        self.members = ms
        self.volume = int(sum(G.degree[v] for v in ms))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v) -> bool:
        return v in self.members


def _as_members(S) -> frozenset:
    if isinstance(S, VertexSet):
        return S.members
    return frozenset(int(v) for v in S)


def parse_edge_list(lines: Iterable[str]) -> Graph:
    """Parse whitespace-separated vertex pairs, one edge per line.

    Lines starting with '#' and blank lines are skipped. Labels may be
    arbitrary strings and are mapped to dense ids in first-appearance order.
    Duplicate edges and self-loops are dropped, with counts recorded on the
    returned graph.
    """
    label_to_id: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int]] = []

    def vid(label: str) -> int:
        if label not in label_to_id:
            label_to_id[label] = len(labels)
            labels.append(label)
        return label_to_id[label]

    saw_line = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        saw_line = True
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two vertex labels, got {raw!r}")
        edges.append((vid(parts[0]), vid(parts[1])))
    if not saw_line:
        raise ValueError("empty edge list")
    return Graph.from_edges(len(labels), edges, labels=tuple(labels))


def load_edge_list(source: str | Path | IO[str]) -> Graph:
    """Load an edge list from a path or an open text stream."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return parse_edge_list(fh)
    return parse_edge_list(source)


def dump_edge_list(G: Graph, target: str | Path | IO[str]) -> None:
    """Write the graph back out as one `u v` line per edge."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as fh:
            dump_edge_list(G, fh)
        return
    for u in range(G.n):
        for v in G.neighbors(u):
            if u < v:
                target.write(f"{G.label_of(u)} {G.label_of(int(v))}\n")


def volume(G: Graph, S) -> int:
    """vol(S): sum of the degrees of the members of S."""
    members = _as_members(S)
    total = 0
    for v in members:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} outside 0..{G.n - 1}")
        total += int(G.degree[v])
    return total


def edge_boundary(G: Graph, S) -> int:
    """Number of edges with exactly one endpoint in S."""
    members = _as_members(S)
    count = 0
    for v in members:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} outside 0..{G.n - 1}")
        for w in G.neighbors(v):
            if w not in members:
                count += 1
    return count


def cheeger_ratio(G: Graph, S) -> float:
    """Boundary size over the volume of the smaller side of the cut."""
    members = _as_members(S)
    vol_s = volume(G, members)
    denom = min(vol_s, G.total_volume - vol_s)
    if len(members) == 0 or len(members) == G.n:
        raise ValueError("Cheeger ratio undefined for the empty set or the full vertex set")
    if denom == 0:
        raise ValueError("Cheeger ratio undefined: one side of the cut has zero volume")
    return edge_boundary(G, members) / denom


def local_cheeger_brute(G: Graph, S) -> float:
    """min over nonempty T subseteq S of cheeger_ratio(G, T), by enumeration."""
    members = sorted(_as_members(S))
    k = len(members)
    if k == 0:
        raise ValueError("local Cheeger ratio undefined for the empty set")
    if k > MAX_BRUTE_SET:
        raise ValueError(f"brute-force enumeration capped at |S| = {MAX_BRUTE_SET}, got {k}")
    # adjacency among S as bitmasks so each subset costs O(|T|) words
    pos = {v: i for i, v in enumerate(members)}
    masks = []
    for v in members:
        mask = 0
        for w in G.neighbors(v):
            if int(w) in pos:
                mask |= 1 << pos[int(w)]
        masks.append(mask)
    degs = [int(G.degree[v]) for v in members]
    total = G.total_volume
    best = np.inf
    for bits in range(1, 1 << k):
        vol_t = 0
        internal2 = 0  # twice the internal edge count
        rest = bits
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            vol_t += degs[i]
            internal2 += (masks[i] & bits).bit_count()
            rest ^= low
        denom = min(vol_t, total - vol_t)
        if denom == 0:
            continue
        ratio = (vol_t - internal2) / denom
        if ratio < best:
            best = ratio
    if not np.isfinite(best):
        raise ValueError("no subset of S yields a defined Cheeger ratio")
    return float(best)
