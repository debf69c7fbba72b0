"""Regenerates two_pods.edges, the bundled clustering fixture.

Two random connected pods joined by a thin bridge: pod A has 20 vertices
and 44 internal edges (volume 96 counting bridge stubs), pod B has 42
vertices and 107 internal edges, and 8 cross edges connect them. The cut
around pod A therefore has Cheeger ratio 8/96 = 1/12. Totals: 62 vertices,
159 edges, volume 318.

Run from the repository root:

    python3 fixtures/make_two_pods.py > fixtures/two_pods.edges
"""

from __future__ import annotations

import sys

from hkcluster.rng import substream

SEED = 20
A_N, A_EXTRA = 20, 25  # spanning tree (19) + extras = 44 internal edges
B_N, B_EXTRA = 42, 66  # spanning tree (41) + extras = 107 internal edges
CROSS = 8


def random_connected(n: int, extra: int, rng) -> set[tuple[int, int]]:
    """Random spanning tree plus `extra` distinct non-tree edges."""
    edges: set[tuple[int, int]] = set()
    for v in range(1, n):
        u = int(rng.integers(v))
        edges.add((min(u, v), max(u, v)))
    while len(edges) < n - 1 + extra:
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return edges


def main() -> None:
    rng = substream(SEED, 0)
    a_edges = random_connected(A_N, A_EXTRA, rng)
    b_edges = random_connected(B_N, B_EXTRA, rng)
    cross: set[tuple[int, int]] = set()
    while len(cross) < CROSS:
        u = int(rng.integers(A_N))
        v = int(rng.integers(B_N))
        cross.add((u, v))

    out = sys.stdout
    out.write("# two pods: a00..a19 (44 internal edges), b00..b41 (107), 8 bridges\n")
    for u, v in sorted(a_edges):
        out.write(f"a{u:02d} a{v:02d}\n")
    for u, v in sorted(b_edges):
        out.write(f"b{u:02d} b{v:02d}\n")
    for u, v in sorted(cross):
        out.write(f"a{u:02d} b{v:02d}\n")


if __name__ == "__main__":
    main()
