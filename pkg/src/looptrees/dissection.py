"""Polygon dissections, their dual trees, and Boltzmann sampling.

Polygon vertices are 0..n_sides-1 counterclockwise.  The side from 0 to 1 is
the root side: the face containing it becomes the root of the dual tree, and
walking a face counterclockwise lists the sub-regions that become its
children in order.  Internally the walk uses coordinates 1..n with vertex n
standing for polygon vertex 0, so every region is an increasing pair.
"""

from __future__ import annotations

import bisect
import json
import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .gw_tree import OffspringLaw, PlaneTree, tree_stats
from .looptree import build_loop

__all__ = [
    "Dissection",
    "dual_tree",
    "from_dual",
    "sample_boltzmann",
    "gh_gap_check",
]


class Dissection:
    """Non-crossing chord set of a convex polygon; the sides are implicit."""

    __slots__ = ("n_sides", "chords")

    def __init__(self, n_sides: int, chords=()):
        n = int(n_sides)
        if n < 3:
            raise ValueError(f"a polygon needs at least 3 sides, got {n}")
        arr = np.asarray(list(chords), dtype=np.int64).reshape(-1, 2)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError("chord endpoint outside the polygon")
            lo = np.minimum(arr[:, 0], arr[:, 1])
            hi = np.maximum(arr[:, 0], arr[:, 1])
            gap = np.minimum(hi - lo, n - (hi - lo))
            if np.any(gap < 2):
                k = int(np.argmax(gap < 2))
                raise ValueError(
                    f"chord ({arr[k, 0]}, {arr[k, 1]}) does not join two "
                    "non-adjacent vertices"
                )
            arr = np.column_stack([lo, hi])
            arr = arr[np.lexsort((arr[:, 1], arr[:, 0]))]
            if np.any((np.diff(arr[:, 0]) == 0) & (np.diff(arr[:, 1]) == 0)):
                raise ValueError("duplicate chord")
            _check_crossings(arr)
        self.n_sides = n
        self.chords = arr

    @property
    def chord_count(self) -> int:
        return int(self.chords.shape[0])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Dissection)
            and self.n_sides == other.n_sides
            and np.array_equal(self.chords, other.chords)
        )

    def __hash__(self):
        return hash((self.n_sides, self.chords.tobytes()))

    def __repr__(self) -> str:
        return f"Dissection(n_sides={self.n_sides}, chords={self.chord_count})"

    def to_json(self) -> str:
        return json.dumps(
            {"n_sides": self.n_sides, "chords": self.chords.tolist()},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Dissection":
        data = json.loads(text)
        return cls(data["n_sides"], data["chords"])

    def graph_distances(self) -> np.ndarray:
        """All-pairs BFS distances of the polygon-plus-chords graph."""
        n = self.n_sides
        k = np.arange(n)
        u = np.concatenate([k, self.chords[:, 0]])
        v = np.concatenate([(k + 1) % n, self.chords[:, 1]])
        data = np.ones(2 * u.size, dtype=np.int8)
        adj = csr_matrix(
            (data, (np.concatenate([u, v]), np.concatenate([v, u]))),
            shape=(n, n),
        )
        return dijkstra(adj, unweighted=True).astype(np.int64)

    def to_svg(self, size: int = 400, header_lines=()) -> str:
        """Unit-disk drawing: polygon outline plus chords."""
        n = self.n_sides
        r = size * 0.46
        cx = cy = size / 2
        angle = 2.0 * math.pi / n
        pts = [
            (cx + r * math.cos(angle * k), cy - r * math.sin(angle * k))
            for k in range(n)
        ]
        lines = [f"<!-- {line} -->" for line in header_lines]
        lines.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
            f'height="{size}" viewBox="0 0 {size} {size}">'
        )
        outline = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        lines.append(
            f'<polygon points="{outline}" fill="none" stroke="black" stroke-width="1.5"/>'
        )
        for a, b in self.chords.tolist():
            x1, y1 = pts[a]
            x2, y2 = pts[b]
            lines.append(
                f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                'stroke="steelblue" stroke-width="1"/>'
            )
        lines.append("</svg>")
        return "\n".join(lines)


def _check_crossings(chords: np.ndarray) -> None:
    """Chords are normalized (lo, hi) rows; raise on the first crossing."""
    m = chords.shape[0]
    for i in range(m):
        a, b = int(chords[i, 0]), int(chords[i, 1])
        for j in range(i + 1, m):
            c, d = int(chords[j, 0]), int(chords[j, 1])
            if (a < c < b < d) or (c < a < d < b):
                raise ValueError(f"chords ({a}, {b}) and ({c}, {d}) cross")


def _walk_adjacency(d: Dissection):
    """Sorted higher-endpoint neighbor lists in walk coordinates 1..n.

    Walk coordinate n stands for polygon vertex 0.  The root side (0, 1) is
    omitted on purpose: it is the removed dual edge.
    """
    n = d.n_sides
    nbr = [[] for _ in range(n + 1)]
    for v in range(1, n):
        nbr[v].append(v + 1)  # sides (v, v+1), including (n-1, n)
    for a, b in d.chords.tolist():
        wa = a if a >= 1 else n
        wb = b if b >= 1 else n
        lo, hi = min(wa, wb), max(wa, wb)
        nbr[lo].append(hi)
    for v in range(1, n + 1):
        nbr[v].sort()
    return nbr


def _dual_with_regions(d: Dissection):
    """Children counts of the dual tree plus each vertex's region (a, b)."""
    n = d.n_sides
    nbr = _walk_adjacency(d)
    counts = []
    regions = []
    stack = [(1, n)]
    while stack:
        a, b = stack.pop()
        regions.append((a, b))
        if b == a + 1:
            counts.append(0)
            continue
        corners = [a]
        z = a
        while z != b:
            cand = nbr[z]
            k = bisect.bisect_right(cand, b) - 1
            w = cand[k]
            if w == b and z == a:
                # the delimiting chord itself; take the next one down
                w = cand[k - 1]
            corners.append(w)
            z = w
        counts.append(len(corners) - 1)
        for t in range(len(corners) - 1, 0, -1):
            stack.append((corners[t - 1], corners[t]))
    return np.array(counts, dtype=np.int64), regions


def dual_tree(d: Dissection) -> PlaneTree:
    """Plane tree of the faces: the face at the root side becomes the root,
    a face of degree k an internal vertex with k-1 children, and each
    polygon side other than the root side a leaf."""
    counts, _ = _dual_with_regions(d)
    return PlaneTree(counts)


def from_dual(tree: PlaneTree) -> Dissection:
    """Dissection whose dual is ``tree``; needs >= 2 leaves and no unary
    vertex.  The k-th leaf in depth-first order becomes the polygon side
    (k, k+1) and every other non-root vertex the chord spanning its leaves."""
    counts = tree.children_counts
    if np.any(counts == 1):
        v = int(np.argmax(counts == 1))
        raise ValueError(f"vertex {v} has exactly one child; no dual dissection")
    n_leaves = int(np.count_nonzero(counts == 0))
    if n_leaves < 2:
        raise ValueError("the dual construction needs at least 2 leaves")
    n = n_leaves + 1
    chords = []
    # depth-first sweep; each open vertex remembers its first leaf's rank
    leaf_rank = 0
    stack = []  # entries [vertex, first_leaf_rank, children_left]
    for v, k in enumerate(counts.tolist()):
        if k > 0:
            stack.append([v, leaf_rank + 1, k])
            continue
        leaf_rank += 1
        # a completed subtree closes one slot of each ancestor in turn
        while stack:
            stack[-1][2] -= 1
            if stack[-1][2] > 0:
                break
            v_done, first, _ = stack.pop()
            if v_done != 0:
                chords.append((first, leaf_rank + 1))
    chords_polygon = [(a % n, b % n) for a, b in chords]
    return Dissection(n, chords_polygon)


def sample_boltzmann(law: OffspringLaw, n_leaves: int,
                     rng: np.random.Generator) -> Dissection:
    """Random dissection weighted by the product of face terms mu_(deg-1).

    Equivalent to the dual of a branching-process tree conditioned to have
    exactly ``n_leaves`` leaves, which is sampled by plain rejection: grow
    unconditioned trees and keep the first one with the right leaf count.
    """
    if not law.forbids_unary:
        raise ValueError("the offspring law must give unary vertices zero mass")
    if n_leaves < 2:
        raise ValueError(f"n_leaves must be >= 2, got {n_leaves}")
    # a tree without unary vertices and n leaves has at most 2n-1 vertices
    row = 2 * n_leaves - 1
    cap = 1_000_000
    batch = 256
    attempts = 0
    while attempts < cap:
        rows = min(batch, cap - attempts)
        xi = law.sample(rows * row, rng).reshape(rows, row)
        walk = np.cumsum(xi - 1, axis=1)
        hit = walk == -1
        has_hit = hit.any(axis=1)
        first = np.argmax(hit, axis=1)
        zeros = np.cumsum(xi == 0, axis=1)
        ok = has_hit & (zeros[np.arange(rows), first] == n_leaves)
        attempts += rows
        if ok.any():
            r = int(np.argmax(ok))
            tree = PlaneTree(xi[r, : first[r] + 1])
            return from_dual(tree)
        batch = min(2 * batch, 8192)
    raise RuntimeError(
        f"no tree with {n_leaves} leaves in {cap} attempts; "
        "this leaf count may be unreachable or too large for this law"
    )


def gh_gap_check(d: Dissection):
    """Compare the dissection metric with its dual looptree metric.

    Pairs every non-root dual-tree vertex's graph image with both endpoints
    of its polygon edge (its side for a leaf, its chord otherwise), computes
    the distortion of that correspondence from exact BFS metrics, and tests
    the resulting bound against the dual tree's height plus two.  Returns
    (bound_holds, distortion/2).
    """
    counts, regions = _dual_with_regions(d)
    tree = PlaneTree(counts)
    n = d.n_sides
    poly_dist = d.graph_distances()
    loop = build_loop(tree)
    loop_dist = loop.distances()
    # endpoints in polygon labels; skip the root (its region is the root side)
    ends = np.array([(a % n, b % n) for a, b in regions[1:]], dtype=np.int64)
    glue = np.arange(1, tree.size, dtype=np.int64) - 1
    px = np.concatenate([ends[:, 0], ends[:, 1]])
    gx = np.concatenate([glue, glue])
    dis = np.abs(
        poly_dist[np.ix_(px, px)] - loop_dist[np.ix_(gx, gx)]
    ).max()
    height = tree_stats(tree).height
    observed = dis / 2.0
    return observed <= height + 2, float(observed)
