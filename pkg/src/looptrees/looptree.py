"""Loop graphs of plane trees and their exact graph distances.

Two constructions are provided.  In the first (build_loop) every tree vertex
of degree d becomes a discrete cycle of d graph vertices and neighboring
cycles share exactly one graph vertex; leaf cycles degenerate to that shared
vertex, so a path of two tree vertices collapses to a single graph vertex.
In the second (build_loop_prime) the graph keeps all tree vertices and joins
consecutive siblings, each parent to its first child, and each parent to its
last child; a unary vertex is joined to its child by two parallel edges.

Distances in the second graph also come in closed form from the Lukasiewicz
walk, one loop contribution per common ancestor, which loop_prime_distance
evaluates without building the graph.
"""

from __future__ import annotations

import json

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .gw_tree import LukasiewiczPath, PlaneTree, encode_tree

__all__ = ["LoopGraph", "build_loop", "build_loop_prime", "loop_prime_distance"]


class LoopGraph:
    """Undirected multigraph with a record of where each vertex came from.

    ``edges`` keeps parallel edges as repeated rows; shortest paths ignore
    multiplicity, so BFS runs on the simple projection.  ``origin`` maps each
    graph vertex back to the tree: a plain vertex array when tree vertices
    are kept as-is, or an (n, 2) array of (tree vertex, corner) pairs when
    cycles share their corner vertices (corner 0 marks the attachment point
    to the parent's cycle).
    """

    __slots__ = ("vertex_count", "edges", "origin", "_adjacency")

    def __init__(self, vertex_count: int, edges, origin):
        self.vertex_count = int(vertex_count)
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= vertex_count):
            raise ValueError("edge endpoint out of range")
        self.edges = arr
        self.origin = np.asarray(origin, dtype=np.int64)
        self._adjacency = None

    @property
    def edge_count(self) -> int:
        """Number of edges counted with multiplicity."""
        return int(self.edges.shape[0])

    def adjacency(self) -> csr_matrix:
        """Symmetric 0/1 adjacency of the simple projection."""
        if self._adjacency is None:
            v = self.vertex_count
            if self.edges.size:
                u, w = self.edges[:, 0], self.edges[:, 1]
                data = np.ones(2 * len(u), dtype=np.int8)
                mat = csr_matrix(
                    (data, (np.concatenate([u, w]), np.concatenate([w, u]))),
                    shape=(v, v),
                )
                mat.data[:] = 1  # collapse parallel edges
                mat.sum_duplicates()
                mat.data[:] = 1
            else:
                mat = csr_matrix((v, v), dtype=np.int8)
            self._adjacency = mat
        return self._adjacency

    def neighbors(self, v: int) -> np.ndarray:
        adj = self.adjacency()
        return adj.indices[adj.indptr[v]:adj.indptr[v + 1]]

    def distances(self, sources=None) -> np.ndarray:
        """BFS distances from each source (all vertices when omitted)."""
        adj = self.adjacency()
        if sources is None:
            dist = dijkstra(adj, unweighted=True)
        else:
            dist = dijkstra(adj, unweighted=True, indices=np.atleast_1d(sources))
        if np.isinf(dist).any():
            raise RuntimeError("graph is not connected")
        return dist.astype(np.int64)

    def to_edge_list(self) -> str:
        """One 'u v' line per edge with u <= v, sorted; multiplicity kept."""
        if not self.edges.size:
            return ""
        lo = np.minimum(self.edges[:, 0], self.edges[:, 1])
        hi = np.maximum(self.edges[:, 0], self.edges[:, 1])
        order = np.lexsort((hi, lo))
        return "\n".join(f"{lo[k]} {hi[k]}" for k in order)

    def to_json(self) -> str:
        lo = np.minimum(self.edges[:, 0], self.edges[:, 1])
        hi = np.maximum(self.edges[:, 0], self.edges[:, 1])
        order = np.lexsort((hi, lo))
        return json.dumps(
            {
                "vertex_count": self.vertex_count,
                "edges": np.column_stack([lo, hi])[order].tolist(),
                "origin": self.origin.tolist(),
            },
            sort_keys=True,
        )

    def __repr__(self) -> str:
        return f"LoopGraph(vertices={self.vertex_count}, edges={self.edge_count})"


def _grouped_children(tree: PlaneTree):
    """Non-root vertices sorted by parent (stable, so siblings keep order)."""
    path = encode_tree(tree)
    parent = path._ensure_index().parent
    order = np.argsort(parent[1:], kind="stable") + 1
    grouped_parent = parent[order]
    starts = np.flatnonzero(np.r_[True, grouped_parent[1:] != grouped_parent[:-1]])
    ends = np.r_[starts[1:], grouped_parent.size] - 1
    return order, grouped_parent, starts, ends


def build_loop(tree: PlaneTree) -> LoopGraph:
    """Cycle-per-vertex graph with shared corner vertices.

    Graph vertex v-1 stands for the corner where the cycle of tree vertex v
    meets the cycle of its parent; the cycle of a vertex with k children
    therefore runs through its own corner followed by its children's corners
    in sibling order (the root cycle has no own corner).  Degenerate cycles
    of length one contribute no edge, length two yields a double edge.
    """
    n = tree.size
    if n == 1:
        return LoopGraph(1, np.empty((0, 2), dtype=np.int64), np.array([[0, 0]]))
    order, grouped_parent, starts, ends = _grouped_children(tree)
    sibling = grouped_parent[1:] == grouped_parent[:-1]
    edge_u = [order[:-1][sibling] - 1]
    edge_v = [order[1:][sibling] - 1]
    firsts = order[starts]
    lasts = order[ends]
    parents = grouped_parent[starts]
    nonroot = parents != 0
    # non-root u: close the cycle through u's own corner on both sides
    edge_u.append(parents[nonroot] - 1)
    edge_v.append(firsts[nonroot] - 1)
    edge_u.append(lasts[nonroot] - 1)
    edge_v.append(parents[nonroot] - 1)
    # root: wrap last child to first child, except the degenerate 1-cycle
    if not nonroot[0] and ends[0] > starts[0]:
        edge_u.append(lasts[:1] - 1)
        edge_v.append(firsts[:1] - 1)
    edges = np.column_stack([np.concatenate(edge_u), np.concatenate(edge_v)])
    origin = np.column_stack([
        np.arange(1, n, dtype=np.int64),
        np.zeros(n - 1, dtype=np.int64),
    ])
    return LoopGraph(n - 1, edges, origin)


def build_loop_prime(tree: PlaneTree) -> LoopGraph:
    """Graph on all tree vertices: sibling edges plus first/last child edges."""
    n = tree.size
    if n == 1:
        return LoopGraph(1, np.empty((0, 2), dtype=np.int64), np.zeros(1, dtype=np.int64))
    order, grouped_parent, starts, ends = _grouped_children(tree)
    sibling = grouped_parent[1:] == grouped_parent[:-1]
    firsts = order[starts]
    lasts = order[ends]
    parents = grouped_parent[starts]
    edges = np.column_stack([
        np.concatenate([order[:-1][sibling], parents, lasts]),
        np.concatenate([order[1:][sibling], firsts, parents]),
    ])
    return LoopGraph(n, edges, np.arange(n, dtype=np.int64))


def _cycle_gap(steps: np.ndarray, k: int, a: int, b: int) -> int:
    """Distance between positions a, b on the cycle of vertex k (k+1 slots
    for k children, so the modulus is the child count plus one)."""
    width = abs(b - a)
    return min(width, int(steps[k]) + 2 - width)


def _ancestor_distance(path: LukasiewiczPath, i: int, j: int) -> int:
    """Graph distance when vertex i is an ancestor of vertex j: one cycle
    contribution per chain vertex from i (inclusive) up to j (exclusive)."""
    w = path.values
    steps = path.steps
    parent = path._ensure_index().parent
    total = 0
    cur = j
    low = w[j]
    while cur != i:
        a = int(parent[cur])
        low = min(low, int(w[cur]))
        x = low - int(w[a]) + 1
        total += _cycle_gap(steps, a, 0, x)
        cur = a
    return total


def _junction_distance(path: LukasiewiczPath, i: int, j: int) -> int:
    """Three-part form: climb both branches to the common ancestor and add
    the junction gap there.  Also valid when i is itself the ancestor, in
    which case the i-side climb is empty and its cycle position is 0."""
    w = path.values
    steps = path.steps
    parent = path._ensure_index().parent
    low = int(w[i:j + 1].min())

    sum_j = 0
    cur = j
    running = int(w[j])
    while True:
        a = int(parent[cur])
        running = min(running, int(w[cur]))
        x = running - int(w[a]) + 1
        if a <= i:
            meet, x_j = a, x
            break
        sum_j += _cycle_gap(steps, a, 0, x)
        cur = a

    if meet == i:
        sum_i, x_i = 0, 0
    else:
        sum_i = 0
        cur = i
        running = int(w[i])
        while True:
            a = int(parent[cur])
            running = min(running, int(w[cur]))
            x = running - int(w[a]) + 1
            if int(w[a]) <= low:
                x_i = x
                break
            sum_i += _cycle_gap(steps, a, 0, x)
            cur = a

    return sum_i + sum_j + _cycle_gap(steps, meet, x_i, x_j)


def loop_prime_distance(path: LukasiewiczPath, i: int, j: int) -> int:
    """Exact distance between vertices i and j in the sibling-joined graph,
    straight from the walk: the most recent common ancestor is located by
    the window minimum, and each cycle along the two descents contributes
    its circular gap."""
    n = path.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"vertex pair ({i}, {j}) out of range [0, {n})")
    if i == j:
        return 0
    if i > j:
        i, j = j, i
    if path.values[i] == path.values[i:j + 1].min():
        return _ancestor_distance(path, i, j)
    return _junction_distance(path, i, j)
