"""Bipartite matching tools: complement degree, k-factors, coprime perfect matchings."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "BipartiteGraph",
    "complement_max_degree",
    "find_k_factor",
    "hopcroft_karp",
    "log_matching_count_lower_bound",
    "matching_count_lower_bound",
    "max_flow",
    "random_coprime_matching",
]


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Dense bipartite graph; ``adj[i, j]`` is True iff left i and right j are joined."""

    adj: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.adj, dtype=bool)
        if a.ndim != 2:
            raise ValueError("adjacency must be 2-dimensional")
        object.__setattr__(self, "adj", a)

    @classmethod
    def coprime(cls, A: Sequence[int], B: Sequence[int]) -> "BipartiteGraph":
        a = np.asarray(A, dtype=np.int64)
        b = np.asarray(B, dtype=np.int64)
        return cls(np.gcd.outer(a, b) == 1)

    @property
    def shape(self) -> tuple[int, int]:
        return self.adj.shape

    @property
    def balanced(self) -> bool:
        return self.adj.shape[0] == self.adj.shape[1]


def complement_max_degree(G: BipartiteGraph) -> int:
    """Largest degree in the bipartite complement K_{A,B} minus G."""
    a = G.adj
    n_left, n_right = a.shape
    if a.size == 0:
        return 0
    missing_left = n_right - a.sum(axis=1)
    missing_right = n_left - a.sum(axis=0)
    return int(max(missing_left.max(), missing_right.max()))


class _Dinic:
    def __init__(self, n_nodes: int):
        self.head = [[] for _ in range(n_nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> int:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def _bfs(self, s, t):
        level = [-1] * len(self.head)
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in self.head[u]:
                if self.cap[e] > 0 and level[self.to[e]] < 0:
                    level[self.to[e]] = level[u] + 1
                    q.append(self.to[e])
        return level if level[t] >= 0 else None

    def _dfs(self, u, t, pushed, level, it):
        if u == t:
            return pushed
        edges = self.head[u]
        while it[u] < len(edges):
            e = edges[it[u]]
            v = self.to[e]
            if self.cap[e] > 0 and level[v] == level[u] + 1:
                got = self._dfs(v, t, min(pushed, self.cap[e]), level, it)
                if got:
                    self.cap[e] -= got
                    self.cap[e ^ 1] += got
                    return got
            it[u] += 1
        return 0

    def run(self, s: int, t: int) -> int:
        flow = 0
        while (level := self._bfs(s, t)) is not None:
            it = [0] * len(self.head)
            while pushed := self._dfs(s, t, math.inf, level, it):
                flow += pushed
        return flow


def max_flow(n_nodes: int, arcs: Sequence[tuple[int, int, int]], source: int, sink: int):
    """Dinic max-flow on an arc list; returns (value, per-arc flow)."""
    net = _Dinic(n_nodes)
    ids = [net.add_edge(u, v, c) for u, v, c in arcs]
    value = net.run(source, sink)
    return value, [arcs[i][2] - net.cap[e] for i, e in enumerate(ids)]


def find_k_factor(G: BipartiteGraph, k: int) -> np.ndarray | None:
    """A spanning subgraph with every degree exactly k, or None if none exists.

    Source -> left arcs and right -> sink arcs carry capacity k, graph edges
    capacity 1.  A k-factor exists iff the max flow saturates all k|A| units.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if not G.balanced:
        raise ValueError("k-factors need a balanced graph")
    n = G.shape[0]
    if k == 0:
        return np.zeros_like(G.adj)
    if k > n:
        return None
    src, sink = 2 * n, 2 * n + 1
    rows, cols = np.nonzero(G.adj)
    arcs = [(src, i, k) for i in range(n)]
    arcs += [(n + j, sink, k) for j in range(n)]
    edge_start = len(arcs)
    arcs += [(int(i), n + int(j), 1) for i, j in zip(rows, cols)]
    value, flows = max_flow(2 * n + 2, arcs, src, sink)
    if value < k * n:
        return None
    sub = np.zeros_like(G.adj)
    for (i, j), f in zip(zip(rows, cols), flows[edge_start:]):
        if f:
            sub[i, j] = True
    return sub


def log_matching_count_lower_bound(n: int, delta: int) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    if 3 * delta > n:
        raise ValueError("the bound needs delta <= n/3")
    return n * (math.log(n - 2 * delta) - 1.0)


def matching_count_lower_bound(n: int, delta: int) -> float:
    """((n - 2 delta)/e)^n, evaluated through its logarithm; inf past float range."""
    lg = log_matching_count_lower_bound(n, delta)
    return math.exp(lg) if lg < 709.0 else math.inf


def hopcroft_karp(neighbors: Sequence[Sequence[int]], n_right: int, match_left=None, match_right=None):
    """Maximum matching from a (possibly partial) starting matching.

    ``neighbors[u]`` lists right vertices of left vertex u, and may be any
    indexable sequence.  Returns (match_left, match_right) with -1 for free.
    """
    n_left = len(neighbors)
    ml = list(match_left) if match_left is not None else [-1] * n_left
    mr = list(match_right) if match_right is not None else [-1] * n_right
    inf = n_left + 1
    dist = [0] * n_left

    def bfs():
        q = deque()
        for u in range(n_left):
            if ml[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = inf
        found = False
        while q:
            u = q.popleft()
            for v in neighbors[u]:
                w = mr[v]
                if w < 0:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(root):
        # iterative augmenting-path search along the BFS layering
        stack = [(root, iter(neighbors[root]))]
        path = []
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                w = mr[v]
                if w < 0:
                    path.append((u, v))
                    for a, b in path:
                        ml[a] = b
                        mr[b] = a
                    return True
                if dist[w] == dist[u] + 1:
                    path.append((u, v))
                    stack.append((w, iter(neighbors[w])))
                    advanced = True
                    break
            if not advanced:
                dist[u] = inf
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if ml[u] < 0:
                dfs(u)
    return ml, mr


class _LazyNeighbors:
    def __init__(self, adj: np.ndarray):
        self.adj = adj
        self.cache: dict[int, list[int]] = {}

    def __len__(self):
        return self.adj.shape[0]

    def __getitem__(self, u):
        got = self.cache.get(u)
        if got is None:
            got = self.cache[u] = np.flatnonzero(self.adj[u]).tolist()
        return got


def random_coprime_matching(A: Sequence[int], B: Sequence[int], rng: np.random.Generator):
    """A perfect matching of the coprimality graph between A and B, or None.

    A greedy pass over A in shuffled order takes, for each vertex, the first
    free coprime partner in a shuffled order of B; Hopcroft-Karp then repairs
    whatever the greedy pass left unmatched.  None means no perfect matching
    exists.  The output distribution is not uniform over perfect matchings.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if len(A) != len(B):
        raise ValueError("sides must have equal size")
    n = len(A)
    if n == 0:
        return []
    a_order = rng.permutation(n)
    b_order = rng.permutation(n)
    A_s, B_s = A[a_order], B[b_order]
    adj = np.gcd.outer(A_s, B_s) == 1
    free = np.ones(n, dtype=bool)
    ml = [-1] * n
    mr = [-1] * n
    # greedy over shuffled A; columns are already in shuffled B order
    for u in range(n):
        cand = np.flatnonzero(adj[u] & free)
        if len(cand):
            v = int(cand[0])
            ml[u] = v
            mr[v] = u
            free[v] = False
    if min(ml) < 0:
        ml, mr = hopcroft_karp(_LazyNeighbors(adj), n, ml, mr)
        if min(ml) < 0:
            return None
    return [(int(A_s[u]), int(B_s[ml[u]])) for u in range(n)]
