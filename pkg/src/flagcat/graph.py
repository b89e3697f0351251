"""Weighted simple graphs and their girth."""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from . import kernels


class GraphError(ValueError):
    pass


class WeightedGraph:
    """Finite simple graph with positive edge weights.

    Nodes are arbitrary hashable labels kept in insertion order; edges are
    stored once per unordered pair.  Iteration order is deterministic.
    """

    def __init__(self, nodes=()):
        self._index = {}
        self.nodes = []
        self._edges = {}
        for v in nodes:
            self.add_node(v)

    def add_node(self, v):
        if v not in self._index:
            self._index[v] = len(self.nodes)
            self.nodes.append(v)
        return self._index[v]

    def add_edge(self, u, v, weight):
        if u == v:
            raise GraphError(f"self-loop at {u!r}")
        if not weight > 0:
            raise GraphError(f"non-positive weight on {u!r}-{v!r}")
        i, j = self.add_node(u), self.add_node(v)
        key = (i, j) if i < j else (j, i)
        if key in self._edges:
            raise GraphError(f"parallel edge {u!r}-{v!r}")
        self._edges[key] = weight

    def has_edge(self, u, v) -> bool:
        i, j = self._index.get(u), self._index.get(v)
        if i is None or j is None:
            return False
        return ((i, j) if i < j else (j, i)) in self._edges

    def weight(self, u, v):
        i, j = self._index[u], self._index[v]
        return self._edges[(i, j) if i < j else (j, i)]

    def edges(self):
        """``(u, v, weight)`` triples in insertion order."""
        return [(self.nodes[i], self.nodes[j], w) for (i, j), w in self._edges.items()]

    def neighbours(self, v):
        i = self._index[v]
        out = []
        for (a, b) in self._edges:
            if a == i:
                out.append(self.nodes[b])
            elif b == i:
                out.append(self.nodes[a])
        return out

    def __len__(self):
        return len(self.nodes)

    @property
    def n_edges(self):
        return len(self._edges)

    def total_weight(self):
        return sum(self._edges.values())

    def subgraph(self, nodes) -> "WeightedGraph":
        wanted = set(nodes)
        keep = [v for v in self.nodes if v in wanted]
        out = WeightedGraph(keep)
        for u, v, w in self.edges():
            if out.has_node(u) and out.has_node(v):
                out.add_edge(u, v, w)
        return out

    def has_node(self, v) -> bool:
        return v in self._index

    def arrays(self):
        """``(n, eu, ev, ew)`` numpy view for the kernels (float weights)."""
        m = len(self._edges)
        eu = np.empty(m, dtype=np.int64)
        ev = np.empty(m, dtype=np.int64)
        ew = np.empty(m, dtype=np.float64)
        for k, ((i, j), w) in enumerate(self._edges.items()):
            eu[k], ev[k], ew[k] = i, j, float(w)
        return len(self.nodes), eu, ev, ew

    def degrees(self):
        deg = {v: 0 for v in self.nodes}
        for u, v, _ in self.edges():
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class Cycle:
    length: float
    nodes: tuple  # closed walk listed without repeating the start


def girth(G: WeightedGraph, exact: bool = False):
    """Shortest simple cycle of ``G`` as a :class:`Cycle`, or None for a forest.

    Float weights go through the compiled kernel.  With ``exact=True`` the
    same per-edge Dijkstra runs in Python on the stored weight objects, so
    mpmath or Fraction weights keep their precision.
    """
    if G.n_edges == 0:
        return None
    if not exact:
        n, eu, ev, ew = G.arrays()
        length, verts, _ = kernels.girth_kernel(n, eu, ev, ew)
        if not np.isfinite(length):
            return None
        return Cycle(float(length), tuple(G.nodes[int(i)] for i in verts))
    return _girth_python(G)


def _girth_python(G: WeightedGraph):
    n = len(G.nodes)
    adj = [[] for _ in range(n)]
    elist = list(G._edges.items())
    for k, ((i, j), w) in enumerate(elist):
        adj[i].append((j, k, w))
        adj[j].append((i, k, w))
    best = None
    best_cycle = None
    for k, ((s, t), wk) in enumerate(elist):
        if best is not None and wk >= best:
            continue
        dist = {s: 0}
        pred = {}
        heap = [(0, s)]
        found = False
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            if best is not None and d + wk >= best:
                break
            if u == t:
                found = True
                break
            for x, e, w in adj[u]:
                if e == k:
                    continue
                nd = d + w
                if x not in dist or nd < dist[x]:
                    dist[x] = nd
                    pred[x] = u
                    heapq.heappush(heap, (nd, x))
        if found:
            total = dist[t] + wk
            if best is None or total < best:
                path = [t]
                while path[-1] != s:
                    path.append(pred[path[-1]])
                best = total
                best_cycle = tuple(G.nodes[i] for i in reversed(path))
    if best is None:
        return None
    return Cycle(best, best_cycle)


def cycle_length(G: WeightedGraph, nodes) -> float:
    """Sum of edge weights around a closed walk given without its repeat."""
    return sum(G.weight(a, b) for a, b in zip(nodes, tuple(nodes[1:]) + tuple(nodes[:1])))


# ---------------------------------------------------------------------------
# graph files


def _label(v) -> str:
    if isinstance(v, tuple):
        return ">".join(str(x) for x in v)
    return str(v)


def format_graph(G: WeightedGraph) -> str:
    lines = [f"node {_label(v)}" for v in G.nodes]
    lines += [f"arc {_label(u)} {_label(v)} {w!r}" for u, v, w in G.edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> WeightedGraph:
    G = WeightedGraph()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = line.split()
        try:
            if kind == "node" and len(args) == 1:
                G.add_node(args[0])
            elif kind == "arc" and len(args) == 3:
                G.add_edge(args[0], args[1], float(args[2]))
            else:
                raise GraphError(f"malformed {kind!r} record")
        except (GraphError, ValueError) as exc:
            raise GraphError(f"line {lineno}: {exc}") from None
    return G
