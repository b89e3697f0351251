"""Independent reference implementations used only by the tests.

None of these share code with the package: they are slow, direct
encodings of the definitions.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from functools import reduce as fold

import networkx as nx
import numpy as np


# ---------------------------------------------------------------------------
# girth by listing every simple cycle


def brute_force_girth(n, edges):
    """Minimum total weight over all simple cycles (networkx enumeration)."""
    G = nx.Graph()
    G.add_nodes_from(range(n))
    for u, v, w in edges:
        G.add_edge(u, v, weight=w)
    best = math.inf
    for cyc in nx.simple_cycles(G):
        if len(cyc) < 3:
            continue
        total = sum(G[a][b]["weight"] for a, b in zip(cyc, cyc[1:] + cyc[:1]))
        best = min(best, total)
    return best


def random_weighted_graph(rng, max_nodes=12, p_max=0.45, integer=False):
    n = int(rng.integers(1, max_nodes + 1))
    p = rng.uniform(0.1, p_max)
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            w = float(rng.integers(1, 6)) if integer else float(rng.uniform(0.05, 3.0))
            edges.append((u, v, w))
    return n, edges


# ---------------------------------------------------------------------------
# Smith normal form by determinantal divisors


def _minors_gcd(A, k):
    m, n = A.shape
    g = 0
    for rows in itertools.combinations(range(m), k):
        for cols in itertools.combinations(range(n), k):
            sub = A[np.ix_(rows, cols)]
            d = int(round(np.linalg.det(sub.astype(float)))) if k > 3 else _exact_det(sub.tolist())
            g = math.gcd(g, abs(d))
    return g


def _exact_det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return sum((-1) ** j * M[0][j] * _exact_det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n))


def invariant_factors_by_minors(A):
    """s_k = d_k / d_(k-1) with d_k the gcd of the k x k minors (k <= 3 exact)."""
    A = np.asarray(A, dtype=np.int64)
    out = []
    prev = 1
    for k in range(1, min(A.shape) + 1):
        d = _minors_gcd(A, k)
        if d == 0:
            break
        out.append(d // prev)
        prev = d
    return out


# ---------------------------------------------------------------------------
# right-angled Artin groups: pilings (one stack per generator)


def _adjacency(nodes, edges):
    adj = {v: set() for v in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


class Piling:
    """Normal form of a RAAG element as one stack per generator.

    A letter g^e puts e on the stack of g and a 0 on the stack of every
    generator not commuting with g; if the top of g's stack already holds
    -e, the letter instead pops that entry and one 0 from each of those
    stacks.  Two words are equal in the group iff their pilings agree.
    """

    def __init__(self, nodes, edges):
        self.nodes = tuple(nodes)
        adj = _adjacency(nodes, edges)
        self.blocked = {g: tuple(h for h in self.nodes if h != g and h not in adj[g]) for g in self.nodes}
        self.pos = {g: i for i, g in enumerate(self.nodes)}

    def identity(self):
        return tuple(() for _ in self.nodes)

    def push(self, state, g, e):
        stacks = list(state)
        i = self.pos[g]
        if stacks[i] and stacks[i][-1] == -e:
            stacks[i] = stacks[i][:-1]
            for h in self.blocked[g]:
                j = self.pos[h]
                assert stacks[j][-1] == 0
                stacks[j] = stacks[j][:-1]
        else:
            stacks[i] = stacks[i] + (e,)
            for h in self.blocked[g]:
                j = self.pos[h]
                stacks[j] = stacks[j] + (0,)
        return tuple(stacks)

    def of(self, letters):
        state = self.identity()
        for g, e in letters:
            state = self.push(state, g, e)
        return state

    @staticmethod
    def length(state):
        return sum(1 for s in state for x in s if x != 0)


class CayleyBall:
    """Breadth-first ball in the Cayley graph, elements keyed by pilings.

    ``dist[i]`` is the word length of element ``i`` and ``step[i, c]`` the
    element reached by right-multiplying with letter code ``c``
    (``2 * generator + (exponent < 0)``), or -1 beyond the radius.
    """

    def __init__(self, nodes, edges, radius):
        self.piling = Piling(nodes, edges)
        self.nodes = tuple(nodes)
        letters = [(g, e) for g in self.nodes for e in (1, -1)]
        index = {self.piling.identity(): 0}
        states = [self.piling.identity()]
        dist = [0]
        frontier = [0]
        for r in range(1, radius + 1):
            nxt = []
            for i in frontier:
                for g, e in letters:
                    s = self.piling.push(states[i], g, e)
                    if s not in index:
                        index[s] = len(states)
                        states.append(s)
                        dist.append(r)
                        nxt.append(index[s])
            frontier = nxt
        step = np.full((len(states), len(letters)), -1, dtype=np.int64)
        for i, s in enumerate(states):
            if dist[i] == radius:
                continue
            for c, (g, e) in enumerate(letters):
                step[i, c] = index[self.piling.push(s, g, e)]
        self.index = index
        self.states = states
        self.dist = np.array(dist, dtype=np.int64)
        self.step = step

    def element(self, letters):
        return self.index[self.piling.of(letters)]

    def word_length(self, letters):
        return int(self.dist[self.element(letters)])


# ---------------------------------------------------------------------------
# K0 letters recovered from the circuits alone


def k0_labelings(oriented_edges, adjacent, circuits, fixed):
    """All injective letter -> oriented-edge maps extending ``fixed`` under
    which every consecutive pair in every circuit is adjacent.

    Circuit entries may carry a ``^-1`` suffix meaning the reversed edge.
    """
    letters = sorted({x.replace("^-1", "") for c in circuits.values() for x in c})
    pairs = []
    for c in circuits.values():
        pairs.extend(zip(c, c[1:]))

    def resolve(assign, tok):
        base = tok.replace("^-1", "")
        if base not in assign:
            return None
        u, v = assign[base]
        return (v, u) if tok.endswith("^-1") else (u, v)

    def consistent(assign):
        for a, b in pairs:
            x, y = resolve(assign, a), resolve(assign, b)
            if x is not None and y is not None and not adjacent(x, y):
                return False
        return True

    out = []
    order = [x for x in letters if x not in fixed]

    def extend(assign, k):
        if k == len(order):
            out.append(dict(assign))
            return
        used = set(assign.values()) | {(v, u) for u, v in assign.values()}
        for e in oriented_edges:
            if e in used:
                continue
            assign[order[k]] = e
            if consistent(assign):
                extend(assign, k + 1)
            del assign[order[k]]

    start = dict(fixed)
    if consistent(start):
        extend(start, 0)
    return out


def polygon_with_angle_sum(m, rng):
    """Random convex polygon: sorted angles on a jittered ellipse."""
    t = np.sort(rng.uniform(0, 2 * np.pi, m))
    while np.any(np.diff(np.concatenate([t, [t[0] + 2 * np.pi]])) < 1e-3):
        t = np.sort(rng.uniform(0, 2 * np.pi, m))
    a, b = rng.uniform(0.5, 3.0, 2)
    return np.stack([a * np.cos(t), b * np.sin(t)], axis=1)


def gcd_all(xs):
    return fold(math.gcd, xs, 0)
