"""Right-angled Artin groups, their length-kernels and kernel presentations.

A word is a tuple of ``(generator, exponent)`` letters with exponent +1 or
-1.  Reduction is the commutation-aware cancellation of graph groups: a pair
``g^e ... g^-e`` is deleted whenever every letter strictly between commutes
with ``g``.  A word admitting no such pair is geodesic.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernels
from .complex import ComplexError, FlagComplex2, Graph


class WordError(ValueError):
    pass


_TOKEN = re.compile(r"^([A-Za-z_][\w.]*)(?:\^([+-]?\d+))?$")


def parse_letters(text: str) -> tuple:
    """``"u2^-1 u1"`` -> ``(("u2", -1), ("u1", 1))``; ``g^n`` expands to |n| letters."""
    out = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if m is None:
            raise WordError(f"cannot parse letter {tok!r}")
        n = int(m.group(2)) if m.group(2) is not None else 1
        out.extend([(m.group(1), 1 if n > 0 else -1)] * abs(n))
    return tuple(out)


def format_letters(letters) -> str:
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in letters) or "1"


def inverse_letters(letters) -> tuple:
    return tuple((g, -e) for g, e in reversed(letters))


def free_reduce(letters) -> tuple:
    """Cancel adjacent ``g g^-1`` pairs."""
    out = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


# ---------------------------------------------------------------------------
# words in A_K


class Ambient:
    """Commutation data for a defining graph, shared by its words."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self.index = {v: i for i, v in enumerate(graph.nodes)}
        n = len(graph.nodes)
        self.commute = np.eye(n, dtype=np.bool_)
        for a, b in graph.edges:
            i, j = self.index[a], self.index[b]
            self.commute[i, j] = self.commute[j, i] = True

    def commutes(self, g, h) -> bool:
        return bool(self.commute[self.index[g], self.index[h]])

    def encode(self, letters) -> np.ndarray:
        return np.array([2 * self.index[g] + (e < 0) for g, e in letters], dtype=np.int64)

    def decode(self, codes) -> tuple:
        nodes = self.graph.nodes
        return tuple((nodes[c >> 1], -1 if c & 1 else 1) for c in codes.tolist())


_AMBIENTS: dict = {}


def ambient_for(graph: Graph) -> Ambient:
    amb = _AMBIENTS.get(graph)
    if amb is None:
        amb = _AMBIENTS[graph] = Ambient(graph)
    return amb


def _as_graph(K) -> Graph:
    if isinstance(K, Graph):
        return K
    if isinstance(K, FlagComplex2):
        return K.one_skeleton()
    raise TypeError(f"expected a Graph or FlagComplex2, got {type(K).__name__}")


@dataclass(frozen=True)
class RaagWord:
    letters: tuple
    graph: Graph

    def __post_init__(self):
        nodes = set(self.graph.nodes)
        for g, e in self.letters:
            if g not in nodes:
                raise WordError(f"unknown generator {g!r}")
            if e not in (1, -1):
                raise WordError(f"exponent of {g!r} must be +1 or -1, got {e!r}")

    @classmethod
    def parse(cls, text: str, K) -> "RaagWord":
        return cls(parse_letters(text), _as_graph(K))

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "RaagWord") -> "RaagWord":
        _same_ambient(self, other)
        return RaagWord(self.letters + other.letters, self.graph)

    def inverse(self) -> "RaagWord":
        return RaagWord(inverse_letters(self.letters), self.graph)

    def exponent_sum(self) -> int:
        return sum(e for _, e in self.letters)

    def __str__(self):
        return format_letters(self.letters)


def _same_ambient(w1: RaagWord, w2: RaagWord):
    if w1.graph != w2.graph:
        raise WordError("words live over different defining graphs")


def reduce(w: RaagWord) -> RaagWord:
    """Geodesic representative of ``w``."""
    amb = ambient_for(w.graph)
    if not w.letters:
        return w
    return RaagWord(amb.decode(kernels.raag_reduce(amb.encode(w.letters), amb.commute)), w.graph)


def geodesic_length(w: RaagWord) -> int:
    return len(reduce(w))


def deletable_pairs(letters, amb: Ambient) -> list:
    """All ``(i, j)`` with letters i, j inverse copies of one generator and
    every letter strictly between commuting with it."""
    out = []
    for i, (g, e) in enumerate(letters):
        for j in range(i + 1, len(letters)):
            h, f = letters[j]
            if h == g and f == -e:
                out.append((i, j))
                break
            if not amb.commutes(g, h):
                break
    return out


def reduce_random(w: RaagWord, rng) -> RaagWord:
    """Delete cancelling pairs in a random order (for confluence checks)."""
    amb = ambient_for(w.graph)
    letters = list(w.letters)
    while True:
        pairs = deletable_pairs(letters, amb)
        if not pairs:
            return RaagWord(tuple(letters), w.graph)
        i, j = pairs[int(rng.integers(len(pairs)))]
        del letters[j]
        del letters[i]


def equal(w1: RaagWord, w2: RaagWord) -> bool:
    """Do ``w1`` and ``w2`` represent the same element?"""
    _same_ambient(w1, w2)
    return len(reduce(w1 * w2.inverse())) == 0


def kernel_membership(w: RaagWord) -> bool:
    """Is ``w`` in the kernel of the map sending every generator to 1?"""
    return w.exponent_sum() == 0


# ---------------------------------------------------------------------------
# the kernel Gamma_K and its generators x_(u,v) = u^-1 v


@dataclass(frozen=True)
class KernelWord:
    """Word in the generators ``x_(u,v)``, stored with ``u < v``.

    Letters are ``((u, v), exponent)``; ``x_(v,u)`` is normalized on input
    to ``x_(u,v)^-1``.
    """

    letters: tuple

    @classmethod
    def from_oriented(cls, items) -> "KernelWord":
        out = []
        for (u, v), e in items:
            if u == v:
                raise WordError(f"x_({u},{v}) is not an edge generator")
            out.append(((u, v), e) if u < v else ((v, u), -e))
        return cls(free_reduce(out))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(
            f"x({u},{v})" + ("" if e == 1 else f"^{e}") for (u, v), e in self.letters
        ) or "1"

    def substitute(self, K) -> RaagWord:
        """Image in A_K under ``x_(u,v) -> u^-1 v``."""
        out = []
        for (u, v), e in self.letters:
            piece = ((u, -1), (v, 1))
            out.extend(piece if e > 0 else inverse_letters(piece))
        return RaagWord(tuple(out), _as_graph(K))


def bfs_tree(G: Graph, root) -> dict:
    """Parent map of the breadth-first tree from ``root`` (sorted neighbours)."""
    parent = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in G.neighbours(v):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return parent


def _tree_parent(G: Graph, basepoint, spanning_tree) -> dict:
    if spanning_tree is None:
        parent = bfs_tree(G, basepoint)
    elif isinstance(spanning_tree, dict):
        parent = dict(spanning_tree)
    else:
        adj = {v: set() for v in G.nodes}
        for a, b in spanning_tree:
            adj[a].add(b)
            adj[b].add(a)
        parent = {basepoint: None}
        queue = deque([basepoint])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
    if set(parent) != set(G.nodes):
        raise ComplexError("spanning tree does not reach every vertex (is the complex connected?)")
    edges = set(G.edges)
    for v, p in parent.items():
        if p is not None and (min(v, p), max(v, p)) not in edges:
            raise ComplexError(f"tree edge {p}-{v} is not an edge of the complex")
    return parent


def kernel_rewrite(w: RaagWord, K, basepoint=None, spanning_tree=None) -> KernelWord:
    """Rewrite a kernel element as a word in the ``x_(u,v)``.

    Uses the transversal ``b^h`` for a basepoint ``b`` and a spanning tree of
    the 1-skeleton (breadth-first from ``b`` unless given as a parent map or
    an edge list).  Adjacent vertices commute, so ``a c^-1 = x_(c,a)`` along
    every tree edge, and conjugation by ``b`` sends ``x_(p,q)`` to
    ``(b p^-1)(q b^-1)``.
    """
    G = _as_graph(K)
    if w.graph != G:
        raise WordError("word is not over the 1-skeleton of this complex")
    if not kernel_membership(w):
        raise WordError(f"exponent sum is {w.exponent_sum()}, not 0")
    if basepoint is None:
        basepoint = G.nodes[0]
    parent = _tree_parent(G, basepoint, spanning_tree)

    def path(a):  # tree path from the basepoint to a
        out = [a]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out[::-1]

    def A(a, c):  # a^-1 c with one of a, c the basepoint
        if a == basepoint:
            p = path(c)
            return [((p[i], p[i + 1]), 1) for i in range(len(p) - 1)]
        return _inv(A(c, a))

    def B(a, c):  # a c^-1 = prod x_(t_{i+1}, t_i) along the tree path from a to c
        if c == basepoint:
            p = path(a)[::-1]
            return [((p[i + 1], p[i]), 1) for i in range(len(p) - 1)]
        return _inv(B(c, a))

    def conj(word, up):  # b x b^-1 if up else b^-1 x b, letter by letter
        out = []
        for (p, q), e in word:
            image = B(basepoint, p) + B(q, basepoint) if up else A(basepoint, q) + A(p, basepoint)
            out.extend(image if e > 0 else _inv(image))
        return _oriented_free_reduce(out)

    cache = {}

    def S(h, g):  # b^h g b^(-h-1)
        key = (h, g)
        if key not in cache:
            if h >= 0:
                word = B(g, basepoint)
                for _ in range(h):
                    word = conj(word, True)
            else:
                word = A(basepoint, g)
                for _ in range(-h - 1):
                    word = conj(word, False)
            cache[key] = _oriented_free_reduce(word)
        return cache[key]

    out = []
    h = 0
    for g, e in w.letters:
        if e > 0:
            out.extend(S(h, g))
            h += 1
        else:
            out.extend(_inv(S(h - 1, g)))
            h -= 1
    return KernelWord.from_oriented(out)


def _inv(word):
    return [(x, -e) for x, e in reversed(word)]


def _oriented_free_reduce(word):
    return [((u, v), e) if u < v else ((v, u), -e) for (u, v), e in KernelWord.from_oriented(word).letters]


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    generators: tuple  # edges (u, v) with u < v, standing for x_(u,v)
    relators: tuple  # tuples of ((u, v), exponent) syllables
    mode: str
    label: str

    def to_text(self) -> str:
        lines = [f"# {self.label}", "generators " + " ".join(f"x({u},{v})" for u, v in self.generators)]
        for rel in self.relators:
            lines.append(" ".join(f"x({u},{v})" + ("" if n == 1 else f"^{n}") for (u, v), n in rel))
        return "\n".join(lines) + "\n"


def _canonical_cycle(cycle) -> tuple:
    """Rotation/reflection representative of a vertex cycle."""
    k = len(cycle)
    best = None
    for seq in (cycle, cycle[::-1]):
        for r in range(k):
            cand = tuple(seq[r:] + seq[:r])
            if best is None or cand < best:
                best = cand
    return best


def simple_cycles(G: Graph, max_length: int) -> list:
    """Simple cycles of length 3..max_length, one vertex sequence per cycle,
    oriented and rotated to the lexicographically smallest reading."""
    adj = {v: G.neighbours(v) for v in G.nodes}
    found = set()
    for start in G.nodes:
        stack = [(start, [start])]
        while stack:
            v, path = stack.pop()
            for w in adj[v]:
                if w == start and len(path) >= 3:
                    found.add(_canonical_cycle(path))
                elif w > start and w not in path and len(path) < max_length:
                    stack.append((w, path + [w]))
    return sorted(found, key=lambda c: (len(c), c))


def presentation(
    K: FlagComplex2,
    mode: str = "triangle",
    simply_connected: bool = False,
    max_cycle: int | None = None,
    max_n: int | None = None,
) -> Presentation:
    """Presentation of the kernel Gamma_K on generators ``x_(u,v)``, ``u < v``.

    ``triangle``: two relators per triangle, ``x_uv x_vw = x_uw = x_vw x_uv``.
    These present Gamma_K only when K is simply connected, which is not
    checked here: the caller attests it with ``simply_connected=True``.

    ``cycles``: ``x_(u1,u2)^n x_(u2,u3)^n ... x_(uk,u1)^n`` for directed
    simple cycles of length at most ``max_cycle`` and ``0 < |n| <= max_n``,
    one direction per cycle (the reverse gives the inverse relator).  The
    full family is infinite, so the output is a declared truncation.
    """
    if not K.is_connected():
        raise ComplexError("presentation needs a connected complex")
    gens = tuple(K.edges)
    if mode == "triangle":
        if not simply_connected:
            raise ComplexError(
                "triangle relators present Gamma_K only for simply connected K; "
                "attest it with simply_connected=True (CLI: --simply-connected)"
            )
        rels = []
        for u, v, w in K.triangles:
            rels.append((((u, v), 1), ((v, w), 1), ((u, w), -1)))
            rels.append((((v, w), 1), ((u, v), 1), ((u, w), -1)))
        label = f"triangle relators; simple connectivity attested by caller; {len(gens)} generators, {len(rels)} relators"
        return Presentation(gens, tuple(rels), mode, label)
    if mode == "cycles":
        if max_cycle is None or max_n is None:
            raise ComplexError("cycle mode needs both max_cycle and max_n")
        if max_cycle < 3 or max_n < 1:
            raise ComplexError("need max_cycle >= 3 and max_n >= 1")
        rels = []
        for cyc in simple_cycles(K.one_skeleton(), max_cycle):
            steps = list(zip(cyc, cyc[1:] + cyc[:1]))
            for n in itertools.chain(range(1, max_n + 1), range(-1, -max_n - 1, -1)):
                rels.append(tuple(((a, b), n) if a < b else ((b, a), -n) for a, b in steps))
        label = f"directed-cycle relators, cycles of length <= {max_cycle}, 0 < |n| <= {max_n} (truncated family)"
        return Presentation(gens, tuple(rels), mode, label)
    raise ComplexError(f"unknown presentation mode {mode!r}; use triangle or cycles")


def relator_word(rel, K) -> RaagWord:
    """Image of a relator in A_K (expanding syllable exponents)."""
    letters = []
    for (u, v), n in rel:
        letters.extend([((u, v), 1 if n > 0 else -1)] * abs(n))
    return KernelWord(tuple(letters)).substitute(K)


# ---------------------------------------------------------------------------
# distortion of the free subgroup <a, x, e> in A_L, L the path u1-u2-u3-u4


DISTORTION_GENERATORS = {
    "a": (("u2", -1), ("u1", 1)),
    "x": (("u2", -1), ("u3", 1)),
    "e": (("u3", -1), ("u4", 1)),
}


def path4() -> Graph:
    return Graph.from_edges([("u1", "u2"), ("u2", "u3"), ("u3", "u4")])


def w_free(N: int) -> tuple:
    """``(a x^N e x^-N)^N`` as letters over ``a, x, e``."""
    block = [("a", 1)] + [("x", 1)] * N + [("e", 1)] + [("x", -1)] * N
    return tuple(block * N)


def substitute_free(letters, table=DISTORTION_GENERATORS) -> tuple:
    out = []
    for g, e in letters:
        out.extend(table[g] if e > 0 else inverse_letters(table[g]))
    return tuple(out)


def w_written(N: int) -> tuple:
    """``u2^-N (u2^-1 u1 u3^-1 u4)^N u2^N`` over the path generators."""
    return (
        (("u2", -1),) * N
        + (("u2", -1), ("u1", 1), ("u3", -1), ("u4", 1)) * N
        + (("u2", 1),) * N
    )


@dataclass(frozen=True)
class DistortionRow:
    N: int
    free_length: int
    written_length: int
    geodesic_length: int
    ratio: float


def distortion_table(nmax: int) -> list:
    """Lengths of ``w_N`` in the free group, in the written form, and geodesically."""
    if nmax < 1:
        raise WordError("nmax must be at least 1")
    G = path4()
    rows = []
    for N in range(1, nmax + 1):
        free = free_reduce(w_free(N))
        ambient_word = RaagWord(substitute_free(free), G)
        geo = geodesic_length(ambient_word)
        rows.append(DistortionRow(N, len(free), len(w_written(N)), geo, len(free) / geo))
    return rows
