"""Combinatorial 2-dimensional simplicial and delta complexes."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable


class ComplexError(ValueError):
    """Invalid complex data."""


class ComplexFormatError(ComplexError):
    """A defect in a complex file, with its 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class NotSimplicialError(ComplexError):
    pass


def _edge(u, v):
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A finite simple graph with string vertex names."""

    nodes: tuple
    edges: tuple  # sorted (u, v) pairs with u < v

    @classmethod
    def from_edges(cls, edges: Iterable, nodes: Iterable = ()) -> "Graph":
        es = set()
        ns = set(nodes)
        for u, v in edges:
            if u == v:
                raise ComplexError(f"self-loop at {u!r}")
            es.add(_edge(u, v))
            ns.update((u, v))
        return cls(tuple(sorted(ns)), tuple(sorted(es)))

    def neighbours(self, v) -> list:
        out = [b for a, b in self.edges if a == v] + [a for a, b in self.edges if b == v]
        return sorted(out)

    def triangles(self) -> list:
        adj = {v: set() for v in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return sorted(
            (a, b, c)
            for a, b in self.edges
            for c in adj[a] & adj[b]
            if c > b
        )


@dataclass(frozen=True)
class OrientedEdge:
    source: str
    target: str

    def reversed(self) -> "OrientedEdge":
        return OrientedEdge(self.target, self.source)

    def __iter__(self):
        return iter((self.source, self.target))


@dataclass(frozen=True)
class FlagComplex2:
    """A simplicial complex of dimension at most 2.

    Simplices are sorted tuples of vertex names; every face of a triangle is
    present (closure is enforced at construction).  Whether the complex is
    actually flag is reported by :func:`check_flag`, not assumed.
    """

    vertices: tuple
    edges: tuple
    triangles: tuple

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ComplexError("repeated vertex")
        es = set(self.edges)
        if len(es) != len(self.edges):
            raise ComplexError("repeated edge")
        for e in self.edges:
            if len(e) != 2 or e[0] == e[1] or tuple(sorted(e)) != tuple(e):
                raise ComplexError(f"bad edge {e!r}")
            if not vs.issuperset(e):
                raise ComplexError(f"edge {e!r} uses an unknown vertex")
        if len(set(self.triangles)) != len(self.triangles):
            raise ComplexError("repeated triangle")
        for t in self.triangles:
            if len(t) != 3 or len(set(t)) != 3 or tuple(sorted(t)) != tuple(t):
                raise ComplexError(f"bad triangle {t!r}")
            for pair in itertools.combinations(t, 2):
                if pair not in es:
                    raise ComplexError(f"triangle {t!r} is missing its edge {pair!r}")

    @classmethod
    def build(cls, vertices: Iterable = (), edges: Iterable = (), triangles: Iterable = ()) -> "FlagComplex2":
        """Construct from loose data, adding every missing face."""
        vs = set(vertices)
        es = set()
        ts = set()
        for t in triangles:
            t = tuple(sorted(t))
            if len(set(t)) != 3:
                raise ComplexError(f"degenerate triangle {t!r}")
            ts.add(t)
            es.update(itertools.combinations(t, 2))
        for u, v in edges:
            if u == v:
                raise ComplexError(f"degenerate edge ({u!r}, {v!r})")
            es.add(_edge(u, v))
        for e in es:
            vs.update(e)
        return cls(tuple(sorted(vs)), tuple(sorted(es)), tuple(sorted(ts)))

    def oriented_edges(self) -> list:
        out = []
        for u, v in self.edges:
            out.append(OrientedEdge(u, v))
            out.append(OrientedEdge(v, u))
        return out

    def one_skeleton(self) -> Graph:
        return Graph(self.vertices, self.edges)

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == len(self.vertices)

    def edge_triangles(self) -> dict:
        """Map each edge to the triangles containing it."""
        out = {e: [] for e in self.edges}
        for t in self.triangles:
            for pair in itertools.combinations(t, 2):
                out[pair].append(t)
        return out


# ---------------------------------------------------------------------------
# complex files


def parse_complex(text: str) -> FlagComplex2:
    """Parse the line-based complex format.

    ``vertex <name>``, ``edge <a> <b>``, ``triangle <a> <b> <c>``; ``#``
    starts a comment.  Edges of triangles are implied.
    """
    vertices: list = []
    vset: set = set()
    edges: set = set()
    triangles: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = line.split()
        if kind == "vertex":
            if len(args) != 1:
                raise ComplexFormatError(lineno, "expected 'vertex <name>'")
            if args[0] in vset:
                raise ComplexFormatError(lineno, f"duplicate vertex {args[0]!r}")
            vertices.append(args[0])
            vset.add(args[0])
            continue
        if kind not in ("edge", "triangle"):
            raise ComplexFormatError(lineno, f"unknown record {kind!r}")
        want = 2 if kind == "edge" else 3
        if len(args) != want:
            raise ComplexFormatError(lineno, f"expected {want} vertices after {kind!r}")
        if len(set(args)) != want:
            raise ComplexFormatError(lineno, f"{kind} with a repeated vertex")
        for a in args:
            if a not in vset:
                raise ComplexFormatError(lineno, f"{kind} references undeclared vertex {a!r}")
        simplex = tuple(sorted(args))
        target = edges if kind == "edge" else triangles
        if simplex in target:
            raise ComplexFormatError(lineno, f"duplicate {kind} {' '.join(simplex)}")
        target.add(simplex)
    return FlagComplex2.build(vertices, edges, triangles)


def format_complex(K: FlagComplex2) -> str:
    covered = set()
    for t in K.triangles:
        covered.update(itertools.combinations(t, 2))
    lines = [f"vertex {v}" for v in K.vertices]
    lines += [f"edge {a} {b}" for a, b in K.edges if (a, b) not in covered]
    lines += [f"triangle {a} {b} {c}" for a, b, c in K.triangles]
    return "\n".join(lines) + "\n"


def read_complex(path) -> FlagComplex2:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_complex(text)
    except ComplexFormatError as exc:
        raise ComplexFormatError(exc.lineno, f"{path}: {exc.args[0].split(': ', 1)[1]}") from None


# ---------------------------------------------------------------------------
# flagness, links, suspension


@dataclass(frozen=True)
class FlagReport:
    is_flag: bool
    violations: tuple
    free_edges: tuple
    connected: bool


def check_flag(K: FlagComplex2) -> FlagReport:
    """Report empty 3-cliques, 4-cliques and free edges of ``K``."""
    adj = {v: set() for v in K.vertices}
    for a, b in K.edges:
        adj[a].add(b)
        adj[b].add(a)
    tris = set(K.triangles)
    violations = []
    for clique in K.one_skeleton().triangles():
        if clique not in tris:
            violations.append(("empty-triangle", clique))
        common = adj[clique[0]] & adj[clique[1]] & adj[clique[2]]
        for d in sorted(common):
            if d > clique[2]:
                violations.append(("4-clique", clique + (d,)))
    free = tuple(e for e, ts in K.edge_triangles().items() if len(ts) == 1)
    return FlagReport(not violations, tuple(violations), free, K.is_connected())


def link_graph(K: FlagComplex2, v) -> Graph:
    """Combinatorial link of ``v``: its neighbours, one edge per triangle at ``v``."""
    if v not in set(K.vertices):
        raise ComplexError(f"unknown vertex {v!r}")
    nodes = [b for a, b in K.edges if a == v] + [a for a, b in K.edges if b == v]
    edges = [tuple(x for x in t if x != v) for t in K.triangles if v in t]
    return Graph(tuple(sorted(nodes)), tuple(sorted(edges)))


def suspension(L, apexes=("p", "q")) -> FlagComplex2:
    """Join a triangle-free graph with two points."""
    if isinstance(L, FlagComplex2):
        if L.triangles:
            raise ComplexError("suspension expects a graph")
        L = L.one_skeleton()
    if L.triangles():
        raise ComplexError("graph contains a triangle; its suspension is not a flag 2-complex")
    p, q = apexes
    if p in L.nodes or q in L.nodes or p == q:
        raise ComplexError("apex names collide with graph vertices")
    triangles = [(x, a, b) for x in (p, q) for a, b in L.edges]
    edges = [(x, v) for x in (p, q) for v in L.nodes]
    return FlagComplex2.build(list(L.nodes) + [p, q], edges, triangles)


# ---------------------------------------------------------------------------
# delta complexes


@dataclass(frozen=True)
class Delta2Complex:
    """A 2-dimensional delta complex.

    Vertices are ``0..n_vertices-1``.  ``edges[j] = (v0, v1)`` (possibly equal).
    ``triangles[k] = (d0, d1, d2)`` lists the edge indices of the faces
    opposite corners 0, 1, 2, so that for corners ``c0, c1, c2``
    ``d2 = [c0, c1]``, ``d1 = [c0, c2]`` and ``d0 = [c1, c2]``.
    """

    n_vertices: int
    edges: tuple
    triangles: tuple
    names: tuple = field(default=None, compare=False)

    def __post_init__(self):
        for j, (a, b) in enumerate(self.edges):
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                raise ComplexError(f"edge {j} attaches to a missing vertex")
        for k, faces in enumerate(self.triangles):
            if len(faces) != 3 or not all(0 <= f < len(self.edges) for f in faces):
                raise ComplexError(f"triangle {k} attaches to a missing edge")
            d0, d1, d2 = (self.edges[f] for f in faces)
            if d2[0] != d1[0] or d2[1] != d0[0] or d1[1] != d0[1]:
                raise ComplexError(f"triangle {k} has inconsistent face orientations")

    def corners(self, k: int) -> tuple:
        d0, d1, d2 = (self.edges[f] for f in self.triangles[k])
        return (d2[0], d2[1], d1[1])

    def cell_counts(self) -> tuple:
        return (self.n_vertices, len(self.edges), len(self.triangles))

    def euler_characteristic(self) -> int:
        v, e, t = self.cell_counts()
        return v - e + t

    @classmethod
    def from_simplicial(cls, K: FlagComplex2) -> "Delta2Complex":
        index = {v: i for i, v in enumerate(K.vertices)}
        eindex = {e: j for j, e in enumerate(K.edges)}
        edges = tuple((index[a], index[b]) for a, b in K.edges)
        tris = tuple((eindex[(b, c)], eindex[(a, c)], eindex[(a, b)]) for a, b, c in K.triangles)
        return cls(len(K.vertices), edges, tris, names=K.vertices)

    def is_simplicial(self) -> bool:
        try:
            self.to_simplicial()
        except NotSimplicialError:
            return False
        return True

    def to_simplicial(self, prefix: str = "v") -> FlagComplex2:
        """The simplicial complex this delta complex already is, if any."""
        if self.names is not None:
            names = self.names
        else:
            width = len(str(max(self.n_vertices - 1, 0)))
            names = tuple(f"{prefix}{i:0{width}d}" for i in range(self.n_vertices))
        seen_e = set()
        for a, b in self.edges:
            if a == b:
                raise NotSimplicialError("edge is a loop")
            key = frozenset((a, b))
            if key in seen_e:
                raise NotSimplicialError("two edges share their endpoints")
            seen_e.add(key)
        seen_t = set()
        for k in range(len(self.triangles)):
            cs = self.corners(k)
            key = frozenset(cs)
            if len(key) != 3:
                raise NotSimplicialError("triangle with repeated corners")
            if key in seen_t:
                raise NotSimplicialError("two triangles share their vertices")
            seen_t.add(key)
        return FlagComplex2.build(
            names,
            [(names[a], names[b]) for a, b in self.edges],
            [tuple(names[c] for c in self.corners(k)) for k in range(len(self.triangles))],
        )


def barycentric_subdivision(D: Delta2Complex) -> Delta2Complex:
    """Barycentric subdivision; new vertices are ordered vertices, edges, triangles."""
    V, E, T = D.cell_counts()
    edges = []
    # vertex -> edge barycentre, one per endpoint occurrence: index 2j + end
    for j, (a, b) in enumerate(D.edges):
        edges.append((a, V + j))
        edges.append((b, V + j))
    # edge barycentre -> triangle barycentre: index 2E + 3k + f
    for k, faces in enumerate(D.triangles):
        for f in faces:
            edges.append((V + f, V + E + k))
    # corner -> triangle barycentre: index 2E + 3T + 3k + c
    for k in range(T):
        for c in D.corners(k):
            edges.append((c, V + E + k))
    triangles = []
    for k, faces in enumerate(D.triangles):
        for f in range(3):
            ends = [i for i in range(3) if i != f]
            for pos, c in enumerate(ends):
                d0 = 2 * E + 3 * k + f
                d1 = 2 * E + 3 * T + 3 * k + c
                d2 = 2 * faces[f] + pos
                triangles.append((d0, d1, d2))
    return Delta2Complex(V + E + T, tuple(edges), tuple(triangles))


def subdivide(D: Delta2Complex, times: int) -> Delta2Complex:
    for _ in range(times):
        D = barycentric_subdivision(D)
    return D
