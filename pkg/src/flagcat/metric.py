"""Piecewise Euclidean metrics, vertex links and the angle graph L(K)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import kernels
from .complex import ComplexError, FlagComplex2
from .graph import Cycle, WeightedGraph, girth

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-9


class MetricError(ValueError):
    pass


class DegenerateTriangleError(MetricError):
    def __init__(self, triangle):
        super().__init__(f"triangle {' '.join(triangle)} is degenerate or violates the triangle inequality")
        self.triangle = triangle


@dataclass(frozen=True)
class PEMetric:
    """Edge lengths on a 2-complex, keyed by sorted vertex pairs."""

    lengths: dict = field(hash=False)

    def __post_init__(self):
        for e, x in self.lengths.items():
            if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0):
                raise MetricError(f"edge {e!r} has non-positive length {x!r}")

    def __getitem__(self, edge):
        u, v = edge
        return self.lengths[(u, v) if u < v else (v, u)]

    @classmethod
    def equilateral(cls, K: FlagComplex2, value: float = 1.0) -> "PEMetric":
        return cls({e: float(value) for e in K.edges})

    @classmethod
    def random(cls, K: FlagComplex2, rng, sigma: float = 0.5, max_tries: int = 10000) -> "PEMetric":
        """Log-normal jitter around equilateral.

        Edges of degenerate triangles are redrawn, one triangle at a time,
        until every triangle is non-degenerate.
        """
        x = np.exp(sigma * rng.standard_normal(len(K.edges)))
        tri = _tri_edges(K)
        for _ in range(max_tries):
            bad = _degenerate_mask(x, tri)
            if not bad.any():
                return cls({e: float(v) for e, v in zip(K.edges, x)})
            t = int(np.flatnonzero(bad)[0])
            x[tri[t]] = np.exp(sigma * rng.standard_normal(3))
        raise MetricError("could not sample a non-degenerate metric")

    def scaled(self, factor: float) -> "PEMetric":
        return PEMetric({e: x * factor for e, x in self.lengths.items()})

    def check_on(self, K: FlagComplex2):
        missing = [e for e in K.edges if e not in self.lengths]
        if missing:
            raise MetricError(f"no length for edge {missing[0]!r}")
        extra = sorted(set(self.lengths) - set(K.edges))
        if extra:
            raise MetricError(f"length given for {extra[0]!r}, which is not an edge")
        _geometry(K, self)

    def is_valid_on(self, K: FlagComplex2) -> bool:
        try:
            self.check_on(K)
        except MetricError:
            return False
        return True


def _tri_edges(K: FlagComplex2) -> np.ndarray:
    """``tri_edges[t, c]``: index of the edge opposite corner ``c`` of triangle ``t``."""
    eindex = {e: j for j, e in enumerate(K.edges)}
    out = np.empty((len(K.triangles), 3), dtype=np.int64)
    for t, (a, b, c) in enumerate(K.triangles):
        out[t] = (eindex[(b, c)], eindex[(a, c)], eindex[(a, b)])
    return out


def _degenerate_mask(lengths: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """Triangles whose relative triangle-inequality margin is below tolerance."""
    side = lengths[tri]
    slack = kernels.DEGENERACY_TOL * side.sum(axis=1)
    margins = side.sum(axis=1, keepdims=True) - 2.0 * side
    return (margins <= slack[:, None]).any(axis=1)


def _geometry(K: FlagComplex2, m: PEMetric):
    lengths = np.array([m[e] for e in K.edges], dtype=np.float64)
    tri = _tri_edges(K)
    ang, _, ok = kernels.triangle_angles(lengths, tri)
    if not ok:
        for t, simplex in enumerate(K.triangles):
            sub = kernels.triangle_angles(lengths, tri[t : t + 1])
            if not sub[2]:
                raise DegenerateTriangleError(simplex)
    return ang


def corner_angles(K: FlagComplex2, m: PEMetric) -> dict:
    """``{(triangle, vertex): angle}`` for every corner of every triangle."""
    ang = _geometry(K, m)
    return {(t, v): float(ang[k, c]) for k, t in enumerate(K.triangles) for c, v in enumerate(t)}


def law_of_cosines(opposite: float, b: float, c: float) -> float:
    """Angle between sides ``b`` and ``c`` of a Euclidean triangle."""
    cos_a = (b * b + c * c - opposite * opposite) / (2.0 * b * c)
    return math.acos(max(-1.0, min(1.0, cos_a)))


def polygon_angles(points) -> list:
    """Interior angles of a convex planar polygon, from side and chord lengths."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    out = []
    for i in range(n):
        p, q, r = pts[i - 1], pts[i], pts[(i + 1) % n]
        out.append(law_of_cosines(float(np.linalg.norm(p - r)), float(np.linalg.norm(p - q)), float(np.linalg.norm(r - q))))
    return out


# ---------------------------------------------------------------------------
# links and L(K)


def build_link(K: FlagComplex2, m: PEMetric, v) -> WeightedGraph:
    """Link of ``v`` with each edge weighted by the corner angle at ``v``."""
    if v not in set(K.vertices):
        raise ComplexError(f"unknown vertex {v!r}")
    ang = _geometry(K, m)
    nbrs = sorted([b for a, b in K.edges if a == v] + [a for a, b in K.edges if b == v])
    G = WeightedGraph(nbrs)
    for k, t in enumerate(K.triangles):
        if v in t:
            c = t.index(v)
            a, b = (x for x in t if x != v)
            G.add_edge(a, b, float(ang[k, c]))
    return G


@dataclass(frozen=True)
class AngleGraphStructure:
    """Index form of L(K): node ``i`` is the oriented edge ``nodes[i]``; edge
    ``j`` joins ``u[j]`` and ``v[j]`` with the angle at corner ``corner[j]``
    of triangle ``tri[j]``.  ``shared_source[j]`` marks edges coming from
    links (both oriented edges leave the corner vertex)."""

    nodes: tuple
    u: np.ndarray
    v: np.ndarray
    tri: np.ndarray
    corner: np.ndarray
    shared_source: np.ndarray
    tri_edges: np.ndarray


def angle_graph_structure(K: FlagComplex2) -> AngleGraphStructure:
    nodes = []
    for a, b in K.edges:
        nodes += [(a, b), (b, a)]
    index = {x: i for i, x in enumerate(nodes)}
    us, vs, ts, cs, src = [], [], [], [], []
    for k, t in enumerate(K.triangles):
        for c, apex in enumerate(t):
            b1, b2 = (x for x in t if x != apex)
            for (p, q), same_source in ((((apex, b1), (apex, b2))), True), ((((b1, apex), (b2, apex))), False):
                us.append(index[p])
                vs.append(index[q])
                ts.append(k)
                cs.append(c)
                src.append(same_source)
    as_int = lambda x: np.array(x, dtype=np.int64)
    return AngleGraphStructure(
        tuple(nodes), as_int(us), as_int(vs), as_int(ts), as_int(cs), np.array(src, dtype=bool), _tri_edges(K)
    )


def build_L(K: FlagComplex2, m: PEMetric) -> WeightedGraph:
    """The angle graph L(K): oriented edges, adjacent within a triangle when
    they share a source or a target, weighted by the angle between them."""
    ang = _geometry(K, m)
    S = angle_graph_structure(K)
    G = WeightedGraph(S.nodes)
    for j in range(len(S.u)):
        G.add_edge(S.nodes[S.u[j]], S.nodes[S.v[j]], float(ang[S.tri[j], S.corner[j]]))
    return G


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    passes: bool
    length: float
    witness: tuple
    slack: float
    boundary: bool = False
    vacuous: bool = False
    vertex: object = None

    @classmethod
    def from_cycle(cls, cycle: Cycle | None, tol: float, vertex=None, two_pi=TWO_PI) -> "Verdict":
        if cycle is None:
            return cls(True, math.inf, (), math.inf, False, True, vertex)
        slack = cycle.length - two_pi
        return cls(bool(slack >= -tol), cycle.length, cycle.nodes, slack, bool(abs(slack) <= tol), False, vertex)

    def as_dict(self) -> dict:
        return {
            "passes": self.passes,
            "length": _jsonable(self.length),
            "slack": _jsonable(self.slack),
            "boundary": self.boundary,
            "vacuous": self.vacuous,
            "vertex": self.vertex,
            "witness": [list(x) if isinstance(x, tuple) else x for x in self.witness],
        }


def _jsonable(x):
    x = float(x)
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def check_link_condition(K: FlagComplex2, m: PEMetric, tol: float = DEFAULT_TOL) -> dict:
    """Per-vertex verdicts: every simple loop in the link has length >= 2 pi."""
    ang = _geometry(K, m)
    links = {}
    for v in K.vertices:
        links[v] = WeightedGraph()
    for a, b in K.edges:
        links[a].add_node(b)
        links[b].add_node(a)
    for v, G in links.items():
        # same node order as build_link: sorted neighbours
        links[v] = WeightedGraph(sorted(G.nodes))
    for k, t in enumerate(K.triangles):
        for c, v in enumerate(t):
            a, b = (x for x in t if x != v)
            links[v].add_edge(a, b, float(ang[k, c]))
    return {v: Verdict.from_cycle(girth(links[v]), tol, vertex=v) for v in K.vertices}


def check_cat1_L(K: FlagComplex2, m: PEMetric, tol: float = DEFAULT_TOL) -> Verdict:
    """Verdict on whether L(K) has no simple circuit shorter than 2 pi."""
    return Verdict.from_cycle(girth(build_L(K, m)), tol)


# ---------------------------------------------------------------------------
# T(K)


@dataclass(frozen=True)
class TComplex:
    """One vertex, one edge per generator, two triangular faces per simplex.

    ``faces`` holds ``(simplex, copy, word)`` with ``word`` a cyclic tuple of
    ``(generator, exponent)`` read around the boundary of the face."""

    generators: tuple
    faces: tuple

    def euler_characteristic(self) -> int:
        return 1 - len(self.generators) + len(self.faces)


def build_T(K: FlagComplex2) -> TComplex:
    if not K.is_connected():
        raise ComplexError("T(K) needs a connected complex")
    faces = []
    for t in K.triangles:
        u, v, w = t
        xuv, xvw, xuw = (u, v), (v, w), (u, w)
        faces.append((t, 0, ((xuv, 1), (xvw, 1), (xuw, -1))))
        faces.append((t, 1, ((xvw, 1), (xuv, 1), (xuw, -1))))
    return TComplex(tuple(K.edges), tuple(faces))


def t_vertex_link(T: TComplex, m: PEMetric) -> list:
    """Edges ``(end, start, angle)`` of the link of the vertex of T(K).

    Link nodes are ``("out", g)`` (leaving along g) and ``("in", g)``
    (arriving along g).  Each face corner joins the arriving end of one
    letter to the departing end of the next, weighted by the face angle
    there, i.e. the angle opposite the third side."""
    out = []
    for _, _, word in T.faces:
        for i in range(3):
            (g1, e1), (g2, e2), (g3, _) = word[i], word[(i + 1) % 3], word[(i + 2) % 3]
            arrive = ("in", g1) if e1 > 0 else ("out", g1)
            leave = ("out", g2) if e2 > 0 else ("in", g2)
            out.append((arrive, leave, law_of_cosines(m[g3], m[g1], m[g2])))
    return out


def verify_T_link(K: FlagComplex2, m: PEMetric, tol: float = DEFAULT_TOL) -> bool:
    """Is the link of the vertex of T(K) isometric to L(K) as a metric graph?"""
    link_edges = t_vertex_link(build_T(K), m)
    A = nx.Graph()
    for g in K.edges:
        A.add_nodes_from([("out", g), ("in", g)])
    for a, b, w in link_edges:
        if a == b or A.has_edge(a, b):
            return False
        A.add_edge(a, b, weight=w)
    L = build_L(K, m)
    B = nx.Graph()
    B.add_nodes_from(L.nodes)
    for a, b, w in L.edges():
        B.add_edge(a, b, weight=w)
    if A.number_of_edges() != B.number_of_edges() or len(A) != len(B):
        return False
    match = nx.algorithms.isomorphism.GraphMatcher(
        A, B, edge_match=lambda x, y: abs(x["weight"] - y["weight"]) <= tol
    )
    return match.is_isomorphic()


# ---------------------------------------------------------------------------
# metric files


def parse_metric(text: str, K: FlagComplex2 | None = None) -> PEMetric:
    """``length <a> <b> <value>`` records plus an optional ``default <value>``
    that fills every edge of ``K`` left unspecified."""
    lengths = {}
    default = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = line.split()
        try:
            if kind == "length" and len(args) == 3:
                a, b = args[0], args[1]
                if a == b:
                    raise MetricError("edge with a repeated vertex")
                key = (a, b) if a < b else (b, a)
                if key in lengths:
                    raise MetricError(f"duplicate length for {a} {b}")
                lengths[key] = float(args[2])
            elif kind == "default" and len(args) == 1:
                default = float(args[0])
            else:
                raise MetricError(f"malformed {kind!r} record")
        except ValueError as exc:
            raise MetricError(f"line {lineno}: {exc}") from None
    if K is not None and default is not None:
        for e in K.edges:
            lengths.setdefault(e, default)
    m = PEMetric(lengths)
    if K is not None:
        m.check_on(K)
    return m


def format_metric(m: PEMetric) -> str:
    return "".join(f"length {a} {b} {x!r}\n" for (a, b), x in sorted(m.lengths.items()))


def read_metric(path, K: FlagComplex2 | None = None) -> PEMetric:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_metric(text, K)
    except MetricError as exc:
        raise MetricError(f"{path}: {exc}") from None
