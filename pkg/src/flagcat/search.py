"""Multi-start search over piecewise Euclidean metrics.

The optimizer works in log edge lengths with edge 0 pinned at length 1, so
positivity is automatic and the global scale (which changes no angle) is
quotiented out.  The objective is the weighted girth of the target angle
graph minus 2 pi: the disjoint union of all vertex links in ``links`` mode,
the whole of L(K) in ``global`` mode.  It is a min over finitely many smooth
cycle lengths, so the active cycle supplies a subgradient almost everywhere.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np
from scipy.optimize import minimize

from . import kernels
from .complex import FlagComplex2
from .fixtures import K0_CIRCUITS, K0_LABELS, fixture, k0_oriented_edge
from .graph import WeightedGraph, _girth_python
from .metric import (
    DEFAULT_TOL,
    TWO_PI,
    MetricError,
    PEMetric,
    Verdict,
    angle_graph_structure,
    build_L,
    check_cat1_L,
    check_link_condition,
)

MODES = ("links", "global")
CERT_DPS = 34  # a little over twice the 16 significant digits of a double


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "global"
    restarts: int = 100
    seed: int = 0
    max_iters: int = 2000
    tol: float = DEFAULT_TOL
    sigma: float = 0.5  # log-normal jitter of the starting metrics
    step0: float = 0.05  # first subgradient step, in log-length units
    step_decay: float = 200.0  # step_k = step0 / sqrt(1 + k / step_decay)
    penalty0: float = 10.0  # hinge weight at iteration 0
    penalty_decay: float = 500.0  # weight_k = penalty0 / (1 + k / penalty_decay)
    margin: float = 1e-3  # relative triangle margin below which the hinge bites
    window: int = 25  # iterations inspected for active-cycle oscillation
    patience: int = 150  # stalled iterations before the simplex fallback
    fallback_iters: int = 1500
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise SearchError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.restarts < 1:
            raise SearchError("restarts must be at least 1")
        if self.max_iters < 0:
            raise SearchError("max_iters must be non-negative")


@dataclass(frozen=True)
class RestartTrace:
    restart: int
    start_objective: float
    best_objective: float
    iterations: int
    fallback: bool
    active_changes: int


@dataclass
class SearchResult:
    config: SearchConfig
    best_metric: PEMetric
    best_objective: float
    feasible: bool
    traces: list
    active_circuit: tuple
    certificate: Verdict | None = None
    best_restart: int = -1

    @property
    def best_girth(self) -> float:
        return self.best_objective + TWO_PI

    def margin_histogram(self, edges=(-math.inf, -1.0, -0.1, -1e-2, -1e-3, -1e-6, 0.0, math.inf)) -> list:
        """``(low, high, count)`` of per-restart best objectives."""
        values = [t.best_objective for t in self.traces]
        return [(lo, hi, sum(lo <= v < hi for v in values)) for lo, hi in zip(edges, edges[1:])]

    def status(self) -> str:
        return "feasible metric found" if self.feasible else "no metric found"

    def as_dict(self) -> dict:
        return {
            "mode": self.config.mode,
            "seed": self.config.seed,
            "restarts": self.config.restarts,
            "status": self.status(),
            "feasible": self.feasible,
            "best_objective": _finite(self.best_objective),
            "best_girth": _finite(self.best_girth),
            "best_restart": self.best_restart,
            "active_circuit": [list(x) for x in self.active_circuit],
            "certificate": None if self.certificate is None else self.certificate.as_dict(),
            "margin_histogram": [[_finite(lo), _finite(hi), n] for lo, hi, n in self.margin_histogram()],
            "traces": [asdict(t) for t in self.traces],
            "metric": [[a, b, x] for (a, b), x in sorted(self.best_metric.lengths.items())],
        }


def _finite(x):
    x = float(x)
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


# ---------------------------------------------------------------------------
# objective


@dataclass(frozen=True)
class _Problem:
    K: FlagComplex2
    tri_edges: np.ndarray
    u: np.ndarray
    v: np.ndarray
    tri: np.ndarray
    corner: np.ndarray
    n_nodes: int
    nodes: tuple


def _problem(K: FlagComplex2, mode: str) -> _Problem:
    S = angle_graph_structure(K)
    keep = S.shared_source if mode == "links" else np.ones(len(S.u), dtype=bool)
    return _Problem(K, S.tri_edges, S.u[keep], S.v[keep], S.tri[keep], S.corner[keep], len(S.nodes), S.nodes)


def _evaluate(P: _Problem, logl: np.ndarray):
    """``(objective, grad, cycle_edges, ok)``; objective is girth - 2 pi."""
    g, grad, _, cyc, ok = kernels.girth_objective(logl, P.tri_edges, P.u, P.v, P.tri, P.corner, P.n_nodes)
    return g - TWO_PI, grad, cyc, ok


def objective(K: FlagComplex2, m: PEMetric, mode: str = "global") -> float:
    """Girth of the target angle graph of ``(K, m)`` minus 2 pi."""
    P = _problem(K, mode)
    logl = np.log(np.array([m[e] for e in K.edges], dtype=np.float64))
    value, _, _, ok = _evaluate(P, logl)
    if not ok:
        raise MetricError("metric has a degenerate triangle")
    return value


def _run_restart(P: _Problem, cfg: SearchConfig, restart: int):
    rng = np.random.default_rng([cfg.seed, restart])
    E = len(P.K.edges)
    x = cfg.sigma * rng.standard_normal(E)
    x -= x[0]
    # resample until the start is non-degenerate
    for _ in range(1000):
        f, g, cyc, ok = _evaluate(P, x)
        if ok:
            break
        x = cfg.sigma * rng.standard_normal(E)
        x -= x[0]
    else:
        raise SearchError("could not sample a non-degenerate starting metric")
    start = f
    best, best_x = f, x.copy()
    last_improve = 0
    recent = deque(maxlen=cfg.window)
    changes = 0
    prev_key = None
    fallback = False
    k = 0
    for k in range(cfg.max_iters):
        if not math.isfinite(f):
            break  # the target graph is a forest: nothing to improve
        key = tuple(sorted(cyc.tolist()))
        if key != prev_key:
            changes += prev_key is not None
            prev_key = key
        recent.append(key)
        weight = cfg.penalty0 / (1.0 + k / cfg.penalty_decay)
        pen, pgrad = kernels.margin_penalty(x, P.tri_edges, cfg.margin)
        d = g - weight * pgrad
        d[0] = 0.0
        norm = float(np.sqrt(d @ d))
        if norm == 0.0:
            break
        step = cfg.step0 / math.sqrt(1.0 + k / cfg.step_decay)
        # halve the step until no triangle degenerates
        for _ in range(40):
            trial = x + (step / norm) * d
            ft, gt, ct, okt = _evaluate(P, trial)
            if okt:
                break
            step *= 0.5
        else:
            break
        x, f, g, cyc = trial, ft, gt, ct
        if f > best:
            best, best_x = f, x.copy()
            last_improve = k
        elif k - last_improve >= cfg.patience and len(set(recent)) > 1:
            fallback = True
            break
    if fallback:
        best, best_x = _simplex_polish(P, cfg, best, best_x)
    return RestartTrace(restart, float(start), float(best), k + 1, fallback, changes), best_x


def _simplex_polish(P: _Problem, cfg: SearchConfig, best: float, best_x: np.ndarray):
    """Nelder-Mead on the free coordinates, keeping the result only if better."""
    weight = cfg.penalty0 / (1.0 + cfg.max_iters / cfg.penalty_decay)

    def negf(y):
        x = np.concatenate(([0.0], y))
        f, _, _, ok = _evaluate(P, x)
        if not ok:
            return 1e6
        pen, _ = kernels.margin_penalty(x, P.tri_edges, cfg.margin)
        return -(f - weight * pen)

    res = minimize(
        negf,
        best_x[1:],
        method="Nelder-Mead",
        options={"maxiter": cfg.fallback_iters, "xatol": 1e-10, "fatol": 1e-12, "initial_simplex": None},
    )
    x = np.concatenate(([0.0], res.x))
    f, _, _, ok = _evaluate(P, x)
    if ok and f > best:
        return f, x
    return best, best_x


def _restart_job(args):
    K, cfg, restart = args
    return _run_restart(_problem(K, cfg.mode), cfg, restart)


def search_metric(K: FlagComplex2, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Maximize the girth of the target angle graph over metrics on ``K``."""
    if not K.triangles:
        raise SearchError("complex has no triangles; there is nothing to metrize")
    P = _problem(K, cfg.mode)
    jobs = [(K, cfg, r) for r in range(cfg.restarts)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_restart_job, jobs))
    else:
        outcomes = [_run_restart(P, cfg, r) for r in range(cfg.restarts)]
    traces = [t for t, _ in outcomes]
    # ties go to the lowest restart index, so merging order never matters
    best_restart = max(range(len(traces)), key=lambda r: (traces[r].best_objective, -r))
    best_x = outcomes[best_restart][1]
    metric = PEMetric({e: float(l) for e, l in zip(K.edges, np.exp(best_x))})
    value, _, cyc, _ = _evaluate(P, best_x)
    active = tuple(P.nodes[int(i)] for i in _cycle_nodes(P, cyc))
    cert = None
    feasible = False
    if value >= -cfg.tol:
        cert = verify_certificate(K, metric, cfg.tol, cfg.mode)
        feasible = cert.passes
    return SearchResult(cfg, metric, float(value), feasible, traces, active, cert, best_restart)


def _cycle_nodes(P: _Problem, cyc) -> list:
    """Node sequence of a cycle given by its edge ids (path, then closing edge)."""
    if len(cyc) == 0:
        return []
    last = int(cyc[-1])
    node = int(P.u[last])  # the closing edge runs from the path's end back to its start
    out = [node]
    for j in cyc[:-1]:
        j = int(j)
        node = int(P.v[j]) if int(P.u[j]) == node else int(P.u[j])
        out.append(node)
    return out


# ---------------------------------------------------------------------------
# certificates


def _mp_angle(opposite, b, c):
    cos_a = (b * b + c * c - opposite * opposite) / (2 * b * c)
    return mpmath.acos(max(mpmath.mpf(-1), min(mpmath.mpf(1), cos_a)))


def _mp_target_graph(K: FlagComplex2, m: PEMetric, mode: str) -> WeightedGraph:
    S = angle_graph_structure(K)
    L = {e: mpmath.mpf(m[e]) for e in K.edges}
    G = WeightedGraph(S.nodes)
    for j in range(len(S.u)):
        if mode == "links" and not S.shared_source[j]:
            continue
        t = K.triangles[S.tri[j]]
        c = int(S.corner[j])
        apex = t[c]
        b1, b2 = (x for x in t if x != apex)
        w = _mp_angle(L[(b1, b2)], L[tuple(sorted((apex, b1)))], L[tuple(sorted((apex, b2)))])
        if not w > 0:
            raise MetricError(f"degenerate corner at {apex} in triangle {' '.join(t)}")
        G.add_edge(S.nodes[S.u[j]], S.nodes[S.v[j]], w)
    return G


def _mp_verdict(graph: WeightedGraph, tol: float, vertex=None) -> Verdict:
    cyc = _girth_python(graph) if graph.n_edges else None
    if cyc is None:
        return Verdict(True, math.inf, (), math.inf, False, True, vertex)
    slack = cyc.length - 2 * mpmath.pi
    return Verdict(bool(slack >= -tol), float(cyc.length), cyc.nodes, float(slack), bool(abs(slack) <= tol), False, vertex)


def verify_certificate(K: FlagComplex2, m: PEMetric, tol: float = DEFAULT_TOL, mode: str = "global") -> Verdict:
    """Recheck a metric with angles and girth evaluated at 34 significant digits.

    In ``links`` mode the verdict is the worst vertex (smallest slack, ties
    to the first vertex in sorted order), with ``vertex`` set.
    """
    if mode not in MODES:
        raise SearchError(f"mode must be one of {MODES}, got {mode!r}")
    m.check_on(K)
    with mpmath.workdps(CERT_DPS):
        G = _mp_target_graph(K, m, mode)
        if mode == "global":
            return _mp_verdict(G, tol)
        worst = None
        for v in K.vertices:
            sub = G.subgraph([x for x in G.nodes if x[0] == v])
            verdict = _mp_verdict(sub, tol, vertex=v)
            if worst is None or verdict.slack < worst.slack:
                worst = verdict
        return worst


# ---------------------------------------------------------------------------
# the K0 example


def _circuit_edges(labels) -> list:
    """Unordered L-edges traversed by a closed circuit given as letters."""
    nodes = [k0_oriented_edge(x) for x in labels]
    return [frozenset(p) for p in zip(nodes, nodes[1:])]


@dataclass
class K0Report:
    circuits: dict  # name -> {"edges": n, "closed": bool, "simple": bool, "adjacent": bool}
    identity_holds: bool
    identity_residual_equilateral: float
    equilateral: dict  # name -> length, plus "bh" and "dk"
    samples: list  # per sampled metric: lengths of c1..c4 and min(c3, c4)
    search: SearchResult | None = None
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.identity_holds and all(
            c["closed"] and c["simple"] and c["adjacent"] for c in self.circuits.values()
        )

    def as_dict(self) -> dict:
        return {
            "circuits": self.circuits,
            "identity_holds": self.identity_holds,
            "identity_residual_equilateral": self.identity_residual_equilateral,
            "equilateral": self.equilateral,
            "samples": self.samples,
            "search": None if self.search is None else self.search.as_dict(),
            "notes": self.notes,
        }

    def to_text(self) -> str:
        out = ["K0 = suspension of the path u1-u2-u3-u4 with apexes p, q", ""]
        out.append("letters: " + ", ".join(f"{k}={u}>{v}" for k, (u, v) in K0_LABELS.items()))
        for name, c in self.circuits.items():
            flags = " ".join(f"{k}={'yes' if c[k] else 'NO'}" for k in ("closed", "simple", "adjacent"))
            out.append(f"{name}: {c['edges']:2d} edges  {flags}")
        out.append(
            "multiset identity c1+c2 = c3+c4+2(b-h)+2(d-k): " + ("PASS" if self.identity_holds else "FAIL")
        )
        eq = self.equilateral
        out.append(
            "equilateral: "
            + "  ".join(f"l({k})={eq[k]:.12f}" for k in ("c1", "c2", "c3", "c4", "bh", "dk"))
        )
        out.append(f"equilateral residual of the length identity: {self.identity_residual_equilateral:.3e}")
        if self.samples:
            worst = max(s["min_c3_c4"] for s in self.samples)
            out.append(f"sampled metrics: {len(self.samples)}; largest min(l(c3), l(c4)) = {worst:.6f} (2 pi = {TWO_PI:.6f})")
        if self.search is not None:
            r = self.search
            out.append(
                f"global search: {r.config.restarts} restarts, seed {r.config.seed}: "
                f"best girth {r.best_girth:.9f}, objective {r.best_objective:.6e}, {r.status()}"
            )
            for lo, hi, n in r.margin_histogram():
                if n:
                    out.append(f"  objective in [{lo:g}, {hi:g}): {n}")
        out.extend(self.notes)
        return "\n".join(out) + "\n"


def _circuit_length(G: WeightedGraph, labels) -> float:
    nodes = [k0_oriented_edge(x) for x in labels]
    return sum(G.weight(a, b) for a, b in zip(nodes, nodes[1:]))


def k0_report(samples: int = 20, seed: int = 0, search: SearchConfig | None = None) -> K0Report:
    """Combinatorial and numerical checks of the four K0 circuits."""
    K = fixture("k0")
    L = build_L(K, PEMetric.equilateral(K))
    circuits = {}
    for name, labels in K0_CIRCUITS.items():
        nodes = [k0_oriented_edge(x) for x in labels]
        circuits[name] = {
            "edges": len(nodes) - 1,
            "closed": nodes[0] == nodes[-1],
            "simple": len(set(nodes[:-1])) == len(nodes) - 1,
            "adjacent": all(L.has_edge(a, b) for a, b in zip(nodes, nodes[1:])),
        }
    lhs = Counter(_circuit_edges(K0_CIRCUITS["c1"]) + _circuit_edges(K0_CIRCUITS["c2"]))
    bh = frozenset((k0_oriented_edge("b"), k0_oriented_edge("h")))
    dk = frozenset((k0_oriented_edge("d"), k0_oriented_edge("k")))
    rhs = Counter(_circuit_edges(K0_CIRCUITS["c3"]) + _circuit_edges(K0_CIRCUITS["c4"]) + [bh, bh, dk, dk])
    identity = lhs == rhs

    def lengths(G):
        row = {name: _circuit_length(G, labels) for name, labels in K0_CIRCUITS.items()}
        row["bh"] = G.weight(*bh)
        row["dk"] = G.weight(*dk)
        row["min_c3_c4"] = min(row["c3"], row["c4"])
        return row

    eq = lengths(L)
    residual = abs(eq["c1"] + eq["c2"] - eq["c3"] - eq["c4"] - 2 * eq["bh"] - 2 * eq["dk"])
    rng = np.random.default_rng(seed)
    rows = [lengths(build_L(K, PEMetric.random(K, rng))) for _ in range(samples)]
    result = search_metric(K, search) if search is not None else None
    notes = [
        "c1 + c2 - 2 l(b-h) - 2 l(d-k) = c3 + c4 for every metric, so c3 or c4 falls short of 2 pi",
        "whenever c1 + c2 < 4 pi + 2 l(b-h) + 2 l(d-k); the search result is numerical evidence, not a proof.",
    ]
    return K0Report(circuits, identity, residual, {k: eq[k] for k in ("c1", "c2", "c3", "c4", "bh", "dk")}, rows, result, notes)


def link_verdicts_for(K: FlagComplex2, m: PEMetric, mode: str, tol: float = DEFAULT_TOL):
    """Float verdict for a search mode (used to cross-check stored objectives)."""
    if mode == "global":
        return check_cat1_L(K, m, tol)
    verdicts = check_link_condition(K, m, tol)
    return min(verdicts.values(), key=lambda v: v.slack)


__all__ = [
    "SearchConfig",
    "SearchResult",
    "RestartTrace",
    "SearchError",
    "K0Report",
    "search_metric",
    "verify_certificate",
    "k0_report",
    "objective",
]
