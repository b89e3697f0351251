"""Hot numeric kernels.

All functions here take and return plain numpy arrays and scalars so that they
compile under ``numba.njit``; see :mod:`flagcat._accel` for the switch between
the compiled and the pure-Python path.  Callers should go through the
higher-level modules (:mod:`flagcat.graph`, :mod:`flagcat.metric`,
:mod:`flagcat.search`, :mod:`flagcat.raag`) rather than use these directly.
"""
import heapq

import numpy as np

from ._accel import jit

DEGENERACY_TOL = 1e-12


@jit
def csr_adjacency(n, eu, ev):
    """Undirected CSR adjacency: (indptr, neighbour, edge id)."""
    m = eu.shape[0]
    deg = np.zeros(n + 1, dtype=np.int64)
    for i in range(m):
        deg[eu[i] + 1] += 1
        deg[ev[i] + 1] += 1
    indptr = np.cumsum(deg)
    fill = indptr[:-1].copy()
    nbr = np.empty(2 * m, dtype=np.int64)
    eid = np.empty(2 * m, dtype=np.int64)
    for i in range(m):
        a = eu[i]
        b = ev[i]
        nbr[fill[a]] = b
        eid[fill[a]] = i
        fill[a] += 1
        nbr[fill[b]] = a
        eid[fill[b]] = i
        fill[b] += 1
    return indptr, nbr, eid


@jit
def girth_kernel(n, eu, ev, ew):
    """Minimum-weight simple cycle of a graph with positive edge weights.

    For every edge (s, t) run Dijkstra from s to t with that edge removed; the
    shortest such path closed by the edge is the best cycle through it.
    Returns ``(length, vertices, edges)`` where ``edges`` lists the path from
    s to t followed by the closing edge, and ``length`` is exactly their
    left-to-right floating point sum.  ``length`` is ``inf`` for a forest.
    """
    m = eu.shape[0]
    indptr, nbr, eid = csr_adjacency(n, eu, ev)
    best = np.inf
    best_edge = -1
    best_pred = np.full(n, -1, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    pred = np.empty(n, dtype=np.int64)
    for i in range(m):
        s = eu[i]
        t = ev[i]
        wi = ew[i]
        if wi >= best:
            continue
        for k in range(n):
            dist[k] = np.inf
            pred[k] = -1
        dist[s] = 0.0
        heap = [(0.0, s)]
        found = False
        while len(heap) > 0:
            item = heapq.heappop(heap)
            d = item[0]
            u = item[1]
            if d > dist[u]:
                continue
            if d + wi >= best:
                break
            if u == t:
                found = True
                break
            for p in range(indptr[u], indptr[u + 1]):
                e = eid[p]
                if e == i:
                    continue
                x = nbr[p]
                nd = d + ew[e]
                if nd < dist[x]:
                    dist[x] = nd
                    pred[x] = e
                    heapq.heappush(heap, (nd, x))
        if found:
            total = dist[t] + wi
            if total < best:
                best = total
                best_edge = i
                for k in range(n):
                    best_pred[k] = pred[k]
    if best_edge < 0:
        return np.inf, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    s = eu[best_edge]
    t = ev[best_edge]
    # walk back from t to s along the stored predecessor edges
    count = 0
    x = t
    while x != s:
        e = best_pred[x]
        x = eu[e] if ev[e] == x else ev[e]
        count += 1
    path_edges = np.empty(count + 1, dtype=np.int64)
    verts = np.empty(count + 1, dtype=np.int64)
    x = t
    for k in range(count - 1, -1, -1):
        e = best_pred[x]
        path_edges[k] = e
        verts[k + 1] = x
        x = eu[e] if ev[e] == x else ev[e]
    verts[0] = s
    path_edges[count] = best_edge
    return best, verts, path_edges


@jit
def triangle_angles(lengths, tri_edges):
    """Corner angles by the law of cosines, with log-length derivatives.

    ``tri_edges[t, c]`` is the edge opposite corner ``c`` of triangle ``t``.
    Returns ``(angles, dangles, ok)``: ``angles[t, c]`` and
    ``dangles[t, c, k] = d angles[t, c] / d log lengths[tri_edges[t, (c+k)%3]]``.
    ``ok`` is False if any triangle is degenerate (relative margin below
    ``DEGENERACY_TOL``), in which case the arrays are partially filled.
    """
    T = tri_edges.shape[0]
    ang = np.zeros((T, 3), dtype=np.float64)
    dang = np.zeros((T, 3, 3), dtype=np.float64)
    for t in range(T):
        l0 = lengths[tri_edges[t, 0]]
        l1 = lengths[tri_edges[t, 1]]
        l2 = lengths[tri_edges[t, 2]]
        slack = DEGENERACY_TOL * (l0 + l1 + l2)
        if l1 + l2 - l0 <= slack or l0 + l2 - l1 <= slack or l0 + l1 - l2 <= slack:
            return ang, dang, False
        for c in range(3):
            a = lengths[tri_edges[t, c]]
            b = lengths[tri_edges[t, (c + 1) % 3]]
            cc = lengths[tri_edges[t, (c + 2) % 3]]
            cos_a = (b * b + cc * cc - a * a) / (2.0 * b * cc)
            if cos_a > 1.0:
                cos_a = 1.0
            elif cos_a < -1.0:
                cos_a = -1.0
            A = np.arccos(cos_a)
            sin_a = np.sin(A)
            if sin_a <= 0.0:
                return ang, dang, False
            ang[t, c] = A
            dang[t, c, 0] = a * a / (b * cc * sin_a)
            dang[t, c, 1] = (cc * cos_a - b) / (cc * sin_a)
            dang[t, c, 2] = (b * cos_a - cc) / (b * sin_a)
    return ang, dang, True


@jit
def girth_objective(logl, tri_edges, l_u, l_v, l_tri, l_corner, n_nodes):
    """Girth of an angle graph as a function of log edge lengths.

    The graph has ``n_nodes`` vertices and one edge ``(l_u[j], l_v[j])`` per
    entry, weighted by the angle at corner ``l_corner[j]`` of triangle
    ``l_tri[j]``.  Returns ``(girth, grad, verts, cycle_edges, ok)``; ``grad``
    is the gradient of the active (shortest) cycle's length.
    """
    E = logl.shape[0]
    lengths = np.exp(logl)
    grad = np.zeros(E, dtype=np.float64)
    ang, dang, ok = triangle_angles(lengths, tri_edges)
    if not ok:
        return -np.inf, grad, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), False
    m = l_u.shape[0]
    w = np.empty(m, dtype=np.float64)
    for j in range(m):
        w[j] = ang[l_tri[j], l_corner[j]]
    g, verts, cyc = girth_kernel(n_nodes, l_u, l_v, w)
    for k in range(cyc.shape[0]):
        j = cyc[k]
        t = l_tri[j]
        c = l_corner[j]
        for q in range(3):
            grad[tri_edges[t, (c + q) % 3]] += dang[t, c, q]
    return g, grad, verts, cyc, True


@jit
def margin_penalty(logl, tri_edges, delta):
    """Hinge on relative triangle margins ``mu = (b + c - a) / (a + b + c)``.

    Returns ``(penalty, grad)`` with ``penalty = sum max(0, log(delta / mu))^2``
    and the gradient taken with respect to log lengths.  The hinge is C^1 at
    ``mu = delta`` and its slope grows like ``1 / mu``, which outruns the
    ``1 / sqrt(mu)`` blow-up of the angle derivatives near a flat triangle.
    """
    E = logl.shape[0]
    lengths = np.exp(logl)
    grad = np.zeros(E, dtype=np.float64)
    pen = 0.0
    T = tri_edges.shape[0]
    log_delta = np.log(delta)
    for t in range(T):
        for c in range(3):
            ia = tri_edges[t, c]
            ib = tri_edges[t, (c + 1) % 3]
            ic = tri_edges[t, (c + 2) % 3]
            a = lengths[ia]
            b = lengths[ib]
            cc = lengths[ic]
            P = a + b + cc
            mu = 1.0 - 2.0 * a / P
            if mu < 1e-300:
                mu = 1e-300
            gap = log_delta - np.log(mu)
            if gap > 0.0:
                pen += gap * gap
                # d pen / d mu = -2 gap / mu;  mu = 1 - 2a/P
                scale = -2.0 * gap / mu
                dmu_da = -2.0 / P + 2.0 * a / (P * P)
                dmu_dbc = 2.0 * a / (P * P)
                grad[ia] += scale * dmu_da * a
                grad[ib] += scale * dmu_dbc * b
                grad[ic] += scale * dmu_dbc * cc
    return pen, grad


@jit
def raag_reduce(codes, commute):
    """Geodesic form of a word in a right-angled Artin group.

    Letters are encoded as ``2 * generator + (0 for +1, 1 for -1)``;
    ``commute[g, h]`` is True when generators g and h commute (including
    g == h).  Letters are appended one at a time to an already reduced word;
    an incoming ``g^e`` cancels the rightmost ``g^-e`` that can be shuffled
    to the end, i.e. the deletable pair whose right member is leftmost.
    """
    n = codes.shape[0]
    out = np.empty(n, dtype=np.int64)
    k = 0
    for i in range(n):
        code = codes[i]
        g = code >> 1
        s = code & 1
        j = k - 1
        hit = -1
        while j >= 0:
            h = out[j] >> 1
            if h == g:
                if (out[j] & 1) != s:
                    hit = j
                break
            if not commute[g, h]:
                break
            j -= 1
        if hit >= 0:
            for q in range(hit, k - 1):
                out[q] = out[q + 1]
            k -= 1
        else:
            out[k] = code
            k += 1
    return out[:k].copy()
