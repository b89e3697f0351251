"""Named example complexes."""
from __future__ import annotations

import itertools

import numpy as np

from .complex import (
    ComplexError,
    Delta2Complex,
    FlagComplex2,
    Graph,
    subdivide,
    suspension,
)

# Oriented edges of K0 = suspension of the path u1-u2-u3-u4 with apexes p, q.
# a = u2^-1 u1, x = u2^-1 u3, e = u3^-1 u4 span the path; the remaining
# letters label the suspension edges so that c1..c4 below close up in L(K0).
K0_LABELS = {
    "a": ("u2", "u1"),
    "x": ("u2", "u3"),
    "e": ("u3", "u4"),
    "u": ("p", "u1"),
    "b": ("p", "u2"),
    "h": ("p", "u3"),
    "r": ("p", "u4"),
    "v": ("q", "u1"),
    "d": ("q", "u2"),
    "k": ("q", "u3"),
    "s": ("q", "u4"),
}

K0_CIRCUITS = {
    "c1": ("b", "h", "r", "e", "s", "k", "d", "v", "a", "u", "b"),
    "c2": ("b", "x^-1", "d", "k", "x", "h", "b"),
    "c3": ("b", "x^-1", "d", "v", "a", "u", "b"),
    "c4": ("h", "r", "e", "s", "k", "x", "h"),
}


def k0_oriented_edge(label: str, labels: dict = K0_LABELS) -> tuple:
    """Oriented edge of K0 named by a letter, optionally with ``^-1``."""
    if label.endswith("^-1"):
        u, v = labels[label[:-3]]
        return (v, u)
    return labels[label]


def path_graph(n: int = 4, prefix: str = "u") -> Graph:
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    return Graph.from_edges(zip(names, names[1:]))


def cycle_graph(n: int = 5, prefix: str = "c") -> Graph:
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    return Graph.from_edges(zip(names, names[1:] + names[:1]))


def dunce_hat() -> Delta2Complex:
    """One triangle whose three edges [a,b], [a,c], [b,c] are one edge."""
    return Delta2Complex(1, ((0, 0),), ((0, 0, 0),))


def _torus() -> FlagComplex2:
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return FlagComplex2.build(triangles=[tuple(f"t{j}" for j in t) for t in tris])


def _rp2() -> FlagComplex2:
    tris = [
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
        (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4),
    ]
    return FlagComplex2.build(triangles=[tuple(f"r{j}" for j in t) for t in tris])


def _annulus() -> FlagComplex2:
    tris = []
    for i in range(4):
        j = (i + 1) % 4
        tris.append((f"a{i}", f"b{i}", f"b{j}"))
        tris.append((f"a{i}", f"a{j}", f"b{j}"))
    return FlagComplex2.build(triangles=tris)


# ---------------------------------------------------------------------------
# Poincare homology sphere spine


def _dodecahedron():
    phi = (1 + 5 ** 0.5) / 2
    pts = [np.array(p, dtype=float) for p in itertools.product((-1, 1), repeat=3)]
    for s1, s2 in itertools.product((-1, 1), repeat=2):
        pts.append(np.array((0, s1 / phi, s2 * phi)))
        pts.append(np.array((s1 / phi, s2 * phi, 0)))
        pts.append(np.array((s2 * phi, 0, s1 / phi)))
    pts = np.array(pts)
    normals = []
    for s1, s2 in itertools.product((-1, 1), repeat=2):
        for perm in ((0, s1 * phi, s2), (s1 * phi, s2, 0), (s2, 0, s1 * phi)):
            normals.append(np.array(perm, dtype=float))
    faces = []
    for n in normals:
        n = n / np.linalg.norm(n)
        dots = pts @ n
        idx = np.flatnonzero(np.isclose(dots, dots.max()))
        if len(idx) != 5:
            raise ComplexError("dodecahedron face detection failed")
        centre = pts[idx].mean(axis=0)
        e1 = pts[idx[0]] - centre
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        order = sorted(idx, key=lambda i: np.arctan2((pts[i] - centre) @ e2, (pts[i] - centre) @ e1))
        faces.append((n, list(order)))
    return pts, faces


def _rotate(x, axis, angle):
    c, s = np.cos(angle), np.sin(angle)
    return x * c + np.cross(axis, x) * s + axis * (axis @ x) * (1 - c)


def spine_delta_complex(twist: float = np.pi / 5) -> Delta2Complex:
    """2-skeleton of the dodecahedron with opposite faces glued by ``twist``.

    Each face is mapped to its opposite by the reflection through the
    parallel central plane followed by a rotation about the face normal.
    Pentagons are coned off from a centre vertex to give triangles.
    """
    pts, faces = _dodecahedron()
    nv = len(pts)
    parent = list(range(nv))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def nearest(y):
        d = np.linalg.norm(pts - y, axis=1)
        j = int(d.argmin())
        if d[j] > 1e-9:
            raise ComplexError("face gluing does not send vertices to vertices")
        return j

    reps = []
    glue_maps = []
    used = set()
    for fi, (n, verts) in enumerate(faces):
        if fi in used:
            continue
        fj = next(j for j, (m, _) in enumerate(faces) if np.allclose(m, -n))
        used.update((fi, fj))
        mapping = {}
        for i in verts:
            y = pts[i] - 2 * (pts[i] @ n) * n
            mapping[i] = nearest(_rotate(y, n, twist))
        if sorted(mapping.values()) != sorted(faces[fj][1]):
            raise ComplexError("face is not glued onto its opposite")
        reps.append(fi)
        glue_maps.append(mapping)
        for i, j in mapping.items():
            parent[find(i)] = find(j)

    # oriented edge classes via union-find with orientation parity
    dodeca_edges = set()
    for _, verts in faces:
        for a, b in zip(verts, verts[1:] + verts[:1]):
            dodeca_edges.add((min(a, b), max(a, b)))
    dodeca_edges = sorted(dodeca_edges)
    eidx = {e: k for k, e in enumerate(dodeca_edges)}
    eparent = list(range(len(dodeca_edges)))
    eflip = [0] * len(dodeca_edges)

    def efind(k):
        flip = 0
        while eparent[k] != k:
            flip ^= eflip[k]
            k = eparent[k]
        return k, flip

    def eunion(k1, k2, rel):
        (r1, f1), (r2, f2) = efind(k1), efind(k2)
        if r1 == r2:
            if f1 ^ f2 != rel:
                raise ComplexError("an edge is glued to its own reverse")
            return
        eparent[r1] = r2
        eflip[r1] = f1 ^ f2 ^ rel

    for mapping in glue_maps:
        for (a, b) in dodeca_edges:
            if a in mapping and b in mapping:
                c, d = mapping[a], mapping[b]
                rel = 0 if c < d else 1
                eunion(eidx[(a, b)], eidx[(min(c, d), max(c, d))], rel)

    vclass = sorted({find(i) for i in range(nv)})
    vid = {r: k for k, r in enumerate(vclass)}
    eroots = sorted({efind(k)[0] for k in range(len(dodeca_edges))})
    erid = {r: k for k, r in enumerate(eroots)}
    edges = []
    for r in eroots:
        a, b = dodeca_edges[r]
        edges.append((vid[find(a)], vid[find(b)]))

    n_vertices = len(vclass)
    triangles = []
    for fi in reps:
        centre = n_vertices
        n_vertices += 1
        verts = faces[fi][1]
        spoke = {}
        for a in verts:
            spoke[a] = len(edges)
            edges.append((vid[find(a)], centre))
        for a, b in zip(verts, verts[1:] + verts[:1]):
            root, flip = efind(eidx[(min(a, b), max(a, b))])
            # class representative runs from dodeca_edges[root][0] to [1];
            # ``along`` says whether the side a -> b follows it
            along = (a < b) ^ bool(flip)
            c0, c1 = (a, b) if along else (b, a)
            triangles.append((spoke[c1], spoke[c0], erid[root]))
    return Delta2Complex(n_vertices, tuple(edges), tuple(triangles))


FIXTURE_NAMES = (
    "triangle",
    "two_triangles",
    "path4",
    "pentagon",
    "k0",
    "annulus",
    "dunce_hat",
    "dunce_hat_flag",
    "torus",
    "rp2",
    "poincare_spine",
)


def fixture(name: str):
    """Return a bundled complex by name."""
    if name == "triangle":
        return FlagComplex2.build(triangles=[("a", "b", "c")])
    if name == "two_triangles":
        return FlagComplex2.build(triangles=[("a", "b", "c"), ("a", "b", "d")])
    if name == "path4":
        g = path_graph(4)
        return FlagComplex2.build(g.nodes, g.edges)
    if name == "pentagon":
        g = cycle_graph(5)
        return FlagComplex2.build(g.nodes, g.edges)
    if name == "k0":
        return suspension(path_graph(4))
    if name == "annulus":
        return _annulus()
    if name == "dunce_hat":
        return dunce_hat()
    if name == "dunce_hat_flag":
        return subdivide(dunce_hat(), 3).to_simplicial()
    if name == "torus":
        return _torus()
    if name == "rp2":
        return _rp2()
    if name == "poincare_spine":
        return subdivide(spine_delta_complex(), 2).to_simplicial()
    raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
