"""Integer homology of 2-complexes via Smith normal form.

Everything here is exact: matrices hold Python ints, never floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .complex import FlagComplex2


class IntMatrix:
    """Dense integer matrix backed by lists of Python ints."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, rows=None, cols=None):
        data = [[int(x) for x in row] for row in data]
        self.rows = len(data) if rows is None else rows
        self.cols = (len(data[0]) if data else 0) if cols is None else cols
        if len(data) != self.rows or any(len(r) != self.cols for r in data):
            raise ValueError("ragged or mis-sized matrix data")
        self.data = data

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    def copy(self):
        return IntMatrix([row[:] for row in self.data], self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.data == other.data
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols_other = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) for col in cols_other] for row in self.data]
        return IntMatrix(out, self.rows, other.cols)

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def diagonal(self):
        return [self.data[i][i] for i in range(min(self.rows, self.cols))]

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [row[:] for row in self.data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def __repr__(self):
        return f"IntMatrix({self.data!r})"


def smith_normal_form(A: IntMatrix):
    """Return ``(D, U, V)`` with ``U @ A @ V == D`` and U, V unimodular.

    D is diagonal with non-negative entries, each dividing the next.  The
    pivot is always the entry of smallest nonzero absolute value in the
    active block, ties broken by lowest (row, column).
    """
    m, n = A.rows, A.cols
    D = [row[:] for row in A.data]
    U = IntMatrix.identity(m).data
    V = IntMatrix.identity(n).data

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        D[dst] = [x - q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in D:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, D[i][t] // p)
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, D[t][j] // p)
            rest = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
            rest += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            # fold the offending row in; the next pass shrinks the pivot
            D[t] = [x + y for x, y in zip(D[t], D[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return IntMatrix(D, m, n), IntMatrix(U, m, m), IntMatrix(V, n, n)


def _normalise_diagonal(diag):
    """Turn any nonzero diagonal into invariant factors (each divides the next)."""
    d = sorted(abs(x) for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = gcd(d[i], d[j])
                if g != d[i]:
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
    return d


def invariant_factors(A: IntMatrix) -> list:
    """Nonzero invariant factors of ``A`` (sparse elimination, no transforms)."""
    rows = {}
    colrows: dict = {}
    for i, row in enumerate(A.data):
        entries = {j: x for j, x in enumerate(row) if x}
        if entries:
            rows[i] = entries
            for j in entries:
                colrows.setdefault(j, set()).add(i)

    def row_op(dst, src, q):  # row_dst -= q * row_src
        rd = rows[dst]
        for j, y in rows[src].items():
            x = rd.get(j, 0) - q * y
            if x:
                rd[j] = x
                colrows[j].add(dst)
            elif j in rd:
                del rd[j]
                colrows[j].discard(dst)

    def col_op(dst, src, q):  # col_dst -= q * col_src
        for i in list(colrows.get(src, ())):
            r = rows[i]
            x = r.get(dst, 0) - q * r[src]
            if x:
                r[dst] = x
                colrows.setdefault(dst, set()).add(i)
            elif dst in r:
                del r[dst]
                colrows[dst].discard(i)

    diag = []
    while rows:
        best = None
        for i in sorted(rows):
            for j, x in rows[i].items():
                key = (abs(x), i, j)
                if best is None or key < best:
                    best = key
        _, pi, pj = best
        while True:
            p = rows[pi][pj]
            for i in sorted(colrows[pj] - {pi}):
                row_op(i, pi, rows[i][pj] // p)
            for j in sorted(set(rows[pi]) - {pj}):
                col_op(j, pj, rows[pi][j] // p)
            rest = [(abs(rows[i][pj]), i, pj) for i in colrows[pj] if i != pi]
            rest += [(abs(x), pi, j) for j, x in rows[pi].items() if j != pj]
            if not rest:
                break
            _, pi, pj = min(rest)
        diag.append(rows[pi][pj])
        del rows[pi]
        colrows[pj].discard(pi)
        for i in [i for i, r in rows.items() if not r]:
            del rows[i]
    return _normalise_diagonal(diag)


def boundary_matrices(K: FlagComplex2):
    """``(d2, d1)`` for the lexicographically oriented chain complex of ``K``."""
    vindex = {v: i for i, v in enumerate(K.vertices)}
    eindex = {e: j for j, e in enumerate(K.edges)}
    d1 = IntMatrix.zeros(len(K.vertices), len(K.edges))
    for j, (a, b) in enumerate(K.edges):
        d1.data[vindex[a]][j] -= 1
        d1.data[vindex[b]][j] += 1
    d2 = IntMatrix.zeros(len(K.edges), len(K.triangles))
    for k, (a, b, c) in enumerate(K.triangles):
        d2.data[eindex[(b, c)]][k] += 1
        d2.data[eindex[(a, c)]][k] -= 1
        d2.data[eindex[(a, b)]][k] += 1
    return d2, d1


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple
    torsion: tuple  # per dimension, tuple of invariant factors > 1

    @property
    def is_acyclic(self) -> bool:
        return self.betti == (1, 0, 0) and not any(self.torsion)

    def describe(self) -> list:
        out = []
        for k, (b, tors) in enumerate(zip(self.betti, self.torsion)):
            parts = ([f"Z^{b}"] if b > 1 else ["Z"] if b == 1 else []) + [f"Z/{t}" for t in tors]
            out.append(f"H{k} = {' + '.join(parts) if parts else '0'}")
        return out


def homology(K: FlagComplex2) -> HomologyResult:
    """H0, H1, H2 of ``K`` with integer coefficients."""
    d2, d1 = boundary_matrices(K)
    f1 = invariant_factors(d1)
    f2 = invariant_factors(d2)
    nv, ne, nt = len(K.vertices), len(K.edges), len(K.triangles)
    r1, r2 = len(f1), len(f2)
    betti = (nv - r1, ne - r1 - r2, nt - r2)
    torsion = (tuple(x for x in f1 if x > 1), tuple(x for x in f2 if x > 1), ())
    return HomologyResult(betti, torsion)
