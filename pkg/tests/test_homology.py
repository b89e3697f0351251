import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import invariant_factors_by_minors
from flagcat.complex import FlagComplex2
from flagcat.fixtures import fixture
from flagcat.homology import (
    IntMatrix,
    _normalise_diagonal,
    boundary_matrices,
    homology,
    invariant_factors,
    smith_normal_form,
)


def test_known_homology():
    assert homology(fixture("triangle")).is_acyclic
    assert homology(fixture("two_triangles")).is_acyclic
    assert homology(fixture("k0")).is_acyclic
    torus = homology(fixture("torus"))
    assert torus.betti == (1, 2, 1) and torus.torsion == ((), (), ())
    rp2 = homology(fixture("rp2"))
    assert rp2.betti == (1, 0, 0) and rp2.torsion == ((), (2,), ())
    assert homology(fixture("pentagon")).betti == (1, 1, 0)
    assert homology(fixture("annulus")).betti == (1, 1, 0)


def test_dunce_hat_and_spine_are_acyclic():
    assert homology(fixture("dunce_hat_flag")).is_acyclic
    assert homology(fixture("poincare_spine")).is_acyclic


def test_describe():
    assert homology(fixture("rp2")).describe() == ["H0 = Z", "H1 = Z/2", "H2 = 0"]
    assert homology(fixture("torus")).describe() == ["H0 = Z", "H1 = Z^2", "H2 = Z"]


def test_boundary_squares_to_zero():
    for name in ("torus", "rp2", "k0", "dunce_hat_flag"):
        d2, d1 = boundary_matrices(fixture(name))
        assert (d1 @ d2).is_zero()


def test_snf_example():
    A = IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    D, U, V = smith_normal_form(A)
    assert D.diagonal() == [2, 6, 12]
    assert U @ A @ V == D


def test_determinant():
    assert IntMatrix([[2, 0], [0, 3]]).det() == 6
    assert IntMatrix([[0, 1], [1, 0]]).det() == -1
    assert IntMatrix([[1, 2], [2, 4]]).det() == 0


def test_normalise_diagonal():
    assert _normalise_diagonal([4, 6]) == [2, 12]
    assert _normalise_diagonal([0, 3, 0, 2]) == [1, 6]


matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(rows):
    A = IntMatrix(rows)
    D, U, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = D.diagonal()
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert D[i, j] == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[: len(nz)] == nz  # zeros trail
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == invariant_factors_by_minors(rows)
    assert invariant_factors(A) == nz


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_euler_characteristic_matches_betti(seed):
    rng = np.random.default_rng(seed)
    names = [f"z{i}" for i in range(7)]
    tris = [tuple(rng.choice(names, 3, replace=False)) for _ in range(int(rng.integers(1, 8)))]
    K = FlagComplex2.build(triangles=tris)
    H = homology(K)
    b0, b1, b2 = H.betti
    assert b0 - b1 + b2 == K.euler_characteristic()
