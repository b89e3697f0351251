import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import CayleyBall, Piling
from flagcat.complex import ComplexError, FlagComplex2, Graph
from flagcat.fixtures import fixture
from flagcat.raag import (
    KernelWord,
    RaagWord,
    WordError,
    bfs_tree,
    distortion_table,
    equal,
    free_reduce,
    geodesic_length,
    inverse_letters,
    kernel_membership,
    kernel_rewrite,
    parse_letters,
    path4,
    presentation,
    reduce,
    reduce_random,
    relator_word,
    substitute_free,
    w_free,
    w_written,
)


def W(text, G=None):
    return RaagWord.parse(text, G if G is not None else path4())


def pentagon_graph():
    return Graph.from_edges([("u1", "u2"), ("u2", "u3"), ("u3", "u4"), ("u4", "u5"), ("u5", "u1")])


def random_letters(rng, nodes, max_len):
    n = int(rng.integers(0, max_len + 1))
    return tuple((nodes[int(rng.integers(len(nodes)))], 1 if rng.random() < 0.5 else -1) for _ in range(n))


def test_parse_and_format():
    assert parse_letters("u2^-1 u1 u3^2") == (("u2", -1), ("u1", 1), ("u3", 1), ("u3", 1))
    assert str(W("u2^-1 u1")) == "u2^-1 u1"
    assert str(W("")) == "1"
    with pytest.raises(WordError):
        parse_letters("u1^x")
    with pytest.raises(WordError):
        W("u9")


def test_reduce_examples():
    assert len(reduce(W("u1 u2 u1^-1 u2^-1"))) == 0
    assert reduce(W("u1 u3 u1^-1")).letters == W("u1 u3 u1^-1").letters
    assert geodesic_length(W("u1 u3 u1^-1")) == 3


def test_equal_examples():
    assert equal(W("u1 u2"), W("u2 u1"))
    assert not equal(W("u1 u3"), W("u3 u1"))
    with pytest.raises(WordError):
        equal(W("u1"), W("u1", pentagon_graph()))


def test_kernel_membership():
    assert kernel_membership(W("u1^-1 u2"))
    assert not kernel_membership(W("u1"))
    for N in range(1, 6):
        assert kernel_membership(RaagWord(substitute_free(w_free(N)), path4()))


def test_written_form_is_equal_to_w_N():
    for N in range(1, 11):
        a = RaagWord(substitute_free(w_free(N)), path4())
        b = RaagWord(w_written(N), path4())
        assert equal(a, b)


def test_confluence_over_random_deletion_orders():
    rng = np.random.default_rng(2024)
    G = Graph.from_edges([("g1", "g2"), ("g2", "g3"), ("g1", "g3"), ("g3", "g4"), ("g4", "g5"), ("g5", "g6"), ("g2", "g6")])
    nodes = list(G.nodes)
    for _ in range(1000):
        w = RaagWord(random_letters(rng, nodes, 30), G)
        target = len(reduce(w))
        for _ in range(10):
            assert len(reduce_random(w, rng)) == target


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["u1", "u2", "u3", "u4"]), st.sampled_from([1, -1])), max_size=40))
def test_word_times_inverse_is_trivial(letters):
    w = RaagWord(tuple(letters), path4())
    assert len(reduce(w * w.inverse())) == 0
    r = reduce(w)
    assert len(reduce(r)) == len(r)
    assert equal(r, w)


@pytest.mark.parametrize("G", [path4(), pentagon_graph()], ids=["path4", "pentagon"])
def test_equal_matches_cayley_ball(G):
    nodes = list(G.nodes)
    ball = CayleyBall(nodes, G.edges, 6)
    rng = np.random.default_rng(17)
    words = [random_letters(rng, nodes, 6) for _ in range(150)]
    # include pairs that are equal by construction
    words += [tuple(reversed(w)) for w in words[:30]]
    elems = [ball.element(w) for w in words]
    for (w1, e1), (w2, e2) in itertools.combinations(zip(words, elems), 2):
        assert equal(RaagWord(w1, G), RaagWord(w2, G)) == (e1 == e2)
    for w, e in zip(words, elems):
        assert geodesic_length(RaagWord(w, G)) == ball.dist[e]


def test_kernel_rewrite_examples():
    K = fixture("path4")
    assert kernel_rewrite(W("u2^-1 u1"), K).letters == ((("u1", "u2"), -1),)
    kw = kernel_rewrite(W("u1 u2^-1"), K)
    assert equal(kw.substitute(K), W("u1 u2^-1"))
    with pytest.raises(WordError):
        kernel_rewrite(W("u1"), K)
    disconnected = FlagComplex2.build(edges=[("u1", "u2"), ("u3", "u4")])
    with pytest.raises((ComplexError, WordError)):
        kernel_rewrite(RaagWord(parse_letters("u1^-1 u2"), disconnected.one_skeleton()), disconnected)


def test_kernel_rewrite_round_trip():
    rng = np.random.default_rng(500)
    for name in ("path4", "k0", "pentagon"):
        K = fixture(name)
        nodes = list(K.vertices)
        G = K.one_skeleton()
        done = 0
        while done < 500:
            letters = random_letters(rng, nodes, 10)
            w = RaagWord(letters, G)
            if not kernel_membership(w):
                continue
            base = nodes[int(rng.integers(len(nodes)))]
            kw = kernel_rewrite(w, K, basepoint=base)
            assert equal(kw.substitute(K), w)
            done += 1


def test_kernel_rewrite_with_explicit_tree():
    K = fixture("k0")
    tree = bfs_tree(K.one_skeleton(), "p")
    w = W("u1^-1 u4 u2 u3^-1", K.one_skeleton())
    kw = kernel_rewrite(w, K, basepoint="p", spanning_tree=tree)
    assert equal(kw.substitute(K), w)


def test_kernel_word_normalisation():
    kw = KernelWord.from_oriented([(("b", "a"), 1), (("a", "b"), 1)])
    assert kw.letters == ()
    with pytest.raises(WordError):
        KernelWord.from_oriented([(("a", "a"), 1)])


def test_triangle_presentation_counts():
    K = fixture("k0")
    P = presentation(K, simply_connected=True)
    assert len(P.generators) == 11 and len(P.relators) == 12
    assert "attested" in P.to_text()
    with pytest.raises(ComplexError, match="simply_connected"):
        presentation(K)


def test_relators_hold_in_the_ambient_group():
    for name in ("k0", "annulus"):
        K = fixture(name)
        for mode, kwargs in (("triangle", dict(simply_connected=True)), ("cycles", dict(max_cycle=5, max_n=2))):
            for rel in presentation(K, mode=mode, **kwargs).relators:
                assert len(reduce(relator_word(rel, K))) == 0


def test_triangle_relators_give_the_commutator():
    K = fixture("triangle")
    u, v, w = K.vertices
    r1, r2 = presentation(K, simply_connected=True).relators
    # r1 r2^-1 freely reduces to [x_uv, x_vw]
    r2_inv = tuple((g, -n) for g, n in reversed(r2))
    comm = free_reduce(r1 + r2_inv)
    assert comm == (((u, v), 1), ((v, w), 1), ((u, v), -1), ((v, w), -1))
    assert len(reduce(relator_word(comm, K))) == 0


def test_cycle_mode_on_the_annulus_includes_the_boundary():
    K = fixture("annulus")
    P = presentation(K, mode="cycles", max_cycle=8, max_n=1)
    supports = {frozenset(g for g, _ in rel) for rel in P.relators}
    free = [e for e in K.edges if sum(set(e) <= set(t) for t in K.triangles) == 1]
    boundary = Graph.from_edges(free)
    for comp in _components(boundary):
        assert frozenset(e for e in free if e[0] in comp) in supports
    with pytest.raises(ComplexError):
        presentation(K, mode="cycles")
    with pytest.raises(ComplexError):
        presentation(K, mode="tori")


def _components(G):
    seen, out = set(), []
    for v in G.nodes:
        if v in seen:
            continue
        comp, stack = set(), [v]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(G.neighbours(x))
        seen |= comp
        out.append(comp)
    return out


def test_distortion_table():
    rows = distortion_table(20)
    for r in rows:
        assert r.free_length == 2 * (r.N**2 + r.N)
        assert r.written_length == 6 * r.N
        assert r.geodesic_length <= 6 * r.N
        assert r.ratio >= (r.N + 1) / 3
    assert (rows[0].free_length, rows[0].written_length) == (4, 6)
    assert (rows[4].free_length, rows[4].written_length) == (60, 30)
    with pytest.raises(WordError):
        distortion_table(0)


def test_distortion_geodesics_against_oracles():
    G = path4()
    ball = CayleyBall(list(G.nodes), G.edges, 6)
    piling = Piling(list(G.nodes), G.edges)
    assert ball.word_length(w_written(1)) == distortion_table(1)[0].geodesic_length
    for r in distortion_table(20):
        letters = substitute_free(free_reduce(w_free(r.N)))
        assert Piling.length(piling.of(letters)) == r.geodesic_length


def test_inverse_letters():
    letters = parse_letters("u1 u2^-1 u3")
    assert inverse_letters(letters) == parse_letters("u3^-1 u2 u1^-1")
