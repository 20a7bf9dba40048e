import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg import words as W
from steinberg.matrices import unipotent
from steinberg.rings import Elem, FGIdeal, make_ring, split_data
from steinberg.roots import build_system
from steinberg.words import (
    SemidirectElement,
    StWord,
    WordError,
    coefficient_map,
    phi,
    semidirect_commutator,
    semidirect_commutator_direct,
    simplify,
    transpose_anti,
    x_ij,
    z_generator,
)

A3 = build_system("A3")
Z6 = make_ring("z/6")


def rand_word(rng, length=8, ring=Z6, system=A3):
    pool = list(ring.payloads())
    letters = [
        (rng.randrange(len(system.roots)), Elem(ring, pool[rng.randrange(len(pool))]))
        for _ in range(length)
    ]
    return StWord(system, ring, letters)


def test_inverse_is_reversal_with_negation():
    w = x_ij(A3, Z6, 0, 1, 2) * x_ij(A3, Z6, 1, 2, 3)
    inv = w.inverse()
    assert inv.letters[0][1].payload == 3
    assert phi(w * inv).is_identity()


def test_commutator_of_identity_cancels():
    w = x_ij(A3, Z6, 0, 1, 2)
    e = W.empty(A3, Z6)
    assert simplify(W.commutator(w, e)).is_empty()


def test_same_root_additivity_matrix():
    for r in range(6):
        for s in range(6):
            lhs = phi(x_ij(A3, Z6, 0, 1, r) * x_ij(A3, Z6, 0, 1, s))
            assert lhs == phi(x_ij(A3, Z6, 0, 1, (r + s) % 6))


def test_chained_commutator_matrix():
    for r in range(6):
        for s in range(6):
            c = phi(W.commutator(x_ij(A3, Z6, 0, 1, r), x_ij(A3, Z6, 1, 2, s)))
            assert c == phi(x_ij(A3, Z6, 0, 2, (r * s) % 6))


def test_simplify_merges_and_cancels():
    w = x_ij(A3, Z6, 0, 1, 2) * x_ij(A3, Z6, 0, 1, 4)
    assert simplify(w).is_empty()
    w2 = x_ij(A3, Z6, 0, 1, 2) * x_ij(A3, Z6, 0, 1, 3)
    assert simplify(w2) == x_ij(A3, Z6, 0, 1, 5)


def test_simplify_preserves_phi_and_inverses_cancel():
    rng = random.Random(11)
    for _ in range(1000):
        w = rand_word(rng)
        assert phi(simplify(w)) == phi(w)
        assert phi(w * w.inverse()).is_identity()


def test_phi_is_homomorphism_sampled():
    rng = random.Random(13)
    for _ in range(300):
        a = rand_word(rng, 5)
        b = rand_word(rng, 5)
        assert phi(a * b) == phi(a) * phi(b)


def test_transpose_anti():
    w = x_ij(A3, Z6, 0, 1, 4)
    t = transpose_anti(w)
    assert phi(t) == phi(w).transpose()
    rng = random.Random(17)
    for _ in range(500):
        a = rand_word(rng, 4)
        b = rand_word(rng, 4)
        # anti-homomorphism: the transpose of a product reverses factors
        assert transpose_anti(a * b) == transpose_anti(b) * transpose_anti(a)
        assert phi(transpose_anti(a * b)) == (phi(a) * phi(b)).transpose()
        assert transpose_anti(transpose_anti(a)) == a


def test_transpose_anti_non_a_rejected():
    d4 = build_system("D4")
    z4 = make_ring("z/4")
    w = StWord(d4, z4, [(0, z4.el(1))])
    with pytest.raises(WordError):
        transpose_anti(w)


def test_mismatched_words_rejected():
    f2 = make_ring("f2")
    with pytest.raises(WordError):
        x_ij(A3, Z6, 0, 1, 1) * x_ij(A3, f2, 0, 1, 1)


def test_z_generator():
    alpha = A3.roots[0]
    z = z_generator(A3, Z6, alpha, 2, 3)
    assert len(z.letters) == 3
    expected = (
        unipotent(A3, -alpha, Z6.el(3))
        * unipotent(A3, alpha, Z6.el(2))
        * unipotent(A3, -alpha, Z6.el(-3))
    )
    assert phi(z) == expected
    assert simplify(z_generator(A3, Z6, alpha, 2, 0)) == W.generator(A3, Z6, alpha, 2)


def test_z_generator_dies_in_quotient():
    # with s in the ideal, the relative generator maps to 1 mod I
    f2e = make_ring("quo(poly(f2,X),[0,0,1])")
    sd = split_data(f2e, FGIdeal(f2e, [f2e.gen()]))
    for alpha in A3.roots[:4]:
        for r_p in f2e.payloads():
            z = z_generator(A3, f2e, alpha, f2e.gen(), Elem(f2e, r_p))
            reduced = coefficient_map(sd.pi, A3, z)
            assert phi(reduced).is_identity()


def _split_fixture():
    f2e = make_ring("quo(poly(f2,X),[0,0,1])")
    sd = split_data(f2e, FGIdeal(f2e, [f2e.gen()]))
    return f2e, sd


def test_semidirect_multiplication_and_inverse():
    f2e, sd = _split_fixture()
    rng = random.Random(19)
    for _ in range(100):
        k1 = rand_word(rng, 3, ring=f2e)
        q1 = rand_word(rng, 3, ring=sd.quotient)
        x = SemidirectElement(sd, A3, k1, q1)
        ident = W.semidirect_identity(sd, A3)
        assert (x * x.inverse()).matrix_equal(ident)
        assert (x.inverse() * x).matrix_equal(ident)


def test_semidirect_commutator_formula_matches_direct():
    f2e, sd = _split_fixture()
    rng = random.Random(23)
    for _ in range(200):
        x = SemidirectElement(sd, A3, rand_word(rng, 3, ring=f2e), rand_word(rng, 3, ring=sd.quotient))
        y = SemidirectElement(sd, A3, rand_word(rng, 3, ring=f2e), rand_word(rng, 3, ring=sd.quotient))
        assert semidirect_commutator(x, y).matrix_equal(
            semidirect_commutator_direct(x, y)
        )


def test_word_serialization_roundtrip():
    w = x_ij(A3, Z6, 0, 1, 2) * x_ij(A3, Z6, 2, 3, 5)
    lit = w.to_literal()
    rebuilt = W.word(A3, Z6, [(idx, c) for idx, c in lit])
    assert rebuilt == w


@given(st.lists(st.tuples(st.integers(0, 11), st.integers(0, 5)), max_size=10))
@settings(max_examples=80, deadline=None)
def test_simplify_is_idempotent(letters):
    w = StWord(A3, Z6, [(i, Z6.el(c)) for i, c in letters])
    s = simplify(w)
    assert simplify(s) == s
    assert phi(s) == phi(w)
