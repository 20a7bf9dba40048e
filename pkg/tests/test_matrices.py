import random

import pytest

from steinberg.matrices import (
    MatrixError,
    basis_vector,
    contragredient,
    elementary_a,
    elementary_orbit_witness,
    gram_hyperbolic,
    identity_matrix,
    inverse,
    is_unimodular,
    matrix_group_order,
    transvection,
    unipotent,
    vector,
)
from steinberg.rings import make_ring
from steinberg.roots import Root, RootSystemError, build_system
from steinberg.words import StWord, from_ij_letters, phi


def test_unipotent_a_family():
    a3 = build_system("A3")
    z6 = make_ring("z/6")
    root = Root((1, -1, 0, 0))
    m = unipotent(a3, root, z6.el(5))
    assert m.entry(0, 1).payload == 5
    assert m.entry(1, 0).is_zero()
    assert m.entry(0, 0).is_one()


def test_unipotent_e_unsupported():
    e6 = build_system("E6")
    f2 = make_ring("f2")
    with pytest.raises(RootSystemError):
        unipotent(e6, e6.roots[0], f2.one())


def test_d4_unipotents_preserve_gram_exhaustive():
    d4 = build_system("D4")
    z4 = make_ring("z/4")
    J = gram_hyperbolic(z4, 4)
    for root in d4.roots:
        for x in range(4):
            G = unipotent(d4, root, z4.el(x))
            assert G.transpose() * J * G == J


def test_transvection_laws_random():
    z6 = make_ring("z/6")
    rng = random.Random(3)
    done = 0
    while done < 200:
        u = vector(z6, [rng.randrange(6) for _ in range(4)])
        v = vector(z6, [rng.randrange(6) for _ in range(4)])
        w = vector(z6, [rng.randrange(6) for _ in range(4)])
        if not (u.dot(v).is_zero() and u.dot(w).is_zero()):
            continue
        done += 1
        assert transvection(u, v) * transvection(u, w) == transvection(u, v + w)
        assert (transvection(u, v) * transvection(u, -v)).is_identity()
        # the contragredient law t(u,v)* = t(v,-u)
        assert contragredient(transvection(u, v)) == transvection(v, -u)


def test_transvection_basis_case():
    z6 = make_ring("z/6")
    u = basis_vector(z6, 4, 0)
    v = basis_vector(z6, 4, 1).scale(z6.el(4))
    assert transvection(u, v) == elementary_a(z6, 4, 0, 1, 4)


def test_contragredient_identity_and_elementary():
    z6 = make_ring("z/6")
    ident = identity_matrix(z6, 4)
    assert contragredient(ident) == ident
    m = elementary_a(z6, 4, 0, 1, 5)
    assert contragredient(m) == elementary_a(z6, 4, 1, 0, 1)


def test_contragredient_needs_factors():
    z6 = make_ring("z/6")
    from steinberg.matrices import RMatrix

    bare = RMatrix(z6, 2, {(0, 0): 1, (1, 1): 1})
    with pytest.raises(MatrixError):
        contragredient(bare)


def test_inverse_by_factor_reversal():
    d4 = build_system("D4")
    z4 = make_ring("z/4")
    rng = random.Random(5)
    for _ in range(50):
        letters = [(rng.randrange(24), z4.el(rng.randrange(4))) for _ in range(4)]
        m = phi(StWord(d4, z4, letters))
        assert (m * inverse(m)).is_identity()
        assert (contragredient(m).transpose() * m).is_identity()


def test_is_unimodular():
    z6 = make_ring("z/6")
    assert is_unimodular(basis_vector(z6, 4, 0)) is not None
    w = is_unimodular(vector(z6, [2, 3, 0, 0]))
    assert w is not None and w.dot(vector(z6, [2, 3, 0, 0])).is_one()
    assert is_unimodular(vector(z6, [2, 4, 0, 0])) is None


def test_orbit_witness_finite():
    z6 = make_ring("z/6")
    a3 = build_system("A3")
    e1 = basis_vector(z6, 4, 0)
    assert elementary_orbit_witness(e1) == []
    u = basis_vector(z6, 4, 1)
    letters = elementary_orbit_witness(u)
    assert phi(from_ij_letters(a3, z6, letters)) * e1 == u
    assert elementary_orbit_witness(vector(z6, [2, 4, 0, 0])) is None


def test_orbit_witness_integers():
    zz = make_ring("z")
    a3 = build_system("A3")
    rng = random.Random(7)
    import math

    for _ in range(150):
        u = vector(zz, [rng.randrange(-9, 10) for _ in range(4)])
        g = 0
        for x in u.entries:
            g = math.gcd(g, abs(x.payload))
        letters = elementary_orbit_witness(u)
        if g == 1:
            assert letters is not None
            assert phi(from_ij_letters(a3, zz, letters)) * basis_vector(zz, 4, 0) == u
        else:
            assert letters is None


def test_matrix_group_orders():
    f2 = make_ring("f2")
    a2 = build_system("A2")
    gens = [unipotent(a2, r, f2.one()) for r in a2.roots]
    assert matrix_group_order(gens) == 168
    f3 = make_ring("f3")
    gens3 = [unipotent(a2, r, f3.el(s)) for r in a2.roots for s in (1, 2)]
    assert matrix_group_order(gens3) == 5616  # |SL(3,3)|
