import json

import pytest

from steinberg.fp import (
    CosetTable,
    Presentation,
    WordTester,
    amalgam_presentation,
    enumerate_steinberg,
    eval_word,
    k2_compute,
    orbit_with_witnesses,
    relative_subgroup_index,
    star_presentations,
    steinberg_presentation,
    todd_coxeter,
)
from steinberg.matrices import Inconclusive, basis_vector
from steinberg.rings import FGIdeal, make_ring, split_data
from steinberg.roots import build_system
from steinberg.words import phi, x_ij

F2 = make_ring("f2")
A2 = build_system("A2")
A3 = build_system("A3")


def test_cyclic_three():
    t = todd_coxeter(Presentation(ngens=1, relators=((0, 0, 0),)))
    assert t.n == 3


def test_symmetric_three():
    t = todd_coxeter(Presentation(ngens=2, relators=((0, 0), (2, 2), (0, 2, 0, 2, 0, 2))))
    assert t.n == 6


def test_quaternion_eight():
    t = todd_coxeter(
        Presentation(ngens=2, relators=((0, 0, 0, 0), (0, 0, 3, 3), (3, 0, 2, 0)))
    )
    assert t.n == 8


def test_binary_icosahedral_central_extension():
    # order 120 with center Z/2: a collapse-prone case for coincidence bugs
    t = todd_coxeter(
        Presentation(
            ngens=2, relators=((0, 0, 0, 3, 3, 3, 3, 3), (0, 0, 0, 1, 3, 1, 3))
        )
    )
    assert t.n == 120


def test_subgroup_index():
    p = Presentation(ngens=2, relators=((0, 0), (2, 2), (0, 2, 0, 2, 0, 2)))
    t = todd_coxeter(p, subgroup_words=((0,),))
    assert t.n == 3


def test_cap_is_inconclusive():
    p = Presentation(ngens=2, relators=((0, 0), (2, 2), (0, 2, 0, 2, 0, 2)))
    with pytest.raises(Inconclusive):
        todd_coxeter(p, max_cosets=4)


def test_lookahead_path():
    p = Presentation(ngens=2, relators=((0, 0), (2, 2), (0, 2, 0, 2, 0, 2)))
    t = todd_coxeter(p, max_cosets=100, alloc_factor=1)
    assert t.n == 6


def test_table_soundness_and_determinism():
    sp = steinberg_presentation(A2, F2)
    t1 = todd_coxeter(sp.presentation)
    t2 = todd_coxeter(sp.presentation)
    assert t1.rows == t2.rows
    # every column is a bijection and every relator fixes every coset
    n = t1.n
    for x in range(t1.ncols):
        col = [t1.rows[c][x] for c in range(n)]
        assert sorted(col) == list(range(n))
    for rel in sp.presentation.relators:
        perm = eval_word(t1, rel)
        assert perm == tuple(range(n))


def test_steinberg_presentation_counts():
    sp = steinberg_presentation(A2, F2)
    assert sp.presentation.ngens == 6
    f3 = make_ring("f3")
    sp3 = steinberg_presentation(A3, f3)
    assert sp3.presentation.ngens == 24
    # closed-form relator count for (A2, f2): 6 additivity + 24 commutators
    assert len(sp.presentation.relators) == 30


def test_st3_f2_order_and_k2():
    rep = k2_compute(A2, F2)
    assert rep.st_order == 168
    assert rep.image_order == 168 == rep.bfs_image_order
    assert rep.kernel_order == 1
    assert rep.central
    assert rep.factorization_ok()


def test_k2_nontrivial_kernel_z4():
    # the known Z/2 kernel over z/4: the enumerator must not collapse it
    z4 = make_ring("z/4")
    rep = k2_compute(A2, z4, cross_check=False)
    assert rep.st_order == 86016
    assert rep.kernel_order == 2
    assert rep.image_order == 43008
    assert rep.central


def test_zero_ring_gives_trivial_group():
    z1 = make_ring("z/1")
    sp = steinberg_presentation(A2, z1)
    assert sp.presentation.ngens == 0
    t = todd_coxeter(sp.presentation)
    assert t.n == 1


def test_word_letters_and_additivity_merge():
    sp = steinberg_presentation(A2, F2)
    tbl = enumerate_steinberg(sp)
    w1 = x_ij(A2, F2, 0, 1, 1) * x_ij(A2, F2, 0, 1, 1)
    assert tbl.coset_of(sp.word_letters(w1)) == 0
    w2 = x_ij(A2, F2, 0, 1, 1) * x_ij(A2, F2, 1, 2, 1)
    w3 = x_ij(A2, F2, 1, 2, 1) * x_ij(A2, F2, 0, 1, 1)
    assert tbl.coset_of(sp.word_letters(w2)) != tbl.coset_of(sp.word_letters(w3))


def test_word_tester_tiers():
    from steinberg.words import commutator

    tester = WordTester(A3, F2)
    a = commutator(x_ij(A3, F2, 0, 1, 1), x_ij(A3, F2, 1, 2, 1))
    b = x_ij(A3, F2, 0, 2, 1)
    verdict, tier = tester.equal(a, b)
    assert verdict and tier == "exact"
    tester_m = WordTester(A3, F2, exact=False)
    verdict, tier = tester_m.equal(a, b)
    assert verdict and tier == "matrix"
    # syntactic equality short-circuits before the matrix tier
    c = x_ij(A3, F2, 0, 1, 1) * x_ij(A3, F2, 2, 3, 1) * x_ij(A3, F2, 2, 3, 1)
    verdict, tier = tester_m.equal(x_ij(A3, F2, 0, 1, 1), c)
    assert verdict and tier == "syntactic"


def test_relative_generation_a2():
    f2e = make_ring("quo(poly(f2,X),[0,0,1])")
    sd = split_data(f2e, FGIdeal(f2e, [f2e.gen()]))
    rep = relative_subgroup_index(A2, f2e, sd)
    assert rep.index == rep.quotient_order == 168


def test_trivial_ideal_gives_full_order():
    # I = 0: the z-subgroup is trivial and the index is the group order
    f2e = make_ring("quo(poly(f2,X),[0,0,1])")
    zero_ideal = FGIdeal(f2e, [])
    sd = split_data(f2e, zero_ideal)
    rep = relative_subgroup_index(A2, f2e, sd)
    sp = steinberg_presentation(A2, f2e)
    full = enumerate_steinberg(sp)
    assert rep.index == full.n


def test_orbit_with_witnesses():
    orbit = orbit_with_witnesses(F2, 4)
    assert len(orbit) == 15
    for key, ov in orbit.items():
        assert (phi(ov.witness) * basis_vector(F2, 4, 0)).key() == key


def test_star_presentation_domains():
    f2e = make_ring("quo(poly(f2,X),[0,0,1])")
    star = star_presentations(4, f2e, FGIdeal(f2e, [f2e.gen()]))
    assert len(star.orbit) == 240
    assert len(star.f_symbols) == 1920
    assert len(star.s_symbols) == 1920
    for sym in star.f_symbols[:20]:
        assert sym.u.vec.dot(sym.v).is_zero()


def test_amalgam_structure():
    f2e = make_ring("quo(poly(f2,X),[0,0,1])")
    ideal = FGIdeal(f2e, [f2e.gen()])
    d4 = build_system("D4")
    am = amalgam_presentation(d4, f2e, ideal)
    assert len(am.subsystems) == 12
    assert all(am.root_coverage[ri] for ri in range(24))
    # a single-subsystem amalgam has no gluing relators
    am3 = amalgam_presentation(A3, f2e, ideal)
    assert len(am3.subsystems) == 1
    assert am3.gluing_relators == []


def test_table_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("STEINBERG_CACHE", str(tmp_path))
    from steinberg import fp

    sp = steinberg_presentation(A2, F2)
    key_memo = dict(fp._MEMO)
    fp._MEMO.clear()
    t1 = enumerate_steinberg(sp)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    fp._MEMO.clear()
    t2 = enumerate_steinberg(sp)
    assert t1.rows == t2.rows
    fp._MEMO.clear()
    fp._MEMO.update(key_memo)


def test_coset_table_serialization():
    t = todd_coxeter(Presentation(ngens=1, relators=((0, 0, 0),)))
    blob = json.dumps(t.to_json())
    t2 = CosetTable.from_json(json.loads(blob))
    assert t2.rows == t.rows
