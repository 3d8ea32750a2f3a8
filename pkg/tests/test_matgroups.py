from fractions import Fraction

import pytest

from ampletori import linalg
from ampletori.etale import EtaleAlgebra
from ampletori.matgroups import (
    AutomorphismDatum,
    GeneratorSet,
    automorphism_matrix,
    block_embed,
    elementary_matrix,
    enumerate_automorphisms,
    group_sanity,
    identity_automorphism,
    is_unipotent,
    verify_normalization,
    verify_semidirect,
)
from ampletori.polynomials import QPoly

CUBIC = EtaleAlgebra([QPoly([-1, 1, 0, 1])])
GAUSS = EtaleAlgebra([QPoly([1, 0, 1])])
QUARTIC = EtaleAlgebra([QPoly([1, -16, 20, -8, 1])])

G51 = linalg.matrix([[0, 0, 1], [1, 0, -1], [0, 1, 0]])
I_MAT = linalg.matrix([[0, -1], [1, 0]])
G54 = linalg.matrix([[Fraction(4, 5), Fraction(-3, 5)], [Fraction(3, 5), Fraction(4, 5)]])


def test_automorphism_matrix_conjugation():
    conj = AutomorphismDatum(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(-1))))
    m = automorphism_matrix(GAUSS, conj)
    assert m == linalg.matrix([[1, 0], [0, -1]])


def test_automorphism_matrix_identity():
    m = automorphism_matrix(GAUSS, identity_automorphism(GAUSS))
    assert m == linalg.identity(2)


def test_automorphism_rejects_non_hom():
    bad = AutomorphismDatum(((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1))))
    with pytest.raises(ValueError):
        automorphism_matrix(GAUSS, bad)


def test_enumerate_automorphisms():
    assert len(enumerate_automorphisms(GAUSS)) == 2
    assert len(enumerate_automorphisms(CUBIC)) == 1  # trivial automorphism group
    quartic_autos = enumerate_automorphisms(QUARTIC)
    assert len(quartic_autos) == 4  # V4: the field is Galois over Q


def test_automorphism_functoriality_v4():
    # pi is functorial: matrix of a composition is the product of matrices
    autos = enumerate_automorphisms(QUARTIC)
    mats = [automorphism_matrix(QUARTIC, s) for s in autos]
    images = {s.images: m for s, m in zip(autos, mats)}
    for s1, m1 in zip(autos, mats):
        for s2, m2 in zip(autos, mats):
            composed = tuple(
                tuple(linalg.mat_vec(m1, img)) for img in s2.images
            )
            assert composed in images
            assert images[composed] == linalg.mat_mul(m1, m2)


def test_verify_normalization_examples():
    ok, sigma = verify_normalization(GAUSS, linalg.matrix([[1, 0], [0, -1]]))
    assert ok
    ok, sigma = verify_normalization(GAUSS, I_MAT)
    assert ok and sigma.images == identity_automorphism(GAUSS).images  # inner
    ok, witness = verify_normalization(GAUSS, linalg.matrix([[1, 1], [0, 1]]))
    assert not ok and witness == 2


def test_block_embed():
    assert block_embed(G51, 4) == linalg.matrix(
        [[0, 0, 1, 0], [1, 0, -1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    )
    assert block_embed(linalg.identity(2), 3) == linalg.identity(3)
    d = linalg.matrix([[2, 0], [0, Fraction(1, 2)]])
    assert block_embed(d, 3) == linalg.matrix([[2, 0, 0], [0, Fraction(1, 2), 0], [0, 0, 1]])


def test_elementary_matrix():
    e14 = elementary_matrix(4, 1, 4)
    assert e14[0][3] == 1 and linalg.mat_det(e14) == 1
    with pytest.raises(ValueError):
        elementary_matrix(3, 2, 2)
    a = elementary_matrix(2, 1, 2)
    b = elementary_matrix(2, 2, 1)
    assert linalg.mat_trace(linalg.mat_mul(a, b)) == 3
    e24 = elementary_matrix(4, 2, 4)
    assert linalg.mat_mul(e14, e24) == linalg.mat_mul(e24, e14)  # commuting root groups


def test_verify_semidirect_examples():
    ghat = block_embed(G51, 4)
    minus = linalg.mat_scale(linalg.identity(4), -1)
    unis = [elementary_matrix(4, i, 4) for i in (1, 2, 3)]
    ok, witness = verify_semidirect([ghat, minus], unis)
    assert ok and witness is None
    # conjugate of E_{1,2} by pi(i) leaves the pattern
    ok, witness = verify_semidirect([I_MAT], [elementary_matrix(2, 1, 2)])
    assert not ok and witness == (0, 0)
    ok, _ = verify_semidirect([linalg.identity(2)], [elementary_matrix(2, 1, 2)])
    assert ok


def test_conjugated_elementary_column_formula():
    # conjugating E_{i,4} by diag(g,1) gives I + (g e_i) e_4^T, exactly
    ghat = block_embed(G51, 4)
    ghat_inv = linalg.mat_inv(ghat)
    for i in range(3):
        conj = linalg.mat_mul(
            linalg.mat_mul(ghat, elementary_matrix(4, i + 1, 4)), ghat_inv
        )
        expected = [list(row) for row in linalg.identity(4)]
        for r in range(3):
            expected[r][3] = G51[r][i]
        assert conj == tuple(tuple(row) for row in expected)
        assert is_unipotent(conj)


def test_group_sanity_example_51():
    gens = GeneratorSet(n=3, ring_primes=(), ambient="SL")
    gens.torus_gens = [G51]
    report = group_sanity(gens, CUBIC)
    assert report["all_pass"]["pass"]


def test_group_sanity_example_54():
    gens = GeneratorSet(n=2, ring_primes=(5,), ambient="SL")
    gens.torus_gens = [G54]
    gens.torsion_gens = [I_MAT]
    gens.provenance["torsion:0"] = {"order": 4}
    report = group_sanity(gens, GAUSS)
    assert report["all_pass"]["pass"]
    assert gens.ring_str() == "Z[1/5]"


def test_group_sanity_det_two_fails():
    gens = GeneratorSet(n=2, ring_primes=(), ambient="SL")
    gens.torus_gens = [linalg.matrix([[2, 0], [0, 1]])]
    report = group_sanity(gens)
    assert not report["determinants"]["pass"]
    assert not report["all_pass"]["pass"]


def test_group_sanity_catches_noncommuting():
    gens = GeneratorSet(n=2, ring_primes=(), ambient="SL")
    gens.torus_gens = [I_MAT, linalg.matrix([[1, 1], [0, 1]])]
    report = group_sanity(gens)
    assert not report["torus_commutes"]["pass"]


def test_normalization_holds_for_torus_elements():
    # pi(u) normalizes with the identity automorphism for every unit u
    for e, u in [(GAUSS, (Fraction(0), Fraction(1))), (CUBIC, (Fraction(0), Fraction(1), Fraction(0)))]:
        ok, sigma = verify_normalization(e, e.regular_rep(u))
        assert ok and sigma.images == identity_automorphism(e).images
