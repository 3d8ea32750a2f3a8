from fractions import Fraction

import pytest

from ampletori.errors import BudgetExceededError, UnsupportedError
from ampletori.etale import EtaleAlgebra
from ampletori.places import signature
from ampletori.polynomials import QPoly
from ampletori.units import (
    DependenceWitness,
    PrimePlaces,
    UnitSystem,
    assemble_unit_system,
    build_log_embedding,
    canonical_unit,
    dirichlet_rank,
    find_certified_minor,
    matrix_is_s_integral,
    norm_one_subgroup,
    s_unit_rank,
    search_units,
    torsion_units,
    verify_unit_system,
)

from oracles import oracle_norm_five_box

CUBIC = EtaleAlgebra([QPoly([-1, 1, 0, 1])])
GAUSS = EtaleAlgebra([QPoly([1, 0, 1])])
SQRT2 = EtaleAlgebra([QPoly([-2, 0, 1])])
QUARTIC = EtaleAlgebra([QPoly([1, -16, 20, -8, 1])])


def test_dirichlet_rank_examples():
    assert dirichlet_rank(signature(CUBIC.factors[0])) == 1
    assert dirichlet_rank(signature(QUARTIC.factors[0])) == 3
    assert dirichlet_rank(signature(GAUSS.factors[0]), (2,)) == 2
    assert s_unit_rank(GAUSS, (5,)) == 2


def test_search_units_gaussian():
    found = search_units(GAUSS, 2, (), {Fraction(1), Fraction(-1)})
    assert set(found) == {
        (Fraction(1), Fraction(0)),
        (Fraction(-1), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(0), Fraction(-1)),
    }


def test_search_units_norm_five_matches_enumeration_oracle():
    found = search_units(GAUSS, 3, (), {Fraction(5)})
    assert set(found) == oracle_norm_five_box(3)
    assert len(found) == 8


def test_search_units_cubic_contains_generator():
    found = search_units(CUBIC, 1, (), {Fraction(1), Fraction(-1)})
    assert (Fraction(0), Fraction(1), Fraction(0)) in found


def test_search_units_budget():
    with pytest.raises(BudgetExceededError):
        search_units(QUARTIC, 50, (), {Fraction(1)}, budget=10**4)


def test_search_units_symmetry():
    found = set(search_units(GAUSS, 3, (), {Fraction(1), Fraction(-1), Fraction(5), Fraction(-5)}))
    for u in found:
        assert tuple(-c for c in u) in found  # negation symmetry
        # closed under the torsion action for the symmetric box
        assert tuple(GAUSS.mul(u, GAUSS.generator(0))) in found


def test_torsion_units():
    assert torsion_units(GAUSS) == ((Fraction(0), Fraction(1)), 4)
    assert torsion_units(CUBIC) == ((Fraction(-1), Fraction(0), Fraction(0)), 2)
    assert torsion_units(QUARTIC)[1] == 2
    zeta3 = EtaleAlgebra([QPoly([1, 1, 1])])
    gen, order = torsion_units(zeta3)
    assert order == 6
    zeta5 = EtaleAlgebra([QPoly([1, 1, 1, 1, 1])])
    gen, order = torsion_units(zeta5)
    assert order == 10  # mu_10 = <-zeta_5> in Z[zeta_5]
    with pytest.raises(UnsupportedError):
        torsion_units(EtaleAlgebra([QPoly([1, 0, 1]), QPoly([-2, 0, 1])]))


def test_verify_certifies_paper_systems():
    sys1 = UnitSystem(
        CUBIC, (Fraction(-1), Fraction(0), Fraction(0)), 2,
        [(Fraction(0), Fraction(1), Fraction(0))], ()
    )
    cert = verify_unit_system(sys1)
    assert cert.rank == 1 and cert.s_integral and cert.torsion_verified
    assert cert.caveats  # fundamentality gap is always recorded

    sys4 = UnitSystem(
        GAUSS, (Fraction(0), Fraction(1)), 4,
        [(Fraction(4, 5), Fraction(3, 5))], (5,)
    )
    cert = verify_unit_system(sys4)
    assert cert.rank == 1
    assert any(col.startswith("v(5/") for col in cert.minor_columns)


def test_verify_finds_dependence_witness():
    u = (Fraction(0), Fraction(1), Fraction(0))
    u2 = CUBIC.mul(u, u)
    sysd = UnitSystem(CUBIC, (Fraction(-1), Fraction(0), Fraction(0)), 2, [u, u2], ())
    witness = verify_unit_system(sysd)
    assert isinstance(witness, DependenceWitness)
    assert any(e != 0 for e in witness.exponents)
    prod = CUBIC.one()
    for g, k in zip(sysd.free_generators, witness.exponents):
        prod = CUBIC.mul(prod, CUBIC.power(g, k))
    assert prod == CUBIC.power(sysd.torsion_generator, witness.torsion_power)


def test_verify_rejects_non_integral_generator():
    from ampletori.errors import InvalidUnitSystemError

    bad = UnitSystem(
        GAUSS, (Fraction(0), Fraction(1)), 4, [(Fraction(4, 5), Fraction(3, 5))], ()
    )
    with pytest.raises(InvalidUnitSystemError):
        verify_unit_system(bad)  # (4+3i)/5 is not integral without S = {5}
    wrong_order = UnitSystem(GAUSS, (Fraction(0), Fraction(1)), 2, [], ())
    with pytest.raises(InvalidUnitSystemError):
        verify_unit_system(wrong_order)


def test_unit_inverse_is_s_integral():
    for e, sys in [
        (CUBIC, assemble_unit_system(CUBIC, (), 3)),
        (GAUSS, assemble_unit_system(GAUSS, (5,), 3)),
    ]:
        for u in sys.free_generators:
            inv = e.inverse(u)
            assert e.mul(u, inv) == e.one()
            assert matrix_is_s_integral(e.regular_rep(u), sys.s_primes)
            assert matrix_is_s_integral(e.regular_rep(inv), sys.s_primes)


def test_prime_places_valuations():
    pp = PrimePlaces(GAUSS.factors[0], 5)
    assert pp.count == 2
    # 4+3i = i(2-i)^2 has valuations {0, 2} at the two places over 5
    coords = (Fraction(4), Fraction(3))
    vals = sorted(pp.valuation(i, coords) for i in range(2))
    assert vals == [0, 2]
    # a rational integer has valuation v_p at every place over p
    five = (Fraction(5), Fraction(0))
    assert [pp.valuation(i, five) for i in range(2)] == [1, 1]
    g = (Fraction(4, 5), Fraction(3, 5))
    assert sorted(pp.valuation(i, g) for i in range(2)) == [-1, 1]


def test_log_embedding_product_formula():
    # rows sum to an interval containing 0 for S-units (general product formula)
    sysg = assemble_unit_system(GAUSS, (5,), 3)
    emb = build_log_embedding(GAUSS, list(sysg.free_generators), (5,), 64)
    for row in emb.rows:
        total = None
        for iv in row:
            assert iv is not None
            total = iv if total is None else total + iv
        assert total.contains_zero()
    found = find_certified_minor(emb)
    assert found is not None


def test_assemble_cubic_reproduces_fundamental_unit():
    sys1 = assemble_unit_system(CUBIC, (), 3)
    assert sys1.torsion_order == 2
    assert sys1.free_generators == [(Fraction(0), Fraction(1), Fraction(0))]


def test_assemble_gauss_s_units():
    sysg = assemble_unit_system(GAUSS, (5,), 3)
    assert sysg.torsion_generator == (Fraction(0), Fraction(1))
    assert sysg.rank == 2 == s_unit_rank(GAUSS, (5,))


def test_norm_one_examples():
    # torsion of norm one stays whole for Q[i]
    sysg = UnitSystem(GAUSS, (Fraction(0), Fraction(1)), 4, [], (5,))
    n1 = norm_one_subgroup(sysg)
    assert n1.torsion_generator == (Fraction(0), Fraction(1)) and n1.torsion_order == 4

    # S-units {i, 2+i, 2-i}: free norm-one part generated by the paper's (4+3i)/5
    sysg = UnitSystem(
        GAUSS, (Fraction(0), Fraction(1)), 4,
        [(Fraction(2), Fraction(1)), (Fraction(2), Fraction(-1))], (5,)
    )
    n1 = norm_one_subgroup(sysg)
    assert n1.free_generators == [(Fraction(4, 5), Fraction(3, 5))]

    # real quadratic: 1+sqrt2 has norm -1 and no torsion of norm -1 exists,
    # so the norm-one generator is the square (1+sqrt2)^2 = 3+2*sqrt2
    syss = UnitSystem(
        SQRT2, (Fraction(-1), Fraction(0)), 2, [(Fraction(1), Fraction(1))], ()
    )
    n1 = norm_one_subgroup(syss)
    assert n1.free_generators == [(Fraction(3), Fraction(2))]
    # the cubic -1 has norm -1: norm-one part of torsion is trivial there
    sysc = UnitSystem(
        CUBIC, (Fraction(-1), Fraction(0), Fraction(0)), 2,
        [(Fraction(0), Fraction(1), Fraction(0))], ()
    )
    n1c = norm_one_subgroup(sysc)
    assert n1c.torsion_order == 1
    assert n1c.free_generators == [(Fraction(0), Fraction(1), Fraction(0))]


def test_norm_one_output_has_norm_one_and_snf_index():
    sysg = assemble_unit_system(GAUSS, (5,), 3)
    n1 = norm_one_subgroup(sysg)
    for g in n1.free_generators:
        assert GAUSS.norm(g) == 1
    # exponent lattice of the input maps onto Z (powers of 5) with kernel of
    # rank 1: the norm-one free part
    assert n1.rank == sysg.rank - 1


def test_canonical_unit_tie_breaks():
    i = (Fraction(0), Fraction(1))
    w = (Fraction(3, 5), Fraction(4, 5))  # (3+4i)/5 = (2+i)/(2-i)
    assert canonical_unit(GAUSS, w, i, 4) == (Fraction(4, 5), Fraction(3, 5))
    x = (Fraction(0), Fraction(1), Fraction(0))
    xinv = CUBIC.inverse(x)
    minus_one = (Fraction(-1), Fraction(0), Fraction(0))
    assert canonical_unit(CUBIC, xinv, minus_one, 2) == x


def test_dirichlet_consistency_with_certified_rank():
    for e, s, expected in [
        (CUBIC, (), 1),
        (GAUSS, (5,), 2),
        (QUARTIC, (), 3),
    ]:
        bound = 9 if e is QUARTIC else 3
        sysx = assemble_unit_system(e, s, bound, budget=2 * 10**5)
        cert = verify_unit_system(sysx)
        assert cert.rank == expected == s_unit_rank(e, s)
