import random
from fractions import Fraction

import pytest

from ampletori import linalg
from ampletori.etale import EtaleAlgebra
from ampletori.polynomials import QPoly

CUBIC = EtaleAlgebra([QPoly([-1, 1, 0, 1])])
GAUSS = EtaleAlgebra([QPoly([1, 0, 1])])
QUARTIC = EtaleAlgebra([QPoly([1, -16, 20, -8, 1])])
PRODUCT = EtaleAlgebra([QPoly([1, 0, 1]), QPoly([-2, 0, 1])])  # Q(i) x Q(sqrt2)


def test_regular_rep_cubic_generator_is_paper_matrix():
    g = CUBIC.regular_rep(CUBIC.generator(0))
    assert g == linalg.matrix([[0, 0, 1], [1, 0, -1], [0, 1, 0]])


def test_regular_rep_gauss_i():
    assert GAUSS.regular_rep(GAUSS.generator(0)) == linalg.matrix([[0, -1], [1, 0]])


def test_regular_rep_of_one_is_identity():
    for e in (CUBIC, GAUSS, QUARTIC, PRODUCT):
        assert e.regular_rep(e.one()) == linalg.identity(e.n)


def test_norm_trace_examples():
    assert GAUSS.norm(GAUSS.generator(0)) == 1
    assert CUBIC.norm(CUBIC.generator(0)) == 1  # det of the companion matrix
    g = (Fraction(4, 5), Fraction(3, 5))
    assert GAUSS.norm(g) == 1
    assert CUBIC.trace(CUBIC.one()) == 3
    assert GAUSS.trace(GAUSS.generator(0)) == 0
    assert CUBIC.trace(CUBIC.generator(0)) == 0


def test_is_order_witnesses():
    assert CUBIC.is_order() == (True, None)
    bad = EtaleAlgebra([QPoly([1, 0, 1])], [[1, 0], [0, Fraction(1, 2)]])
    ok, witness = bad.is_order()
    assert not ok
    assert witness["pair"] == (1, 1) and witness["value"] == Fraction(-1, 4)
    z2i = EtaleAlgebra([QPoly([1, 0, 1])], [[1, 0], [0, 2]])
    assert z2i.is_order() == (True, None)


def test_element_integrality():
    assert CUBIC.element_is_integral(CUBIC.generator(0))
    assert not CUBIC.element_is_integral((Fraction(0), Fraction(1, 2), Fraction(0)))
    assert not GAUSS.element_is_integral((Fraction(4, 5), Fraction(3, 5)))


def _random_element(rng, e):
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(e.n))


@pytest.mark.parametrize("algebra", [CUBIC, GAUSS, QUARTIC, PRODUCT])
def test_regular_rep_is_ring_homomorphism(algebra):
    rng = random.Random(2026)
    for _ in range(100):
        a = _random_element(rng, algebra)
        b = _random_element(rng, algebra)
        ma, mb = algebra.regular_rep(a), algebra.regular_rep(b)
        assert algebra.regular_rep(algebra.mul(a, b)) == linalg.mat_mul(ma, mb)
        assert algebra.regular_rep(algebra.add(a, b)) == linalg.mat_add(ma, mb)


@pytest.mark.parametrize("algebra", [CUBIC, GAUSS, PRODUCT])
def test_norm_multiplicative_trace_additive(algebra):
    rng = random.Random(7)
    for _ in range(100):
        a = _random_element(rng, algebra)
        b = _random_element(rng, algebra)
        assert algebra.norm(algebra.mul(a, b)) == algebra.norm(a) * algebra.norm(b)
        assert algebra.trace(algebra.add(a, b)) == algebra.trace(a) + algebra.trace(b)


@pytest.mark.parametrize("algebra", [CUBIC, GAUSS, QUARTIC])
def test_charpoly_of_generator_is_defining_polynomial(algebra):
    assert algebra.charpoly(algebra.generator(0)) == algebra.factors[0]


def test_basis_change_conjugates_inside_glnz():
    # same order, new Z-basis U·B: representations conjugate by one
    # unimodular matrix for every element simultaneously
    rng = random.Random(31)
    e = CUBIC
    u = linalg.matrix([[1, 2, 0], [0, 1, -3], [0, 0, 1]])  # unimodular
    e2 = EtaleAlgebra(e.factors, linalg.mat_mul(u, e.order_basis))
    conj = linalg.transpose(linalg.mat_inv(u))
    conj_inv = linalg.mat_inv(conj)
    for _ in range(25):
        a_power = tuple(Fraction(rng.randint(-9, 9)) for _ in range(e.n))
        m1 = e.regular_rep(e.from_power(a_power))
        m2 = e2.regular_rep(e2.from_power(a_power))
        assert m2 == linalg.mat_mul(linalg.mat_mul(conj, m1), conj_inv)
        assert linalg.is_integer_matrix(conj) and linalg.is_integer_matrix(conj_inv)


def test_product_algebra_structure():
    assert PRODUCT.n == 4
    # norm is the product of the factor norms
    a = PRODUCT.from_power(tuple(Fraction(c) for c in (1, 2, 3, 1)))
    n1 = PRODUCT.factor_norm(a, 0)
    n2 = PRODUCT.factor_norm(a, 1)
    assert PRODUCT.norm(a) == n1 * n2


def test_inverse_round_trip():
    a = (Fraction(4, 5), Fraction(3, 5))
    inv = GAUSS.inverse(a)
    assert GAUSS.mul(a, inv) == GAUSS.one()


def test_rejects_reducible_factor():
    with pytest.raises(ValueError):
        EtaleAlgebra([QPoly([1, 2, 1])])


def test_rejects_singular_basis():
    from ampletori.errors import SingularMatrixError

    with pytest.raises(SingularMatrixError):
        EtaleAlgebra([QPoly([1, 0, 1])], [[1, 0], [2, 0]])
