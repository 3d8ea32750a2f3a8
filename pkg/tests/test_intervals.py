import math
import random
from fractions import Fraction

import pytest

from ampletori.intervals import (
    RationalInterval,
    eval_poly_interval,
    log_fraction,
    log_interval,
)


def test_interval_arithmetic_contains_truth():
    rng = random.Random(5)
    for _ in range(100):
        a = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        b = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        ia = RationalInterval(a - Fraction(1, 7), a + Fraction(1, 5))
        ib = RationalInterval(b - Fraction(1, 3), b + Fraction(1, 11))
        assert (ia + ib).contains(a + b)
        assert (ia - ib).contains(a - b)
        assert (ia * ib).contains(a * b)
        assert abs(ia).contains(abs(a))


def test_sign_certification():
    assert RationalInterval(Fraction(1, 10**9), Fraction(1)).sign() == 1
    assert RationalInterval(Fraction(-1), Fraction(-1, 10**9)).sign() == -1
    assert RationalInterval(Fraction(-1), Fraction(1)).sign() == 0


def test_round_outward_contains():
    iv = RationalInterval(Fraction(1, 3), Fraction(2, 3))
    out = iv.round_outward(16)
    assert out.lo <= iv.lo and iv.hi <= out.hi
    assert out.lo.denominator <= 2**16 and out.hi.denominator <= 2**16


def test_log_fraction_against_float_oracle():
    # float log is an independent implementation; agreement at 1e-12 slack
    for q in [Fraction(2), Fraction(1, 2), Fraction(5), Fraction(7, 3), Fraction(10**6)]:
        iv = log_fraction(q, 64)
        assert iv.width <= Fraction(1, 2**62)  # outward rounding costs 2 ulps
        ref = math.log(float(q))
        assert float(iv.lo) - 1e-12 <= ref <= float(iv.hi) + 1e-12


def test_log_is_additive_within_enclosures():
    rng = random.Random(11)
    for _ in range(50):
        a = Fraction(rng.randint(1, 500), rng.randint(1, 500))
        b = Fraction(rng.randint(1, 500), rng.randint(1, 500))
        la, lb, lab = log_fraction(a, 80), log_fraction(b, 80), log_fraction(a * b, 80)
        s = la + lb
        assert s.lo <= lab.hi and lab.lo <= s.hi  # the enclosures overlap


def test_log_refines_monotonically():
    q = Fraction(3, 7)
    wide = log_fraction(q, 32)
    tight = log_fraction(q, 128)
    assert wide.lo <= tight.lo and tight.hi <= wide.hi
    assert tight.width < wide.width


def test_log_interval_requires_positive():
    with pytest.raises(ValueError):
        log_interval(RationalInterval(Fraction(-1), Fraction(1)))


def test_eval_poly_interval_contains_value():
    coeffs = [Fraction(-1), Fraction(1), Fraction(0), Fraction(1)]
    x = Fraction(7, 11)
    iv = eval_poly_interval(coeffs, RationalInterval(x - Fraction(1, 100), x + Fraction(1, 100)))
    truth = coeffs[0] + coeffs[1] * x + coeffs[3] * x**3
    assert iv.contains(truth)
