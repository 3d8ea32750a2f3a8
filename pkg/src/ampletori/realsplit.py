"""Certified factorization of a squarefree polynomial over R.

Produces interval enclosures for the coefficients (a_j, b_j) of the monic
real quadratic factors x² + a_j x + b_j (one per complex-conjugate root
pair), alongside the isolated real roots. This is what makes log|σ(u)|
computable at every complex place: |g(β)|² = Res(x² + ax + b, g) has the
closed form r1²·b − r1·r0·a + r0² for g ≡ r1·x + r0 mod the quadratic,
which evaluates in interval arithmetic.

The quadratic coefficients are located as follows: the real numbers
−a_j = β_j + conj(β_j) are real roots of the root-sums polynomial
S(z) = Res_y(f(y), f(z − y)), which is computed exactly by Lagrange
interpolation of resultant values. Candidate (a, b) assignments are solved
from the coefficient identities and accepted only when the interval product
of all candidate factors encloses f exactly; the intervals are refined until
a single assignment survives, so a wrong assignment can never be certified.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import AmpleToriError
from .intervals import RationalInterval
from .polynomials import QPoly, isolate_real_roots, refine_root, squarefree_part


class RealSplitError(AmpleToriError):
    module = "realsplit"


def _lagrange_interpolate(points: list[tuple[Fraction, Fraction]]) -> QPoly:
    total = QPoly([])
    for i, (xi, yi) in enumerate(points):
        num = QPoly([yi])
        den = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = num * QPoly([-xj, 1])
            den *= xi - xj
        total = total + num * (1 / den)
    return total


def root_sums_polynomial(f: QPoly) -> QPoly:
    """S(z) = Res_y(f(y), f(z−y)): roots are all sums of pairs of roots of f."""
    from .polynomials import resultant

    n = f.degree
    deg = n * n
    points = []
    z0 = Fraction(0)
    while len(points) <= deg:
        shifted = _compose_linear(f, z0)
        points.append((z0, resultant(f, shifted)))
        z0 += 1
    return _lagrange_interpolate(points)


def _compose_linear(f: QPoly, z0: Fraction) -> QPoly:
    """f(z0 − y) as a polynomial in y."""
    acc = QPoly([])
    base = QPoly([z0, -1])
    power = QPoly([1])
    for c in f.coeffs:
        acc = acc + power * c
        power = power * base
    return acc


def sqrt_interval(iv: RationalInterval, bits: int = 64) -> RationalInterval:
    """Certified square root of a nonnegative interval."""
    if iv.lo < 0:
        raise ValueError("sqrt of an interval reaching below zero")
    scale = 1 << bits

    def lower(q: Fraction) -> Fraction:
        v = math.isqrt((q.numerator * scale * scale) // q.denominator)
        return Fraction(v, scale)

    def upper(q: Fraction) -> Fraction:
        v = math.isqrt((q.numerator * scale * scale) // q.denominator) + 1
        return Fraction(v, scale)

    return RationalInterval(lower(iv.lo), upper(iv.hi))


def _poly_interval_product(factors: list[list[RationalInterval]]) -> list[RationalInterval]:
    out = [RationalInterval.point(1)]
    for coeffs in factors:
        nxt = [RationalInterval.point(0)] * (len(out) + len(coeffs) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(coeffs):
                nxt[i + j] = nxt[i + j] + a * b
        out = nxt
    return out


class RealSplit:
    """Certified real factorization of a squarefree monic polynomial."""

    def __init__(self, f: QPoly, real_roots, quadratics):
        self.f = f
        self.real_roots = real_roots  # list of (lo, hi)
        self.quadratics = quadratics  # list of (a interval, b interval)


def real_quadratic_split(f: QPoly, bits: int = 64, max_rounds: int = 10) -> RealSplit:
    """Certified (a_j, b_j) intervals for the real quadratic factors of f.

    Implemented for r2 ≤ 2 (every field of degree ≤ 4). For r2 = 1 the
    single quadratic is solved directly from the isolated real roots; for
    r2 = 2 the candidate sums come from the root-sums polynomial and the
    unique assignment surviving exact coefficient containment is returned.
    """
    f = squarefree_part(f)
    n = f.degree
    real_isos = isolate_real_roots(f)
    r1 = len(real_isos)
    r2 = (n - r1) // 2
    if r2 == 0:
        return RealSplit(f, real_isos, [])
    if r2 > 2:
        raise RealSplitError("real quadratic splitting implemented for r2 <= 2")

    sums = squarefree_part(root_sums_polynomial(f))
    sum_isos = isolate_real_roots(sums)

    for round_ in range(max_rounds):
        prec = bits * (2**round_)
        width = Fraction(1, 1 << prec)
        roots_iv = []
        for iso in real_isos:
            lo, hi = refine_root(f, iso[0], iso[1], width)
            roots_iv.append(RationalInterval(lo, hi))
        sum_iv = []
        for iso in sum_isos:
            lo, hi = refine_root(sums, iso[0], iso[1], width)
            sum_iv.append(RationalInterval(lo, hi))

        survivors = []
        if r2 == 1:
            # a = -(sum of the complex pair) = -(coeff_{n-1} + sum of real roots)
            total = RationalInterval.point(-f.coeffs[n - 1])
            for iv in roots_iv:
                total = total - iv
            a_iv = -total
            # b from the constant term: prod(real roots) * b = ±constant
            prod = RationalInterval.point(1)
            for iv in roots_iv:
                prod = prod * iv
            const = RationalInterval.point(f.coeffs[0])
            sign = Fraction((-1) ** r1)
            if prod.contains_zero():
                survivors = []  # refine the real roots further
            else:
                b_iv = _interval_div(const.scale(sign), prod)
                survivors = [[(a_iv, b_iv)]]
        else:
            survivors = _match_two_quadratics(f, roots_iv, sum_iv)

        if len(survivors) == 1:
            quads = sorted(survivors[0], key=lambda ab: (ab[0].lo, ab[1].lo))
            return RealSplit(f, real_isos, quads)
    raise RealSplitError(
        f"could not isolate a unique real factorization of {f!r} "
        f"after {max_rounds} refinement rounds"
    )


def _interval_div(num: RationalInterval, den: RationalInterval) -> RationalInterval:
    if den.contains_zero():
        raise ZeroDivisionError("interval division by an interval containing zero")
    candidates = [num.lo / den.lo, num.lo / den.hi, num.hi / den.lo, num.hi / den.hi]
    return RationalInterval(min(candidates), max(candidates))


def _match_two_quadratics(f: QPoly, roots_iv, sum_iv):
    """Assignments of sum-roots to the two quadratic factors that survive
    exact coefficient containment (r2 = 2, so degree 4 or 5 with a real root
    — degree ≤ 4 in practice means no real roots here)."""
    import itertools

    # degree ≤ 4 never has both r1 > 0 and r2 = 2, so this is the plain
    # quartic system for (x²+a1x+b1)(x²+a2x+b2)
    if roots_iv:
        return []
    survivors = []
    for combo in itertools.combinations_with_replacement(range(len(sum_iv)), 2):
        s1, s2 = sum_iv[combo[0]], sum_iv[combo[1]]
        a1, a2 = -s1, -s2
        big_a = Fraction(f.coeffs[3])  # a1 + a2
        big_b = Fraction(f.coeffs[2])  # a1 a2 + b1 + b2
        big_c = Fraction(f.coeffs[1])  # a1 b2 + a2 b1
        big_d = Fraction(f.coeffs[0])  # b1 b2
        if not (a1 + a2).contains(big_a):
            continue
        s_b = RationalInterval.point(big_b) - a1 * a2  # b1 + b2
        diff = a1 - a2
        try:
            if diff.excludes_zero():
                # [a2 b1 + a1 b2 = C, b1 + b2 = s_b] is linear in (b1, b2)
                b1 = _interval_div(RationalInterval.point(big_c) - a1 * s_b, diff.scale(-1))
                b2 = s_b - b1
            else:
                # a1 = a2: b's solve y² − s_b·y + D = 0
                disc = s_b * s_b - RationalInterval.point(4 * big_d)
                if disc.hi < 0:
                    continue
                disc = RationalInterval(max(disc.lo, Fraction(0)), max(disc.hi, Fraction(0)))
                root = sqrt_interval(disc)
                b1 = (s_b - root).scale(Fraction(1, 2))
                b2 = (s_b + root).scale(Fraction(1, 2))
        except ZeroDivisionError:
            continue
        prod = _poly_interval_product(
            [
                [b1, a1, RationalInterval.point(1)],
                [b2, a2, RationalInterval.point(1)],
            ]
        )
        if all(prod[k].contains(f.coeffs[k]) for k in range(len(f.coeffs))):
            survivors.append([(a1, b1), (a2, b2)])
    # merge symmetric duplicates (swapped factor order)
    unique = []
    for s in survivors:
        key = sorted(((ab[0].lo, ab[0].hi, ab[1].lo, ab[1].hi) for ab in s))
        if key not in [u[0] for u in unique]:
            unique.append((key, s))
    return [s for _, s in unique]


def abs_square_at_quadratic(
    g: QPoly, a: RationalInterval, b: RationalInterval
) -> RationalInterval:
    """|g(β)|² for β a root of x² + ax + b (with conj(β) the other root).

    Reduce g modulo the quadratic with interval coefficients to r1·x + r0;
    then g(β)·g(conj β) = r1²·b − r1·r0·a + r0².
    """
    coeffs = [RationalInterval.point(c) for c in g.coeffs]
    # interval Euclidean reduction by the monic quadratic
    while len(coeffs) > 2:
        lead = coeffs[-1]
        deg = len(coeffs) - 1
        coeffs[deg - 1] = coeffs[deg - 1] - lead * a
        coeffs[deg - 2] = coeffs[deg - 2] - lead * b
        coeffs.pop()
    r0 = coeffs[0] if coeffs else RationalInterval.point(0)
    r1 = coeffs[1] if len(coeffs) > 1 else RationalInterval.point(0)
    return r1 * r1 * b - r1 * r0 * a + r0 * r0
