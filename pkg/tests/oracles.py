"""Independent oracles used to freeze expected test values.

These deliberately avoid the code paths they check: real roots are counted
by recursion on the derivative (between consecutive critical points a
squarefree polynomial is monotone, so sign changes at certified sample
points count roots exactly), gcd divisibility by direct division,
irreducibility over F_p by exhaustive trial division. Desk-scale and exact.
"""

from __future__ import annotations

from fractions import Fraction

from ampletori.polynomials import (
    FpPoly,
    QPoly,
    fp_divmod,
    fp_strip,
    squarefree_part,
)


def _cauchy_bound(g: QPoly) -> Fraction:
    return Fraction(1) + max(
        (abs(c) / abs(g.coeffs[-1]) for c in g.coeffs[:-1]), default=Fraction(0)
    )


def _lipschitz(g: QPoly, radius: Fraction) -> Fraction:
    d = g.derivative()
    r = max(Fraction(1), radius)
    return sum((abs(c) * r**i for i, c in enumerate(d.coeffs)), Fraction(0)) + 1


def _separating_points(g: QPoly) -> list[Fraction]:
    """Sample points with g ≠ 0 certified, at most one root of g between
    consecutive ones. One representative per critical point, plus ±bound."""
    m = _cauchy_bound(g)
    if g.degree == 1:
        return [-m, m]
    deriv = squarefree_part(g.derivative())
    crit = _isolating_intervals(deriv) if deriv.degree >= 1 else []
    reps = []
    for lo, hi in crit:
        radius = max(m, abs(lo), abs(hi))
        lip = _lipschitz(g, radius)
        dlo = deriv(lo)
        while True:
            mid = (lo + hi) / 2
            if deriv(mid) == 0:
                reps.append(mid)  # the critical point itself; g(mid) != 0
                break
            if abs(g(mid)) > lip * (hi - lo):
                reps.append(mid)
                break
            if dlo * deriv(mid) < 0:
                hi = mid
            else:
                lo, dlo = mid, deriv(mid)
        assert g(reps[-1]) != 0
    bound = max([m] + [abs(r) + 1 for r in reps])
    return sorted([-bound] + reps + [bound])


def oracle_count_real_roots(f: QPoly) -> int:
    """Distinct real roots by monotone bisection between critical points."""
    g = squarefree_part(f)
    if g.degree <= 0:
        return 0
    pts = _separating_points(g)
    signs = []
    for x in pts:
        v = g(x)
        assert v != 0, "oracle sampled a root"
        signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _isolating_intervals(g: QPoly) -> list[tuple[Fraction, Fraction]]:
    g = squarefree_part(g)
    if g.degree <= 0:
        return []
    pts = _separating_points(g)
    out = []
    for a, b in zip(pts, pts[1:]):
        if (g(a) > 0) != (g(b) > 0):
            out.append((a, b))
    return out


def oracle_isolate_real_roots(f: QPoly) -> list[tuple[Fraction, Fraction]]:
    return _isolating_intervals(f)


def oracle_divides(d: QPoly, f: QPoly) -> bool:
    if d.is_zero():
        return f.is_zero()
    return f.divmod(d)[1].is_zero()


def oracle_fp_irreducible(g: FpPoly, p: int) -> bool:
    """Trial division by every monic polynomial of degree ≤ deg/2."""
    n = len(g) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        idx = [0] * d
        while True:
            cand = fp_strip(idx + [1])
            if len(cand) - 1 == d and not fp_divmod(g, cand, p)[1]:
                return False
            k = 0
            while k < d:
                idx[k] += 1
                if idx[k] < p:
                    break
                idx[k] = 0
                k += 1
            if k == d:
                break
    return True


def oracle_norm_five_box(bound: int):
    """a^2 + b^2 = 5 enumeration inside the coordinate box."""
    out = set()
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if a * a + b * b == 5:
                out.add((Fraction(a), Fraction(b)))
    return out
