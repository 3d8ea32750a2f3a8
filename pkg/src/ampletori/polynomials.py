"""Exact univariate polynomial arithmetic over Q, Z and F_p.

Polynomials are dense lists of coefficients in ascending degree (degrees in
play are at most 8, so sparse storage would buy nothing). Over Q the
coefficients are fractions.Fraction; over F_p they are ints reduced mod p.
The zero polynomial is rejected with an explicit error wherever the operation
is meaningless for it, never handled by convention.
"""

from __future__ import annotations

import hashlib
import math
import random
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    CompositeModulusError,
    IrreducibilityUndecidedError,
    NonMonicError,
    ZeroPolynomialError,
)

Coeffs = tuple[Fraction, ...]


def _strip(coeffs: Sequence[Fraction]) -> Coeffs:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class QPoly:
    """Polynomial with Fraction coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        self.coeffs: Coeffs = _strip([Fraction(c) for c in coeffs])

    # -- basic structure ---------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if self.is_zero():
            raise ZeroPolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return not self.is_zero() and self.coeffs[-1] == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, QPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "QPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x" if c != 1 else "x")
            else:
                terms.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        return "QPoly(" + " + ".join(terms) + ")"

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    def __neg__(self) -> "QPoly":
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other) -> "QPoly":
        if isinstance(other, (int, Fraction)):
            return QPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly([])
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QPoly":
        result = QPoly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise ZeroPolynomialError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return QPoly([]), QPoly(rem)
        quot = [Fraction(0)] * (dq + 1)
        inv_lead = 1 / other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv_lead
            quot[k] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    rem[k + j] -= c * oc
        return QPoly(quot), QPoly(rem)

    def __mod__(self, other: "QPoly") -> "QPoly":
        return self.divmod(other)[1]

    def monic(self) -> "QPoly":
        if self.is_zero():
            raise ZeroPolynomialError("zero polynomial cannot be made monic")
        inv = 1 / self.coeffs[-1]
        return QPoly([c * inv for c in self.coeffs])

    def derivative(self) -> "QPoly":
        return QPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reduce_mod(self, p: int) -> list[int]:
        """Coefficients reduced mod p; requires p-integral coefficients."""
        out = []
        for c in self.coeffs:
            if c.denominator % p == 0:
                raise ValueError(f"coefficient {c} is not {p}-integral")
            out.append(c.numerator * pow(c.denominator, -1, p) % p)
        return fp_strip(out)


def x_poly() -> QPoly:
    return QPoly([0, 1])


def poly_gcd(f: QPoly, g: QPoly) -> QPoly:
    """Monic gcd over Q; gcd(f, 0) = monic(f)."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def resultant(f: QPoly, g: QPoly) -> Fraction:
    """Res(f, g) by the Euclidean algorithm with exact multiplier tracking."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomialError("resultant of the zero polynomial")
    a, b = f, g
    res = Fraction(1)
    sign = 1
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return Fraction(0)
        res *= b.leading() ** (a.degree - r.degree)
        if (a.degree * b.degree) % 2 == 1:
            sign = -sign
        a, b = b, r
    # b is a nonzero constant
    res *= b.coeffs[0] ** a.degree
    return sign * res


def discriminant(f: QPoly) -> int:
    """disc(f) = (−1)^{d(d−1)/2}·Res(f, f′) for monic integral f, deg ≥ 1."""
    if f.is_zero() or f.degree < 1:
        raise ZeroPolynomialError("discriminant needs degree >= 1")
    if not f.is_monic():
        raise NonMonicError("discriminant is only defined here for monic input")
    d = f.degree
    if d == 1:
        return 1
    r = resultant(f, f.derivative())
    val = (-1) ** (d * (d - 1) // 2) * r
    assert val.denominator == 1 or not f.is_integral()
    return int(val) if val.denominator == 1 else val


def squarefree_part(f: QPoly) -> QPoly:
    if f.is_zero():
        raise ZeroPolynomialError("squarefree part of zero")
    g = poly_gcd(f, f.derivative())
    if g.degree <= 0:
        return f.monic()
    return f.divmod(g)[0].monic()


# ---------------------------------------------------------------------------
# Sturm sequences and real root counting
# ---------------------------------------------------------------------------


def sturm_sequence(f: QPoly) -> list[QPoly]:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _sign_changes(values: list[Fraction]) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_changes_at_infinity(seq: list[QPoly], positive: bool) -> int:
    values = []
    for p in seq:
        if p.is_zero():
            continue
        lead = p.leading()
        if positive:
            values.append(lead)
        else:
            values.append(lead if p.degree % 2 == 0 else -lead)
    return _sign_changes(values)


def sturm_count_real_roots(f: QPoly) -> int:
    """Number of distinct real roots, via Sturm sign changes at ±∞.

    The input is made squarefree by dividing out gcd(f, f′) first.
    """
    if f.is_zero():
        raise ZeroPolynomialError("zero polynomial is rejected")
    if f.degree == 0:
        return 0
    g = squarefree_part(f)
    seq = sturm_sequence(g)
    return _sign_changes_at_infinity(seq, False) - _sign_changes_at_infinity(seq, True)


def sturm_count_in_interval(f: QPoly, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in (lo, hi]; f is made squarefree internally."""
    if f.is_zero():
        raise ZeroPolynomialError("zero polynomial is rejected")
    g = squarefree_part(f)
    seq = sturm_sequence(g)
    v_lo = _sign_changes([p(lo) for p in seq])
    v_hi = _sign_changes([p(hi) for p in seq])
    return v_lo - v_hi


def root_bound(f: QPoly) -> Fraction:
    """Cauchy bound: all real roots lie in (−M, M)."""
    if f.is_zero():
        raise ZeroPolynomialError("zero polynomial has no root bound")
    lead = abs(f.leading())
    return 1 + max((abs(c) / lead for c in f.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(f: QPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals (lo, hi], one distinct real root in each."""
    g = squarefree_part(f)
    if g.degree == 0:
        return []
    seq = sturm_sequence(g)
    m = root_bound(g)

    def v(x: Fraction) -> int:
        return _sign_changes([p(x) for p in seq])

    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-m, m, v(-m), v(m))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        count = vlo - vhi
        if count == 0:
            continue
        if count == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        while g(mid) == 0:
            mid = (lo + mid) / 2
        vm = v(mid)
        stack.append((lo, mid, vlo, vm))
        stack.append((mid, hi, vm, vhi))
    return sorted(out)


def refine_root(
    f: QPoly, lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval (lo, hi] below the requested width.

    Uses sign bisection; root endpoints are avoided by construction since f
    keeps a single sign change inside.
    """
    g = squarefree_part(f)
    s_hi = g(hi)
    if s_hi == 0:
        raise ValueError("isolating interval may not end at a root")
    while hi - lo > width:
        mid = (lo + hi) / 2
        val = g(mid)
        if val == 0:
            # nudge: the root is interior, move mid slightly left
            mid = (lo + mid) / 2
            val = g(mid)
        if (val > 0) == (s_hi > 0):
            hi = mid
        else:
            lo = mid
    return lo, hi


# ---------------------------------------------------------------------------
# F_p polynomial arithmetic (int lists, ascending degree)
# ---------------------------------------------------------------------------

FpPoly = list[int]


def is_prime(n: int) -> bool:
    """Deterministic Miller–Rabin, valid far beyond the sizes used here."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def fp_strip(a: Sequence[int]) -> FpPoly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def fp_add(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return fp_strip(out)


def fp_sub(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    return fp_add(a, [(-c) % p for c in b], p)


def fp_mul(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return fp_strip(out)


def fp_divmod(a: FpPoly, b: FpPoly, p: int) -> tuple[FpPoly, FpPoly]:
    if not b:
        raise ZeroPolynomialError("division by zero polynomial")
    rem = list(a)
    db, da = len(b) - 1, len(rem) - 1
    if da < db:
        return [], fp_strip(rem)
    inv = pow(b[-1], -1, p)
    quot = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        c = rem[k + db] * inv % p
        quot[k] = c
        if c:
            for j, cb in enumerate(b):
                rem[k + j] = (rem[k + j] - c * cb) % p
    return fp_strip(quot), fp_strip(rem)


def fp_mod(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    return fp_divmod(a, b, p)[1]


def fp_gcd(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    while b:
        a, b = b, fp_mod(a, b, p)
    return fp_monic(a, p) if a else a


def fp_monic(a: FpPoly, p: int) -> FpPoly:
    if not a:
        raise ZeroPolynomialError("zero polynomial cannot be made monic")
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def fp_pow_mod(base: FpPoly, e: int, mod: FpPoly, p: int) -> FpPoly:
    result = [1]
    base = fp_mod(base, mod, p)
    while e:
        if e & 1:
            result = fp_mod(fp_mul(result, base, p), mod, p)
        base = fp_mod(fp_mul(base, base, p), mod, p)
        e >>= 1
    return result


def fp_derivative(a: FpPoly, p: int) -> FpPoly:
    return fp_strip([i * c % p for i, c in enumerate(a)][1:])


def _fp_squarefree_decomposition(f: FpPoly, p: int) -> list[tuple[FpPoly, int]]:
    """List of (squarefree g_i, multiplicity m_i) with f = ∏ g_i^{m_i}, monic."""
    f = fp_monic(f, p)
    if len(f) - 1 == 0:
        return []
    d = fp_derivative(f, p)
    if not d:
        # f = h(x^p) = (h*(x))^p over the prime field
        h = fp_strip([f[i] for i in range(0, len(f), p)])
        return [(g, m * p) for g, m in _fp_squarefree_decomposition(h, p)]
    out: list[tuple[FpPoly, int]] = []
    c = fp_gcd(f, d, p)
    w = fp_divmod(f, c, p)[0]
    m = 1
    while len(w) - 1 > 0:
        y = fp_gcd(w, c, p)
        z = fp_divmod(w, y, p)[0]
        if len(z) - 1 > 0:
            out.append((z, m))
        w = y
        c = fp_divmod(c, y, p)[0]
        m += 1
    if len(c) - 1 > 0:
        # c holds the factors of p-divisible multiplicity, with their full
        # multiplicity intact; the recursive call resolves the x^p structure
        out.extend(_fp_squarefree_decomposition(c, p))
    return out


def _distinct_degree(f: FpPoly, p: int) -> list[tuple[FpPoly, int]]:
    """Split squarefree monic f into products of irreducibles of equal degree."""
    out = []
    h = [0, 1]  # x
    rest = f
    d = 0
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = fp_pow_mod(h, p, rest, p)
        g = fp_gcd(fp_sub(h, [0, 1], p), rest, p)
        if len(g) - 1 > 0:
            out.append((g, d))
            rest = fp_divmod(rest, g, p)[0]
            h = fp_mod(h, rest, p)
    if len(rest) - 1 > 0:
        out.append((rest, len(rest) - 1))
    return out


def _equal_degree_split(f: FpPoly, d: int, p: int, rng: random.Random) -> list[FpPoly]:
    """Cantor–Zassenhaus equal-degree factorization of squarefree monic f."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        h = [rng.randrange(p) for _ in range(n)]
        h = fp_strip(h)
        if len(h) - 1 < 1:
            continue
        g = fp_gcd(h, f, p)
        if 0 < len(g) - 1 < n:
            pass  # lucky split
        elif p == 2:
            # trace map T(h) = h + h^2 + ... + h^(2^(d-1))
            t = list(h)
            acc = list(h)
            for _ in range(d - 1):
                acc = fp_pow_mod(acc, 2, f, p)
                t = fp_add(t, acc, p)
            g = fp_gcd(t, f, p)
            if not (0 < len(g) - 1 < n):
                continue
        else:
            e = (p**d - 1) // 2
            w = fp_pow_mod(h, e, f, p)
            g = fp_gcd(fp_sub(w, [1], p), f, p)
            if not (0 < len(g) - 1 < n):
                continue
        rest = fp_divmod(f, g, p)[0]
        return _equal_degree_split(g, d, p, rng) + _equal_degree_split(rest, d, p, rng)


def _split_roots_exhaustive(f: FpPoly, p: int) -> list[FpPoly]:
    """Deterministic split of a product of linears by exhaustive root search."""
    out = []
    rest = f
    for r in range(p):
        if len(rest) - 1 == 0:
            break
        cand = [(-r) % p, 1]
        q, rem = fp_divmod(rest, cand, p)
        if not rem:
            out.append(cand)
            rest = q
    assert len(rest) - 1 == 0
    return out


def factor_mod_p(f: QPoly | Sequence[int], p: int) -> list[tuple[FpPoly, int]]:
    """Factor f mod p into monic irreducibles with multiplicities.

    Distinct-degree then equal-degree splitting (Cantor–Zassenhaus), with the
    CZ randomness seeded deterministically from (f, p) so output is
    reproducible; a deterministic exhaustive fallback is used when
    p·deg(f) ≤ 10^4. Factors are sorted by (degree, coefficients).
    """
    if not is_prime(p):
        raise CompositeModulusError(f"{p} is not prime")
    if isinstance(f, QPoly):
        fp = f.reduce_mod(p)
    else:
        fp = fp_strip([c % p for c in f])
    if not fp:
        raise ZeroPolynomialError("cannot factor the zero polynomial")
    if len(fp) - 1 == 0:
        return []
    seed = hashlib.sha256(("factor:%d:" % p + ",".join(map(str, fp))).encode()).digest()
    rng = random.Random(int.from_bytes(seed[:8], "big"))
    root_search_ok = p * (len(fp) - 1) <= 10**4

    result: list[tuple[FpPoly, int]] = []
    for sqfree, mult in _fp_squarefree_decomposition(fp, p):
        for part, d in _distinct_degree(sqfree, p):
            if d == 1 and root_search_ok:
                irreducibles = _split_roots_exhaustive(part, p)
            else:
                irreducibles = _equal_degree_split(part, d, p, rng)
            result.extend((fp_monic(g, p), mult) for g in irreducibles)
    result.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return result


def fp_is_irreducible(f: FpPoly, p: int) -> bool:
    """Rabin irreducibility test over F_p."""
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    h = fp_pow_mod(x, p**n, f, p)
    if fp_sub(h, x, p):
        return False
    for q in sorted({q for q in _prime_factors(n)}):
        h = fp_pow_mod(x, p ** (n // q), f, p)
        if len(fp_gcd(fp_sub(h, x, p), f, p)) - 1 != 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Integers and irreducibility over Q
# ---------------------------------------------------------------------------


def is_square_integer(n: int) -> bool:
    """True iff n is a perfect square (negative numbers are not)."""
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(f: QPoly) -> list[Fraction]:
    """All rational roots of f (with f integral after clearing denominators)."""
    if f.is_zero():
        raise ZeroPolynomialError("zero polynomial")
    den = math.lcm(*[c.denominator for c in f.coeffs])
    coeffs = [int(c * den) for c in f.coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    roots = set()
    if len(coeffs) != len(f.coeffs):
        roots.add(Fraction(0))
    if not coeffs:
        return sorted(roots)
    a0, an = coeffs[0], coeffs[-1]
    for pnum in _divisors(a0):
        for qden in _divisors(an):
            for cand in (Fraction(pnum, qden), Fraction(-pnum, qden)):
                if f(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def is_irreducible_q(f: QPoly) -> bool:
    """Decide irreducibility over Q for monic integral f of degree ≤ 4.

    Degrees 5+ are certified via the factor-degree-pattern intersection over
    several good primes; if no certificate is found the call raises rather
    than guessing.
    """
    if f.is_zero() or f.degree < 1:
        return False
    if not f.is_monic() or not f.is_integral():
        raise NonMonicError("irreducibility test expects a monic integral polynomial")
    d = f.degree
    if d == 1:
        return True
    if poly_gcd(f, f.derivative()).degree > 0:
        return False
    if rational_roots(f):
        return False
    if d in (2, 3):
        return True
    if d == 4:
        return not _has_integer_quadratic_factor(f)
    return _certify_irreducible_mod_p(f)


def _has_integer_quadratic_factor(f: QPoly) -> bool:
    """Search x^4+c3x^3+c2x^2+c1x+c0 = (x^2+ax+b)(x^2+cx+d) over Z."""
    c0, c1, c2, c3 = (int(f.coeffs[i]) for i in range(4))
    if c0 == 0:
        return True
    for b in _signed_divisors(c0):
        if c0 % b != 0:
            continue
        dd = c0 // b
        # a+c = c3, b+d+ac = c2, ad+bc = c1
        # From a+c=c3: c = c3-a; substitute: a(c3-a) = c2-b-dd
        # and a*dd + b*(c3-a) = c1 -> a(dd-b) = c1 - b*c3
        if b == dd:
            # a(c3-a) = c2-2b and b(a+c)=bc3=c1 must hold
            if b * c3 != c1:
                continue
            # solve a^2 - c3 a + (c2-2b) = 0 over Z
            disc = c3 * c3 - 4 * (c2 - 2 * b)
            if disc < 0 or not is_square_integer(disc):
                continue
            r = math.isqrt(disc)
            for a in {(c3 + r) // 2, (c3 - r) // 2}:
                c = c3 - a
                if (
                    a + c == c3
                    and b + dd + a * c == c2
                    and a * dd + b * c == c1
                ):
                    return True
        else:
            num = c1 - b * c3
            den = dd - b
            if num % den != 0:
                continue
            a = num // den
            c = c3 - a
            if b + dd + a * c == c2 and a * dd + b * c == c1:
                return True
    return False


def _signed_divisors(n: int) -> list[int]:
    ds = _divisors(n)
    return sorted(set(ds) | {-d for d in ds})


def _certify_irreducible_mod_p(f: QPoly, tries: int = 12) -> bool:
    disc = discriminant(f)
    n = f.degree
    possible = set(range(n + 1))
    used = 0
    p = 2
    while used < tries:
        if is_prime(p) and disc % p != 0:
            used += 1
            degs = [len(g) - 1 for g, m in factor_mod_p(f, p) for _ in range(m)]
            if len(degs) == 1:
                return True
            sums = {0}
            for dgi in degs:
                sums |= {s + dgi for s in sums}
            possible &= sums
            if not (possible - {0, n}):
                return True
        p += 1
    raise IrreducibilityUndecidedError(
        f"cannot certify irreducibility of degree-{n} polynomial; "
        "full decision is only implemented for degree <= 4"
    )
