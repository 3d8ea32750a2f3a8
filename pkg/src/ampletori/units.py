"""Unit and S-unit machinery for an order in an étale algebra.

Everything is certified or exact: S-integrality and norms are checked in
exact rational arithmetic, torsion orders by exact powering, and
multiplicative independence through interval enclosures of the log embedding
(real embeddings via Sturm-isolated roots, complex places via the product
formula or a certified real quadratic factorization, finite places via
prime-ideal valuations in the equation order). A verdict of independence is
a certificate; failure to certify at the precision cap is surfaced as
IndependenceUndecided, which is distinct from a disproof.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (
    BudgetExceededError,
    IndependenceUndecidedError,
    InvalidUnitSystemError,
    UnsupportedError,
)
from .etale import Coords, EtaleAlgebra
from .intervals import RationalInterval, eval_poly_interval, log_fraction, log_interval
from .places import Signature, check_unramified
from .polynomials import QPoly, factor_mod_p, isolate_real_roots, refine_root

PRECISION_LADDER = (64, 128, 256)
DEFAULT_PRECISION_CAP = 256
RELATION_EXPONENT_BOUND = 8
TORSION_ORDER_CANDIDATES = (1, 2, 3, 4, 5, 6, 8, 10, 12)  # phi(m) <= 4


# ---------------------------------------------------------------------------
# rank formulas
# ---------------------------------------------------------------------------


def dirichlet_rank(sig: Signature, places_over_s: tuple[int, ...] = ()) -> int:
    """Free rank r1 + r2 − 1 of the unit group, plus one per place over S."""
    return sig.r1 + sig.r2 - 1 + sum(places_over_s)


def s_unit_rank(e: EtaleAlgebra, s_primes: tuple[int, ...]) -> int:
    """Free rank of the S-unit group of the whole algebra (sum over factors)."""
    from .places import places_over_p, signature

    total = 0
    for f in e.factors:
        sig = signature(f)
        counts = tuple(places_over_p(f, p) for p in s_primes)
        total += dirichlet_rank(sig, counts)
    return total


# ---------------------------------------------------------------------------
# S-integrality helpers
# ---------------------------------------------------------------------------


def strip_primes(n: int, primes: tuple[int, ...]) -> tuple[int, dict[int, int]]:
    """Divide out the given primes; returns (cofactor, exponents)."""
    n = abs(n)
    exps = {p: 0 for p in primes}
    for p in primes:
        while n and n % p == 0:
            n //= p
            exps[p] += 1
    return n, exps


def fraction_is_s_integral(x: Fraction, s_primes: tuple[int, ...]) -> bool:
    rest, _ = strip_primes(x.denominator, s_primes)
    return rest == 1


def fraction_is_s_unit_rational(x: Fraction, s_primes: tuple[int, ...]) -> bool:
    """True iff x = ±∏ p^{a_p} over the S-primes (a unit of Z[1/S])."""
    if x == 0:
        return False
    num_rest, _ = strip_primes(x.numerator, s_primes)
    den_rest, _ = strip_primes(x.denominator, s_primes)
    return num_rest == 1 and den_rest == 1


def matrix_is_s_integral(m, s_primes: tuple[int, ...]) -> bool:
    return all(fraction_is_s_integral(x, s_primes) for row in m for x in row)


# ---------------------------------------------------------------------------
# prime-ideal valuations (unramified p, computed in the equation order)
# ---------------------------------------------------------------------------


class PrimePlaces:
    """The places of Q[x]/(f) over an unramified prime p.

    Each place is the ideal (p, g_i(x)) for an irreducible factor g_i of
    f mod p; valuations are computed by exact membership in HNF bases of
    ideal powers. Valid because p ∤ disc(f) makes Z[x]/(f) p-maximal.
    """

    def __init__(self, f: QPoly, p: int):
        check_unramified(f, p)
        self.f = f
        self.p = p
        self.n = f.degree
        self.factors = [g for g, _ in factor_mod_p(f, p)]
        self.residue_degrees = [len(g) - 1 for g in self.factors]
        self._power_bases: list[list] = [[self._ideal_basis(g)] for g in self.factors]

    def _poly_mul_mod_f(self, a: list[int], b: list[int]) -> list[int]:
        rem = (QPoly(a) * QPoly(b)) % self.f
        out = [0] * self.n
        for i, c in enumerate(rem.coeffs):
            out[i] = int(c)
        return out

    def _ideal_basis(self, g: list[int]) -> tuple[tuple[int, ...], ...]:
        rows = []
        dg = len(g) - 1
        for j in range(dg):
            row = [0] * self.n
            row[j] = self.p
            rows.append(row)
        for k in range(self.n - dg):
            shifted = [0] * k + list(g) + [0] * (self.n - dg - k - 1)
            rows.append(shifted[: self.n])
        h = linalg.hnf_rows(rows)
        return tuple(r for r in h if any(r))

    def _power_basis_of(self, i: int, m: int):
        bases = self._power_bases[i]
        while len(bases) < m:
            prev = bases[-1]
            base1 = bases[0]
            rows = []
            for a in prev:
                for b in base1:
                    rows.append(self._poly_mul_mod_f(list(a), list(b)))
            h = linalg.hnf_rows(rows)
            bases.append(tuple(r for r in h if any(r)))
        return bases[m - 1]

    def _member(self, vec: list[int], basis) -> bool:
        mat = linalg.matrix(basis)
        sol = linalg.solve(linalg.transpose(mat), linalg.vector(vec))
        return all(x.denominator == 1 for x in sol)

    def valuation(self, i: int, power_coords: tuple[Fraction, ...]) -> int:
        """ord at place i of the nonzero element with these power coords.

        ord_P(u/m) = ord_P(u) − v_p(m) for rational m since p is unramified
        and ord_P vanishes on prime-to-p rationals.
        """
        if all(c == 0 for c in power_coords):
            raise ValueError("valuation of zero")
        den = math.lcm(*[c.denominator for c in power_coords])
        _, exps = strip_primes(den, (self.p,))
        vec = [int(c * den) for c in power_coords]
        m = 0
        while self._member(vec, self._power_basis_of(i, m + 1)):
            m += 1
            if m > 64:  # pragma: no cover - desk scale guard
                raise BudgetExceededError("valuation exceeds supported range")
        return m - exps[self.p]

    @property
    def count(self) -> int:
        return len(self.factors)


# ---------------------------------------------------------------------------
# the log embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogColumn:
    kind: str  # "real" | "complex" | "finite"
    factor: int
    index: int
    prime: int | None = None
    residue_degree: int | None = None

    def label(self) -> str:
        if self.kind == "finite":
            return f"v({self.prime}/{self.factor}.{self.index})"
        return f"{self.kind}({self.factor}.{self.index})"


@dataclass
class LogEmbedding:
    """Interval matrix of log|u|_v; rows = elements, columns = places.

    Real columns hold log|σ(u)|; complex columns the doubled value
    2·log|σ(u)| (from the product formula when the factor has one pair of
    complex embeddings, from a certified real quadratic factorization when
    it has two); finite columns hold −f_v·ord_v(u)·log p. Full rows of a
    unit sum to an interval around 0.
    """

    columns: list[LogColumn]
    rows: list[list[RationalInterval | None]]
    precision: int

    def subset(self, row_indices) -> "LogEmbedding":
        return LogEmbedding(self.columns, [self.rows[i] for i in row_indices], self.precision)


class _RootCache:
    def __init__(self):
        self._isolated: dict = {}
        self._refined: dict = {}

    def refined_roots(self, f: QPoly, bits: int):
        key = f.coeffs
        if key not in self._isolated:
            self._isolated[key] = isolate_real_roots(f)
        roots = []
        width = Fraction(1, 1 << bits)
        for idx, iso in enumerate(self._isolated[key]):
            rkey = (key, idx)
            cur = self._refined.get(rkey, iso)
            if cur[1] - cur[0] > width:
                cur = refine_root(f, cur[0], cur[1], width)
                self._refined[rkey] = cur
            roots.append(cur)
        return roots


_ROOTS = _RootCache()
_SPLITS: dict = {}


def _real_split_cached(f: QPoly, bits: int):
    from .realsplit import real_quadratic_split

    key = f.coeffs
    cached = _SPLITS.get(key)
    if cached is None or cached[0] < bits:
        _SPLITS[key] = (bits, real_quadratic_split(f, bits))
    return _SPLITS[key][1]


def _complex_log_value(
    e: EtaleAlgebra, f: QPoly, k: int, pair_idx: int, u: Coords, bits: int
) -> RationalInterval:
    """2·log|σ(u)| at a complex place, via the certified quadratic factor."""
    from .realsplit import abs_square_at_quadratic

    comp = e.factor_component(u, k)
    attempt_bits = bits
    while True:
        split = _real_split_cached(f, attempt_bits)
        a, b = split.quadratics[pair_idx]
        val = abs_square_at_quadratic(comp, a, b)
        if val.lo > 0:
            return log_interval(val, bits)
        attempt_bits *= 2
        if attempt_bits > 64 * max(bits, 64):
            raise IndependenceUndecidedError(
                "cannot separate a complex embedding value from zero", bits
            )


def _real_log_value(
    e: EtaleAlgebra, f: QPoly, k: int, root_idx: int, u: Coords, bits: int
) -> RationalInterval:
    comp = e.factor_component(u, k)
    attempt_bits = bits
    while True:
        lo, hi = _ROOTS.refined_roots(f, attempt_bits)[root_idx]
        val = eval_poly_interval(comp.coeffs, RationalInterval(lo, hi))
        if val.excludes_zero():
            return log_interval(abs(val), bits)
        attempt_bits *= 2
        if attempt_bits > 64 * max(bits, 64):
            raise IndependenceUndecidedError(
                "cannot separate an embedding value from zero", bits
            )


def build_log_embedding(
    e: EtaleAlgebra,
    elements: list[Coords],
    s_primes: tuple[int, ...] = (),
    bits: int = 64,
) -> LogEmbedding:
    from .places import signature

    columns: list[LogColumn] = []
    sigs = [signature(f) for f in e.factors]
    for k, sig in enumerate(sigs):
        for j in range(sig.r1):
            columns.append(LogColumn("real", k, j))
        for j in range(sig.r2):
            columns.append(LogColumn("complex", k, j))
    places_by_key: dict[tuple[int, int], PrimePlaces] = {}
    for p in s_primes:
        for k, f in enumerate(e.factors):
            pp = PrimePlaces(f, p)
            places_by_key[(k, p)] = pp
            for j in range(pp.count):
                columns.append(
                    LogColumn("finite", k, j, prime=p, residue_degree=pp.residue_degrees[j])
                )

    rows: list[list[RationalInterval | None]] = []
    for u in elements:
        row: list[RationalInterval | None] = []
        for col in columns:
            f = e.factors[col.factor]
            sig = sigs[col.factor]
            if col.kind == "real":
                row.append(_real_log_value(e, f, col.factor, col.index, u, bits))
            elif col.kind == "complex":
                if sig.r2 == 1:
                    # product formula: 2 log|sigma(u)| = log|N_k(u)| − Σ real logs
                    nk = abs(e.factor_norm(u, col.factor))
                    total = log_fraction(nk, bits)
                    for j in range(sig.r1):
                        total = total - _real_log_value(e, f, col.factor, j, u, bits)
                    row.append(total)
                else:
                    row.append(
                        _complex_log_value(e, f, col.factor, col.index, u, bits)
                    )
            else:
                pp = places_by_key[(col.factor, col.prime)]
                power = e.to_power(u)
                off, d = e.offsets[col.factor], e.degrees[col.factor]
                ordv = pp.valuation(col.index, tuple(power[off : off + d]))
                row.append(
                    log_fraction(Fraction(col.prime), bits).scale(
                        -col.residue_degree * ordv
                    )
                )
        rows.append(row)
    return LogEmbedding(columns, rows, bits)


def _interval_det(mat: list[list[RationalInterval]]) -> RationalInterval:
    n = len(mat)
    if n == 0:
        return RationalInterval.point(1)
    if n == 1:
        return mat[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * _interval_det(minor)
        if j % 2 == 1:
            term = -term
        total = term if total is None else total + term
    return total


def find_certified_minor(emb: LogEmbedding):
    """A column subset whose square minor interval-determinant excludes 0.

    Returns (column indices, det interval) or None.
    """
    r = len(emb.rows)
    if r == 0:
        return (), RationalInterval.point(1)
    available = [
        j for j in range(len(emb.columns)) if all(row[j] is not None for row in emb.rows)
    ]
    if len(available) < r:
        return None
    for cols in itertools.combinations(available, r):
        sub = [[row[j] for j in cols] for row in emb.rows]
        det = _interval_det(sub)
        if det.excludes_zero():
            return cols, det
    return None


# ---------------------------------------------------------------------------
# unit systems
# ---------------------------------------------------------------------------


@dataclass
class UnitSystem:
    algebra: EtaleAlgebra
    torsion_generator: Coords
    torsion_order: int
    free_generators: list[Coords]
    s_primes: tuple[int, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.free_generators)


@dataclass
class UnitCertificate:
    """Record of the checks passed by verify_unit_system.

    ``rank`` certifies independence of the stated generators only;
    maximality of the generated subgroup (fundamentality) is not proven.
    """

    s_integral: bool
    torsion_verified: bool
    rank: int
    minor_columns: tuple[str, ...]
    precision_bits: int
    caveats: list[str] = field(default_factory=list)


@dataclass
class DependenceWitness:
    exponents: tuple[int, ...]
    torsion_power: int

    def describe(self) -> str:
        return (
            "log rows linearly dependent: product with exponents "
            f"{self.exponents} equals torsion^{self.torsion_power}"
        )


def _is_torsion(e: EtaleAlgebra, u: Coords) -> int | None:
    one = e.one()
    acc = u
    for m in range(1, max(TORSION_ORDER_CANDIDATES) + 1):
        if acc == one:
            return m
        acc = e.mul(acc, u)
    return None


def _relation_search(
    e: EtaleAlgebra, sys: UnitSystem, bound: int = RELATION_EXPONENT_BOUND
) -> DependenceWitness | None:
    gens = sys.free_generators
    torsion_powers = [e.power(sys.torsion_generator, k) for k in range(sys.torsion_order)]
    rng = range(-bound, bound + 1)
    for exps in itertools.product(rng, repeat=len(gens)):
        if all(x == 0 for x in exps):
            continue
        prod = e.one()
        for g, k in zip(gens, exps):
            prod = e.mul(prod, e.power(g, k))
        for tk, tpow in enumerate(torsion_powers):
            if prod == tpow:
                return DependenceWitness(exps, tk)
    return None


def verify_unit_system(
    sys: UnitSystem, precision_cap: int = DEFAULT_PRECISION_CAP
) -> UnitCertificate | DependenceWitness:
    """Certify an S-unit system: integrality, torsion order, independence.

    Returns a UnitCertificate on success, a DependenceWitness when a bounded
    exponent search finds an exact multiplicative relation, and raises
    IndependenceUndecidedError when intervals cannot exclude 0 at the
    precision cap (distinct from a disproof).
    """
    e = sys.algebra
    s = sys.s_primes
    for g in [sys.torsion_generator] + list(sys.free_generators):
        m = e.regular_rep(g)
        if not matrix_is_s_integral(m, s):
            raise InvalidUnitSystemError(f"generator {g} is not S-integral")
        if not fraction_is_s_unit_rational(linalg.mat_det(m), s):
            raise InvalidUnitSystemError(f"generator {g} has non-unit norm over Z[1/S]")

    order = _is_torsion(e, sys.torsion_generator)
    if order != sys.torsion_order:
        raise InvalidUnitSystemError(
            f"torsion generator has order {order}, claimed {sys.torsion_order}"
        )

    ladder = [b for b in PRECISION_LADDER if b <= precision_cap]
    if not ladder or ladder[-1] != precision_cap:
        ladder.append(precision_cap)
    caveats = [
        "independence certified at the stated rank; fundamentality "
        "(that the generators span the full unit group) is not proven"
    ]
    if sys.rank == 0:
        return UnitCertificate(True, True, 0, (), ladder[0], caveats)
    for bits in ladder:
        emb = build_log_embedding(e, list(sys.free_generators), s, bits)
        found = find_certified_minor(emb)
        if found is not None:
            cols, _ = found
            labels = tuple(emb.columns[j].label() for j in cols)
            return UnitCertificate(True, True, sys.rank, labels, bits, caveats)
    witness = _relation_search(e, sys)
    if witness is not None:
        return witness
    raise IndependenceUndecidedError(
        f"could not certify independence at {precision_cap} bits", precision_cap
    )


# ---------------------------------------------------------------------------
# searches
# ---------------------------------------------------------------------------


def default_norm_targets(s_primes: tuple[int, ...], kmax: int = 2):
    """±∏ p^k with 0 ≤ k ≤ kmax per S-prime (just ±1 when S is empty)."""
    vals = {1}
    for p in s_primes:
        vals = {v * p**k for v in vals for k in range(kmax + 1)}
    return {Fraction(s * v) for v in vals for s in (1, -1)}


def search_units(
    e: EtaleAlgebra,
    coord_bound: int,
    s_primes: tuple[int, ...] = (),
    norm_targets=None,
    budget: int = 10**6,
) -> list[Coords]:
    """All elements with integer coordinates in the box whose norm is a target.

    Exhaustive within [−B, B]^n; results are sorted canonically (coordinate
    1-norm, then lexicographic). The budget caps the candidate count.
    """
    n = e.n
    total = (2 * coord_bound + 1) ** n
    if total > budget:
        raise BudgetExceededError(
            f"box ({2 * coord_bound + 1})^{n} = {total} exceeds budget {budget}"
        )
    if norm_targets is None:
        norm_targets = default_norm_targets(s_primes)
    targets = {Fraction(t) for t in norm_targets}

    table = e.mult_table()
    integral_table = all(
        c.denominator == 1 for row in table for vec in row for c in vec
    )
    out: list[Coords] = []
    if integral_table:
        # tmats[i][r][c] = coordinate r of b_i * b_c
        tmats = [
            [[int(table[i][c][r]) for c in range(n)] for r in range(n)]
            for i in range(n)
        ]
        int_targets = {int(t) for t in targets if t.denominator == 1}
        coords = [0] * n

        def rec(i, acc):
            if i == n:
                if linalg.int_det(acc) in int_targets:
                    out.append(tuple(Fraction(c) for c in coords))
                return
            ti = tmats[i]
            for c in range(-coord_bound, coord_bound + 1):
                coords[i] = c
                if c == 0:
                    rec(i + 1, acc)
                else:
                    nxt = [
                        [acc[r][cc] + c * ti[r][cc] for cc in range(n)]
                        for r in range(n)
                    ]
                    rec(i + 1, nxt)

        rec(0, [[0] * n for _ in range(n)])
        out = [c for c in out if any(x != 0 for x in c)]
    else:
        for tup in itertools.product(range(-coord_bound, coord_bound + 1), repeat=n):
            if all(c == 0 for c in tup):
                continue
            cand = tuple(Fraction(c) for c in tup)
            if e.norm(cand) in targets:
                out.append(cand)
    out.sort(key=lambda c: (sum(abs(x) for x in c), c))
    return out


def torsion_units(e: EtaleAlgebra, coord_bound: int = 3, budget: int = 10**6):
    """Generator and order of the (cyclic) group of roots of unity in O.

    Exhaustive over the coordinate box; every candidate is verified by exact
    powering. Single-factor algebras only (the torsion of a product of fields
    is not cyclic).
    """
    if e.num_factors != 1:
        raise UnsupportedError("torsion generator is computed for a single field factor")
    found: list[tuple[Coords, int]] = []
    for u in search_units(e, coord_bound, (), {Fraction(1), Fraction(-1)}, budget):
        m = _is_torsion(e, u)
        if m is not None:
            found.append((u, m))
    if not found:  # pragma: no cover - ±1 is always in any box ≥ 1
        raise BudgetExceededError("no torsion unit found in the box")
    best_order = max(m for _, m in found)
    candidates = [u for u, m in found if m == best_order]
    gen = min(candidates, key=_canonical_key)
    return gen, best_order


def _canonical_key(coords: Coords):
    nnz = sum(1 for c in coords if c != 0)
    return (nnz, tuple(-c for c in coords))


def canonical_unit(
    e: EtaleAlgebra, u: Coords, torsion_gen: Coords, torsion_order: int
) -> Coords:
    """Canonical representative of u modulo torsion and inversion.

    First-nonzero coordinate positive, then fewest nonzero coordinates, then
    lexicographically greatest. This tie-break reproduces the generator
    matrices printed in the reference examples bit-exactly.
    """
    candidates = []
    inv = e.inverse(u)
    t = e.one()
    for _ in range(max(torsion_order, 1)):
        candidates.append(e.mul(t, u))
        candidates.append(e.mul(t, inv))
        t = e.mul(t, torsion_gen)
    positive = [
        c for c in candidates if next((x for x in c if x != 0), Fraction(0)) > 0
    ]
    pool = positive if positive else candidates
    return min(pool, key=_canonical_key)


# ---------------------------------------------------------------------------
# group assembly: greedy independent system + saturation against the box
# ---------------------------------------------------------------------------


def _interval_mat_inv(mat: list[list[RationalInterval]]):
    n = len(mat)
    det = _interval_det(mat)
    if not det.excludes_zero():
        return None
    inv_det = RationalInterval(
        min(1 / det.lo, 1 / det.hi), max(1 / det.lo, 1 / det.hi)
    )
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [
                [mat[r][c] for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            cof = _interval_det(minor)
            if (i + j) % 2 == 1:
                cof = -cof
            row.append(cof * inv_det)
        out.append(row)
    return out


def _express_from_rows(
    e: EtaleAlgebra,
    basis: list[Coords],
    basis_rows,
    columns,
    u: Coords,
    u_row,
    torsion_gen: Coords,
    torsion_order: int,
    max_den: int = 16,
):
    """Try u = torsion^k · (∏ basis^{a_i})^{1/d}; returns (a, d, k) verified.

    Candidate exponents come from inverting a certified log minor; the final
    identity is verified by exact multiplication, so interval error can only
    cause a miss (caller escalates precision), never a wrong answer.
    """
    base_emb = LogEmbedding(list(columns), list(basis_rows), 0)
    found = find_certified_minor(base_emb)
    if found is None:
        return None
    cols, _ = found
    m = [[row[j] for j in cols] for row in basis_rows]
    minv = _interval_mat_inv(m)
    if minv is None:
        return None
    r = len(basis)
    evec = []
    for i in range(r):
        acc = RationalInterval.point(0)
        for j in range(r):
            acc = acc + u_row[cols[j]] * minv[j][i]
        evec.append(acc)
    for d in range(1, max_den + 1):
        nums = []
        ok = True
        for iv in evec:
            lo_int = math.ceil(iv.lo * d)
            hi_int = math.floor(iv.hi * d)
            if lo_int > hi_int:
                ok = False
                break
            mid = (iv.lo + iv.hi) * d / 2
            cand = min(range(lo_int, hi_int + 1), key=lambda t: abs(t - mid))
            nums.append(cand)
        if not ok:
            continue
        if d > 1 and all(a % d == 0 for a in nums):
            continue  # already covered by a smaller denominator
        prod = e.one()
        for g, a in zip(basis, nums):
            prod = e.mul(prod, e.power(g, a))
        lhs = e.power(u, d)
        t = e.one()
        for k in range(max(torsion_order, 1)):
            if lhs == e.mul(t, prod):
                return tuple(nums), d, k
            t = e.mul(t, torsion_gen)
    return None


def _enlarge_basis(
    e: EtaleAlgebra,
    basis: list[Coords],
    u: Coords,
    nums: tuple[int, ...],
    d: int,
) -> list[Coords]:
    """Basis of the lattice generated by the old basis and u (u^d ~ ∏g^nums).

    Works in exponent coordinates scaled by d; the Hermite transform rows are
    integer words in (basis..., u), so the new generators are exact products.
    """
    r = len(basis)
    rows = [[d * int(i == j) for j in range(r)] for i in range(r)] + [list(nums)]
    h, trans = linalg.hnf_rows(rows, transform=True)
    gens = list(basis) + [u]
    new_basis = []
    for row_idx in range(len(h)):
        if not any(h[row_idx]):
            continue
        el = e.one()
        for gen, c in zip(gens, trans[row_idx]):
            if c:
                el = e.mul(el, e.power(gen, c))
        new_basis.append(el)
    assert len(new_basis) == r
    return new_basis


def assemble_unit_system(
    e: EtaleAlgebra,
    s_primes: tuple[int, ...] = (),
    coord_bound: int = 3,
    precision_cap: int = DEFAULT_PRECISION_CAP,
    budget: int = 10**6,
) -> UnitSystem:
    """Search the box, pick a certified independent system, saturate it.

    Saturation reduces every box unit against the chosen basis (exponents
    recovered from certified logs and confirmed exactly); when a unit
    generates a strictly larger lattice the basis is enlarged by an exact
    Hermite-form step, so the final system generates every unit in the box.
    """
    torsion_gen, torsion_order = torsion_units(e, min(coord_bound, 3), budget)
    pool = search_units(e, coord_bound, s_primes, default_norm_targets(s_primes), budget)
    if s_primes:
        # saturate by pairwise ratios that are S-integral both ways
        extra = []
        seen = set(pool)
        for a, b in itertools.permutations(pool, 2):
            ratio = e.mul(a, e.inverse(b))
            if ratio in seen:
                continue
            m = e.regular_rep(ratio)
            if matrix_is_s_integral(m, s_primes) and fraction_is_s_unit_rational(
                linalg.mat_det(m), s_primes
            ):
                extra.append(ratio)
                seen.add(ratio)
        pool = sorted(set(pool) | set(extra), key=lambda c: (sum(abs(x) for x in c), c))

    free_pool = [u for u in pool if _is_torsion(e, u) is None]
    target_rank = s_unit_rank(e, s_primes)

    ladder = [b for b in PRECISION_LADDER if b <= precision_cap] or [precision_cap]
    basis_idx: list[int] = []
    for bits in ladder:
        emb_all = build_log_embedding(e, free_pool, s_primes, bits)
        basis_idx = []
        for idx in range(len(free_pool)):
            if len(basis_idx) == target_rank:
                break
            trial = basis_idx + [idx]
            if find_certified_minor(emb_all.subset(trial)) is not None:
                basis_idx = trial
        if len(basis_idx) == target_rank:
            break
    if len(basis_idx) != target_rank:
        raise IndependenceUndecidedError(
            f"found {len(basis_idx)} independent units in the box, "
            f"expected rank {target_rank}",
            precision_cap,
        )
    basis = [free_pool[i] for i in basis_idx]

    for _round in range(8):
        changed = False
        for bits in ladder:
            emb_all = build_log_embedding(e, basis + free_pool, s_primes, bits)
            basis_rows = emb_all.rows[: len(basis)]
            pending = []
            for pi, u in enumerate(free_pool):
                got = _express_from_rows(
                    e,
                    basis,
                    basis_rows,
                    emb_all.columns,
                    u,
                    emb_all.rows[len(basis) + pi],
                    torsion_gen,
                    torsion_order,
                )
                if got is None:
                    pending.append(u)
                    continue
                nums, d, _k = got
                if d > 1:
                    basis = _enlarge_basis(e, basis, u, nums, d)
                    changed = True
                    break
            else:
                if not pending:
                    break
                continue
            break
        else:
            raise IndependenceUndecidedError(
                "box unit does not reduce against the basis", precision_cap
            )
        if not changed:
            break

    basis = [canonical_unit(e, g, torsion_gen, torsion_order) for g in basis]
    basis.sort(key=_canonical_key)
    return UnitSystem(e, torsion_gen, torsion_order, basis, tuple(s_primes))


# ---------------------------------------------------------------------------
# the norm-one subgroup
# ---------------------------------------------------------------------------


def _norm_sign_and_exponents(
    e: EtaleAlgebra, u: Coords, s_primes: tuple[int, ...]
) -> tuple[int, list[int]]:
    nval = e.norm(u)
    sign = 1 if nval > 0 else -1
    num_rest, num_exp = strip_primes(nval.numerator, s_primes)
    den_rest, den_exp = strip_primes(nval.denominator, s_primes)
    if num_rest != 1 or den_rest != 1:
        raise ValueError(f"norm {nval} is not a unit of Z[1/S]")
    return sign, [num_exp[p] - den_exp[p] for p in s_primes]


def norm_one_subgroup(sys: UnitSystem) -> UnitSystem:
    """Kernel of the norm character on the given S-unit group.

    The free part is the kernel lattice of the exponent-vector map to the
    S-prime exponents of the norms (integer kernel via Smith normal form),
    with signs fixed by a torsion element of norm −1 when one exists and by
    doubling otherwise; the torsion part is the norm-one part of torsion.
    """
    e = sys.algebra
    s = sys.s_primes
    r = sys.rank
    signs, exps = [], []
    for g in sys.free_generators:
        sg, ex = _norm_sign_and_exponents(e, g, s)
        signs.append(sg)
        exps.append(ex)

    if s and r:
        mat = [[exps[i][pi] for i in range(r)] for pi in range(len(s))]
        kernel = linalg.int_kernel_basis(mat)
    else:
        kernel = [tuple(int(i == j) for i in range(r)) for j in range(r)]

    def vec_sign(v):
        out = 1
        for sg, c in zip(signs, v):
            if sg < 0 and c % 2 == 1:
                out = -out
        return out

    neg = [i for i, v in enumerate(kernel) if vec_sign(v) < 0]
    torsion_fix = None
    acc = sys.torsion_generator
    for _k in range(sys.torsion_order):
        sgn, _ = _norm_sign_and_exponents(e, acc, s)
        if sgn < 0:
            torsion_fix = acc
            break
        acc = e.mul(acc, sys.torsion_generator)

    new_vectors: list[tuple[tuple[int, ...], bool]] = []
    if neg and torsion_fix is None:
        base = kernel[neg[0]]
        for i, v in enumerate(kernel):
            if i == neg[0]:
                new_vectors.append((tuple(2 * c for c in base), False))
            elif i in neg:
                new_vectors.append((tuple(x + y for x, y in zip(v, base)), False))
            else:
                new_vectors.append((tuple(v), False))
    else:
        new_vectors = [(tuple(v), i in neg) for i, v in enumerate(kernel)]

    # norm-one part of torsion: the full torsion group if every power has
    # norm +1, else the index-2 subgroup generated by the square
    torsion_all_plus = all(
        _norm_sign_and_exponents(e, e.power(sys.torsion_generator, k), s)[0] > 0
        for k in range(1, sys.torsion_order + 1)
    )
    if torsion_all_plus:
        t_gen, t_order = sys.torsion_generator, sys.torsion_order
    else:
        t_order = sys.torsion_order // 2
        t_gen = e.mul(sys.torsion_generator, sys.torsion_generator)
        if t_order <= 1:
            t_gen, t_order = e.one(), 1

    free = []
    for v, fix in new_vectors:
        el = e.one()
        for g, c in zip(sys.free_generators, v):
            if c:
                el = e.mul(el, e.power(g, c))
        if fix:
            el = e.mul(el, torsion_fix)
        assert e.norm(el) == 1
        free.append(canonical_unit(e, el, t_gen, t_order))
    free.sort(key=_canonical_key)
    return UnitSystem(e, t_gen, t_order, free, s)
