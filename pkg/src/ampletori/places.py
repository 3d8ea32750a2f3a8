"""Per-place decomposition data for number fields of degree at most 4.

A field Q[x]/(f) comes with the transitive action of the Galois group of its
splitting field on the deg(f) embeddings. The nine groups that occur through
degree 4 are stored with their full element lists and rational character
tables (the characters drive the module decomposition in the torus layer).
Decomposition groups are cyclic here: generated by complex conjugation at the
real place and by Frobenius at an unramified prime, both known through their
cycle type. Ramified primes are a hard error — the artifact never guesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NoSuchElementError, RamifiedPlaceError, UnsupportedError
from .polynomials import (
    QPoly,
    discriminant,
    factor_mod_p,
    is_irreducible_q,
    is_prime,
    is_square_integer,
    rational_roots,
    sturm_count_real_roots,
)

Perm = tuple[int, ...]

INF = "inf"
Place = int | str  # a prime, or the string "inf"


def perm_compose(a: Perm, b: Perm) -> Perm:
    """(a∘b)(x) = a[b[x]]."""
    return tuple(a[b[i]] for i in range(len(a)))


def perm_order(a: Perm) -> int:
    n = len(a)
    k, p = 1, a
    ident = tuple(range(n))
    while p != ident:
        p = perm_compose(p, a)
        k += 1
    return k


def cycle_type(a: Perm) -> tuple[int, ...]:
    """Cycle lengths, sorted ascending (fixed points included)."""
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = a[j]
                length += 1
            out.append(length)
    return tuple(sorted(out))


def orbits_of(perms: list[Perm], n: int) -> tuple[tuple[int, ...], ...]:
    """Orbit partition of {0..n-1} under the group generated by perms."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i in range(n):
            a, b = find(i), find(p[i])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(sorted(v)) for _, v in sorted(groups.items()))


@dataclass(frozen=True)
class Signature:
    r1: int
    r2: int

    @property
    def degree(self) -> int:
        return self.r1 + 2 * self.r2


@dataclass(frozen=True)
class RationalCharacter:
    """A Q-irreducible character: name, dimension, value on each element."""

    name: str
    dim: int
    values: tuple[Fraction, ...]


@dataclass(frozen=True)
class GaloisTag:
    """A finite group with a permutation action on the embeddings.

    ``elements`` lists every group element as a permutation (index 0 is the
    identity); ``characters`` holds the rational character table indexed the
    same way. The standard tags built by :func:`galois_group_small` act
    transitively on deg(f) points.
    """

    group: str
    elements: tuple[Perm, ...]
    characters: tuple[RationalCharacter, ...]

    @property
    def degree(self) -> int:
        return len(self.elements[0])

    @property
    def order(self) -> int:
        return len(self.elements)

    def find_by_cycle_type(self, ctype: tuple[int, ...]) -> Perm:
        for g in sorted(self.elements):
            if cycle_type(g) == ctype:
                return g
        raise NoSuchElementError(
            f"group {self.group} has no element of cycle type {ctype}"
        )


def _closure(generators: list[Perm], n: int) -> list[Perm]:
    ident = tuple(range(n))
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in generators:
                h = perm_compose(g, e)
                if h not in elements:
                    elements.add(h)
                    nxt.append(h)
        frontier = nxt
    return [ident] + sorted(elements - {ident})


def _chars_by_cycle_type(elements, table: dict[tuple[int, ...], dict[str, int]], dims):
    chars = []
    for name, dim in dims:
        values = tuple(Fraction(table[cycle_type(g)][name]) for g in elements)
        chars.append(RationalCharacter(name, dim, values))
    return tuple(chars)


def _build_c1() -> GaloisTag:
    e = ((0,),)
    return GaloisTag("C1", e, (RationalCharacter("triv", 1, (Fraction(1),)),))


def _build_c2() -> GaloisTag:
    els = ((0, 1), (1, 0))
    return GaloisTag(
        "C2",
        els,
        (
            RationalCharacter("triv", 1, (Fraction(1), Fraction(1))),
            RationalCharacter("sgn", 1, (Fraction(1), Fraction(-1))),
        ),
    )


def _build_c3() -> GaloisTag:
    r = (1, 2, 0)
    els = (tuple(range(3)), r, perm_compose(r, r))
    return GaloisTag(
        "C3",
        els,
        (
            RationalCharacter("triv", 1, (Fraction(1),) * 3),
            RationalCharacter("omega-pair", 2, (Fraction(2), Fraction(-1), Fraction(-1))),
        ),
    )


def _build_s3() -> GaloisTag:
    els = tuple(_closure([(1, 0, 2), (1, 2, 0)], 3))
    table = {
        (1, 1, 1): {"triv": 1, "sgn": 1, "std": 2},
        (1, 2): {"triv": 1, "sgn": -1, "std": 0},
        (3,): {"triv": 1, "sgn": 1, "std": -1},
    }
    return GaloisTag(
        "S3", els, _chars_by_cycle_type(els, table, [("triv", 1), ("sgn", 1), ("std", 2)])
    )


def _build_c4() -> GaloisTag:
    r = (1, 2, 3, 0)
    els = (tuple(range(4)), r, perm_compose(r, r), perm_compose(r, perm_compose(r, r)))
    table = {
        (1, 1, 1, 1): {"triv": 1, "sgn": 1, "i-pair": 2},
        (4,): {"triv": 1, "sgn": -1, "i-pair": 0},
        (2, 2): {"triv": 1, "sgn": 1, "i-pair": -2},
    }
    return GaloisTag(
        "C4", els, _chars_by_cycle_type(els, table, [("triv", 1), ("sgn", 1), ("i-pair", 2)])
    )


def _build_v4() -> GaloisTag:
    e = (0, 1, 2, 3)
    a = (1, 0, 3, 2)
    b = (2, 3, 0, 1)
    ab = perm_compose(a, b)
    els = (e, a, b, ab)
    signs = {"triv": (1, 1), "chi1": (1, -1), "chi2": (-1, 1), "chi3": (-1, -1)}
    chars = []
    for name, (sa, sb) in signs.items():
        vals = (Fraction(1), Fraction(sa), Fraction(sb), Fraction(sa * sb))
        chars.append(RationalCharacter(name, 1, vals))
    return GaloisTag("V4", els, tuple(chars))


def _build_d4() -> GaloisTag:
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)  # reflection fixing 0 and 2
    els = []
    words = []
    g = tuple(range(4))
    for a_exp in range(4):
        els.append(g)
        words.append((a_exp, 0))
        g = perm_compose(r, g)
    g = s
    for a_exp in range(4):
        els.append(g)
        words.append((a_exp, 1))
        g = perm_compose(r, g)
    chars = []
    for name, (alpha, beta) in {
        "triv": (1, 1),
        "chi-r": (1, -1),
        "chi-s": (-1, 1),
        "chi-rs": (-1, -1),
    }.items():
        vals = tuple(Fraction(alpha**a * beta**b) for a, b in words)
        chars.append(RationalCharacter(name, 1, vals))
    twodim = {0: 2, 1: 0, 2: -2, 3: 0}
    vals = tuple(Fraction(twodim[a] if b == 0 else 0) for a, b in words)
    chars.append(RationalCharacter("std2", 2, vals))
    return GaloisTag("D4", tuple(els), tuple(chars))


def _build_a4() -> GaloisTag:
    els = tuple(_closure([(1, 0, 3, 2), (1, 2, 0, 3)], 4))
    assert len(els) == 12
    table = {
        (1, 1, 1, 1): {"triv": 1, "omega-pair": 2, "std": 3},
        (2, 2): {"triv": 1, "omega-pair": 2, "std": -1},
        (1, 3): {"triv": 1, "omega-pair": -1, "std": 0},
    }
    return GaloisTag(
        "A4",
        els,
        _chars_by_cycle_type(els, table, [("triv", 1), ("omega-pair", 2), ("std", 3)]),
    )


def _build_s4() -> GaloisTag:
    els = tuple(_closure([(1, 0, 2, 3), (1, 2, 3, 0)], 4))
    assert len(els) == 24
    table = {
        (1, 1, 1, 1): {"triv": 1, "sgn": 1, "two": 2, "std": 3, "stdsgn": 3},
        (1, 1, 2): {"triv": 1, "sgn": -1, "two": 0, "std": 1, "stdsgn": -1},
        (2, 2): {"triv": 1, "sgn": 1, "two": 2, "std": -1, "stdsgn": -1},
        (1, 3): {"triv": 1, "sgn": 1, "two": -1, "std": 0, "stdsgn": 0},
        (4,): {"triv": 1, "sgn": -1, "two": 0, "std": -1, "stdsgn": 1},
    }
    return GaloisTag(
        "S4",
        els,
        _chars_by_cycle_type(
            els,
            table,
            [("triv", 1), ("sgn", 1), ("two", 2), ("std", 3), ("stdsgn", 3)],
        ),
    )


STANDARD_TAGS = {
    "C1": _build_c1,
    "C2": _build_c2,
    "C3": _build_c3,
    "S3": _build_s3,
    "C4": _build_c4,
    "V4": _build_v4,
    "D4": _build_d4,
    "A4": _build_a4,
    "S4": _build_s4,
}


def standard_tag(name: str) -> GaloisTag:
    if name not in STANDARD_TAGS:
        raise UnsupportedError(f"unknown Galois tag {name!r}")
    return STANDARD_TAGS[name]()


def regular_action(tag: GaloisTag) -> GaloisTag:
    """The same group acting on itself by left multiplication.

    Used to build modules with repeated components (the standard rep of S3
    appears twice in its regular permutation module), which is how the
    not-multiplicity-free error path is exercised.
    """
    index = {g: i for i, g in enumerate(tag.elements)}
    perms = tuple(
        tuple(index[perm_compose(g, h)] for h in tag.elements) for g in tag.elements
    )
    return GaloisTag(tag.group + "-regular", perms, tag.characters)


@dataclass(frozen=True)
class PlaceProfile:
    """Decomposition data at one place: orbit partition of the embeddings."""

    place: Place
    orbits: tuple[tuple[int, ...], ...]
    generator: Perm

    @property
    def num_places_over(self) -> int:
        return len(self.orbits)

    def place_str(self) -> str:
        return INF if self.place == INF else f"p:{self.place}"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def signature(f: QPoly) -> Signature:
    """(r1, r2) of the field Q[x]/(f); r1 is the Sturm real-root count."""
    r1 = sturm_count_real_roots(f)
    if (f.degree - r1) % 2 != 0:
        raise AssertionError("deg - r1 must be even; upstream Sturm bug")
    return Signature(r1, (f.degree - r1) // 2)


def check_unramified(f: QPoly, p: int):
    if not is_prime(p):
        raise UnsupportedError(f"{p} is not prime")
    disc = discriminant(f)
    if disc % p == 0:
        raise RamifiedPlaceError(p, disc)


def places_over_p(f: QPoly, p: int) -> int:
    """Number of places of Q[x]/(f) over an unramified prime p."""
    check_unramified(f, p)
    return len(factor_mod_p(f, p))


def frobenius_cycle_type(f: QPoly, p: int) -> tuple[int, ...]:
    check_unramified(f, p)
    return tuple(sorted(len(g) - 1 for g, _ in factor_mod_p(f, p)))


def galois_group_small(f: QPoly) -> GaloisTag:
    """Galois group of the splitting field for monic irreducible f, deg ≤ 4.

    Degree 3 uses the discriminant-square test; degree 4 factors the cubic
    resolvent over Q and distinguishes C4 from D4 by the Kappe–Warren
    quadratic criterion over Q(√disc).
    """
    if f.degree > 4:
        raise UnsupportedError("Galois groups are only computed through degree 4")
    if not is_irreducible_q(f):
        raise ValueError(f"{f!r} is not irreducible over Q")
    d = f.degree
    if d == 1:
        return standard_tag("C1")
    if d == 2:
        return standard_tag("C2")
    disc = discriminant(f)
    if d == 3:
        return standard_tag("C3" if is_square_integer(disc) else "S3")
    a, b, c, dd = (f.coeffs[3], f.coeffs[2], f.coeffs[1], f.coeffs[0])
    resolvent = QPoly(
        [-(a * a * dd - 4 * b * dd + c * c), a * c - 4 * dd, -b, Fraction(1)]
    )
    roots = rational_roots(resolvent)
    if len(roots) == 0:
        return standard_tag("A4" if is_square_integer(disc) else "S4")
    if len(roots) == 3:
        return standard_tag("V4")
    beta = roots[0]

    def square_in_q_sqrt_disc(q: Fraction) -> bool:
        if q == 0:
            return True
        if _is_square_rational(q):
            return True
        return _is_square_rational(q * disc)

    if square_in_q_sqrt_disc(a * a - 4 * (b - beta)) and square_in_q_sqrt_disc(
        beta * beta - 4 * dd
    ):
        return standard_tag("C4")
    return standard_tag("D4")


def _is_square_rational(q: Fraction) -> bool:
    q = Fraction(q)
    return q >= 0 and is_square_integer(q.numerator) and is_square_integer(q.denominator)


def decomposition_profile(f: QPoly, tag: GaloisTag, place: Place) -> PlaceProfile:
    """Cyclic decomposition group at a place, as an orbit partition.

    At ∞ the generator is an involution with r1 fixed points (identity when
    the field is totally real); at an unramified p it is any element whose
    cycle type matches the mod-p factorization degrees. Invariant dimensions
    downstream only use the orbit partition, which is conjugation-invariant.
    """
    if tag.degree != f.degree:
        raise ValueError("tag action degree does not match deg f")
    if place == INF:
        sig = signature(f)
        target = tuple(sorted([1] * sig.r1 + [2] * sig.r2))
        gen = tag.find_by_cycle_type(target)
    else:
        target = frobenius_cycle_type(f, int(place))
        gen = tag.find_by_cycle_type(target)
    return PlaceProfile(place, orbits_of([gen], tag.degree), gen)
