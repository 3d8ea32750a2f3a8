"""Étale algebras over Q: products of number fields with a fixed order basis.

An algebra is a product E = ∏ Q[x]/(f_k) of number fields given by monic
irreducible integral polynomials, together with an invertible matrix whose
rows express a Z-basis of an order O ⊂ E in the concatenated power bases.
Elements are coordinate vectors in the order basis, so integrality of an
element is integrality of its coordinates. The regular representation sends
an element to the matrix of multiplication-by-it in the order basis; all the
explicit matrices downstream come from this map.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import NotAnOrderError, SingularMatrixError
from .linalg import Mat, Vec
from .polynomials import QPoly, is_irreducible_q

Coords = Vec


class EtaleAlgebra:
    """Product of number fields with an order given by a Z-basis."""

    def __init__(
        self,
        factors: Sequence[QPoly | Sequence],
        order_basis: Sequence[Sequence] | None = None,
        check_irreducible: bool = True,
    ):
        self.factors: tuple[QPoly, ...] = tuple(
            f if isinstance(f, QPoly) else QPoly(f) for f in factors
        )
        if not self.factors:
            raise ValueError("an etale algebra needs at least one factor")
        for f in self.factors:
            if f.degree < 1 or not f.is_monic() or not f.is_integral():
                raise ValueError(f"factor {f!r} must be monic integral of degree >= 1")
            if check_irreducible and not is_irreducible_q(f):
                raise ValueError(f"factor {f!r} is reducible over Q")
        self.degrees = tuple(f.degree for f in self.factors)
        self.n = sum(self.degrees)
        self.offsets = []
        off = 0
        for d in self.degrees:
            self.offsets.append(off)
            off += d
        if order_basis is None:
            self.order_basis: Mat = linalg.identity(self.n)
        else:
            self.order_basis = linalg.matrix(order_basis)
            if len(self.order_basis) != self.n or len(self.order_basis[0]) != self.n:
                raise ValueError("order basis must be n x n")
        try:
            self._basis_inv = linalg.mat_inv(self.order_basis)
        except SingularMatrixError:
            raise SingularMatrixError("order basis matrix is singular") from None
        self._mult_table: list[list[Coords]] | None = None

    # -- coordinates ---------------------------------------------------------
    def to_power(self, coords: Coords) -> Coords:
        """Order-basis coordinates -> concatenated power-basis coordinates."""
        b = self.order_basis
        return tuple(
            sum(coords[i] * b[i][j] for i in range(self.n)) for j in range(self.n)
        )

    def from_power(self, power: Coords) -> Coords:
        b = self._basis_inv
        return tuple(
            sum(power[i] * b[i][j] for i in range(self.n)) for j in range(self.n)
        )

    def zero(self) -> Coords:
        return tuple(Fraction(0) for _ in range(self.n))

    def one(self) -> Coords:
        power = [Fraction(0)] * self.n
        for k, off in enumerate(self.offsets):
            power[off] = Fraction(1)
        return self.from_power(tuple(power))

    def generator(self, k: int = 0) -> Coords:
        """The image of x in factor k, as an element of E (zero elsewhere)."""
        f = self.factors[k]
        power = [Fraction(0)] * self.n
        if f.degree == 1:
            power[self.offsets[k]] = -f.coeffs[0]  # x = root of monic linear
        else:
            power[self.offsets[k] + 1] = Fraction(1)
        return self.from_power(tuple(power))

    def from_rational(self, c) -> Coords:
        return tuple(Fraction(c) * x for x in self.one())

    def element(self, coords: Iterable) -> "AlgebraElement":
        return AlgebraElement(self, tuple(Fraction(c) for c in coords))

    # -- ring structure ------------------------------------------------------
    def _power_blocks(self, power: Coords) -> list[list[Fraction]]:
        return [
            list(power[off : off + d]) for off, d in zip(self.offsets, self.degrees)
        ]

    def _mul_power(self, p1: Coords, p2: Coords) -> Coords:
        out: list[Fraction] = []
        for f, b1, b2 in zip(self.factors, self._power_blocks(p1), self._power_blocks(p2)):
            prod = QPoly(b1) * QPoly(b2)
            rem = prod % f
            block = list(rem.coeffs) + [Fraction(0)] * (f.degree - len(rem.coeffs))
            out.extend(block)
        return tuple(out)

    def mul(self, a: Coords, b: Coords) -> Coords:
        table = self.mult_table()
        out = [Fraction(0)] * self.n
        for i, ai in enumerate(a):
            if ai:
                row = table[i]
                for j, bj in enumerate(b):
                    if bj:
                        c = ai * bj
                        t = row[j]
                        for k in range(self.n):
                            if t[k]:
                                out[k] += c * t[k]
        return tuple(out)

    def add(self, a: Coords, b: Coords) -> Coords:
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a: Coords) -> Coords:
        return tuple(-x for x in a)

    def mult_table(self) -> list[list[Coords]]:
        """Structure constants: table[i][j] = coords of b_i * b_j."""
        if self._mult_table is None:
            basis_power = [self.order_basis[i] for i in range(self.n)]
            table = []
            for i in range(self.n):
                row = []
                for j in range(self.n):
                    row.append(self.from_power(self._mul_power(basis_power[i], basis_power[j])))
                table.append(row)
            self._mult_table = table
        return self._mult_table

    def power(self, a: Coords, k: int) -> Coords:
        if k < 0:
            return self.power(self.inverse(a), -k)
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inverse(self, a: Coords) -> Coords:
        m = self.regular_rep(a)
        return linalg.solve(m, self.one())

    # -- the regular representation ------------------------------------------
    def regular_rep(self, a: Coords) -> Mat:
        """Matrix of multiplication-by-a: column j holds coords of a·b_j."""
        table = self.mult_table()
        cols = []
        for j in range(self.n):
            col = [Fraction(0)] * self.n
            for i, ai in enumerate(a):
                if ai:
                    t = table[i][j]
                    for k in range(self.n):
                        if t[k]:
                            col[k] += ai * t[k]
            cols.append(col)
        return tuple(tuple(cols[j][i] for j in range(self.n)) for i in range(self.n))

    def norm(self, a: Coords) -> Fraction:
        return linalg.mat_det(self.regular_rep(a))

    def trace(self, a: Coords) -> Fraction:
        return linalg.mat_trace(self.regular_rep(a))

    def charpoly(self, a: Coords) -> QPoly:
        return QPoly(linalg.charpoly(self.regular_rep(a)))

    def element_is_integral(self, a: Coords) -> bool:
        """True iff π(a) is an integer matrix (coordinate integrality for orders)."""
        return linalg.is_integer_matrix(self.regular_rep(a))

    # -- order verification ----------------------------------------------------
    def is_order(self) -> tuple[bool, dict | None]:
        """Check 1 ∈ Z-span(basis) and closure of the basis under products.

        Returns (True, None) or (False, witness) where the witness names the
        offending pair and its non-integral coordinate.
        """
        one = self.one()
        for k, c in enumerate(one):
            if c.denominator != 1:
                return False, {"pair": None, "coordinate": k, "value": c, "reason": "1 not in Z-span"}
        table = self.mult_table()
        for i in range(self.n):
            for j in range(i, self.n):
                for k, c in enumerate(table[i][j]):
                    if c.denominator != 1:
                        return False, {
                            "pair": (i, j),
                            "coordinate": k,
                            "value": c,
                            "reason": f"b_{i}*b_{j} has non-integral coordinate",
                        }
        return True, None

    def require_order(self):
        ok, witness = self.is_order()
        if not ok:
            raise NotAnOrderError(f"basis is not an order: {witness['reason']}", witness)

    @property
    def num_factors(self) -> int:
        return len(self.factors)

    def factor_component(self, a: Coords, k: int) -> QPoly:
        """Component of a in factor k, as a polynomial mod f_k."""
        power = self.to_power(a)
        off, d = self.offsets[k], self.degrees[k]
        return QPoly(power[off : off + d])

    def factor_norm(self, a: Coords, k: int) -> Fraction:
        """Norm of the factor-k component down to Q."""
        from .polynomials import resultant

        comp = self.factor_component(a, k)
        if comp.is_zero():
            return Fraction(0)
        return resultant(self.factors[k], comp)

    def __repr__(self):
        return f"EtaleAlgebra(factors={list(self.factors)!r}, n={self.n})"


class AlgebraElement:
    """Thin wrapper giving elements arithmetic dunders for exploratory use."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: EtaleAlgebra, coords: Coords):
        self.algebra = algebra
        self.coords = tuple(Fraction(c) for c in coords)

    def __add__(self, other):
        return AlgebraElement(self.algebra, self.algebra.add(self.coords, other.coords))

    def __sub__(self, other):
        return AlgebraElement(
            self.algebra, self.algebra.add(self.coords, self.algebra.neg(other.coords))
        )

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return AlgebraElement(self.algebra, self.algebra.mul(self.coords, other.coords))
        return AlgebraElement(self.algebra, tuple(Fraction(other) * c for c in self.coords))

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraElement(self.algebra, self.algebra.neg(self.coords))

    def __pow__(self, k: int):
        return AlgebraElement(self.algebra, self.algebra.power(self.coords, k))

    def inverse(self):
        return AlgebraElement(self.algebra, self.algebra.inverse(self.coords))

    def norm(self) -> Fraction:
        return self.algebra.norm(self.coords)

    def trace(self) -> Fraction:
        return self.algebra.trace(self.coords)

    def matrix(self) -> Mat:
        return self.algebra.regular_rep(self.coords)

    def is_integral(self) -> bool:
        return self.algebra.element_is_integral(self.coords)

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"AlgebraElement({list(self.coords)})"


# module-level aliases matching the operation names used throughout
def regular_rep(e: EtaleAlgebra, a: Coords) -> Mat:
    return e.regular_rep(a)


def norm(e: EtaleAlgebra, a: Coords) -> Fraction:
    return e.norm(a)


def trace(e: EtaleAlgebra, a: Coords) -> Fraction:
    return e.trace(a)


def is_order(e: EtaleAlgebra) -> tuple[bool, dict | None]:
    return e.is_order()


def element_is_integral(e: EtaleAlgebra, a: Coords) -> bool:
    return e.element_is_integral(a)
