"""Exact polynomial arithmetic: gcd, discriminants, Sturm counts, factoring.

Everything runs over exact rationals or F_p; no floating point appears
anywhere, so every printed number is a certificate, not an approximation.
"""

from fractions import Fraction

from ampletori import QPoly, discriminant, factor_mod_p, poly_gcd, sturm_count_real_roots
from ampletori.polynomials import isolate_real_roots, refine_root

cubic = QPoly([-1, 1, 0, 1])  # x^3 + x - 1
quartic = QPoly([1, -16, 20, -8, 1])  # x^4 - 8x^3 + 20x^2 - 16x + 1
gauss = QPoly([1, 0, 1])  # x^2 + 1

print("defining polynomials")
print("  cubic   :", cubic)
print("  quartic :", quartic)
print("  gauss   :", gauss)

print("\ndiscriminants (ramified primes divide these)")
print("  disc cubic   =", discriminant(cubic), " (so 31 is the only bad prime)")
print("  disc quartic =", discriminant(quartic), " = 2^8 * 3^2")
print("  disc gauss   =", discriminant(gauss))

print("\nreal-root counts via exact Sturm sequences")
print("  cubic  :", sturm_count_real_roots(cubic), "real root -> signature (1, 1)")
print("  quartic:", sturm_count_real_roots(quartic), "real roots -> totally real")
print("  gauss  :", sturm_count_real_roots(gauss), "real roots -> totally imaginary")

print("\nisolating the quartic's roots and refining to width 1e-6:")
for lo, hi in isolate_real_roots(quartic):
    lo2, hi2 = refine_root(quartic, lo, hi, Fraction(1, 10**6))
    print(f"  root in ({float(lo2):.7f}, {float(hi2):.7f})")

print("\nfactorization over F_p (distinct-degree + equal-degree splitting)")
for p in (2, 3, 5, 13):
    factors = factor_mod_p(gauss, p)
    pretty = " * ".join(
        "(" + " + ".join(f"{c}x^{i}" if i else str(c) for i, c in enumerate(g) if c) + ")"
        + (f"^{m}" if m > 1 else "")
        for g, m in factors
    )
    split = "split" if len(factors) == 2 else "inert"
    print(f"  x^2+1 mod {p:2d} = {pretty}   [{split}]")

print("\ngcds are monic and exact:")
print("  gcd(x^2-1, x-1) =", poly_gcd(QPoly([-1, 0, 1]), QPoly([-1, 1])))
print("  gcd(cubic, cubic') =", poly_gcd(cubic, cubic.derivative()), "(squarefree)")
