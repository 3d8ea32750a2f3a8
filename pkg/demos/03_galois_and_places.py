"""Galois groups through degree 4 and per-place decomposition data.

Local ranks of tori are dimensions of decomposition-group invariants; the
decomposition group at the real place is generated by complex conjugation
(an involution with r1 fixed points) and at an unramified prime by
Frobenius, known through its cycle type = the mod-p factorization pattern.
"""

from ampletori import QPoly, decomposition_profile, galois_group_small, places_over_p, signature
from ampletori.errors import RamifiedPlaceError
from ampletori.places import INF

fields = {
    "x^2+1": QPoly([1, 0, 1]),
    "x^3+x-1": QPoly([-1, 1, 0, 1]),
    "x^3-3x+1": QPoly([1, -3, 0, 1]),
    "x^4-8x^3+20x^2-16x+1": QPoly([1, -16, 20, -8, 1]),
    "x^4+x^3+x^2+x+1": QPoly([1, 1, 1, 1, 1]),
    "x^4-2": QPoly([-2, 0, 0, 0, 1]),
    "x^4+8x+12": QPoly([12, 8, 0, 0, 1]),
    "x^4-x-1": QPoly([-1, -1, 0, 0, 1]),
}

print("Galois groups (cubic resolvent + discriminant tests):")
for name, f in fields.items():
    sig = signature(f)
    tag = galois_group_small(f)
    print(f"  {name:24s} signature ({sig.r1},{sig.r2})  group {tag.group}")

gauss = fields["x^2+1"]
tag = galois_group_small(gauss)
print("\nplace profiles for Q[i] (orbits of the decomposition group):")
for place in (INF, 3, 5, 13):
    prof = decomposition_profile(gauss, tag, place)
    print(f"  place {prof.place_str():5s} orbits {prof.orbits} -> {prof.num_places_over} place(s) above")

print("\nsplit/inert statistics for x^2+1 (Chebotarev in action):")
split = total = 0
from ampletori.polynomials import is_prime

for p in range(3, 200):
    if is_prime(p):
        total += 1
        split += places_over_p(gauss, p) == 2
print(f"  {split}/{total} primes below 200 split (density tends to 1/2)")

print("\nramified places are a hard error, never a guess:")
try:
    places_over_p(fields["x^3+x-1"], 31)
except RamifiedPlaceError as exc:
    print(f"  p = {exc.p} divides disc = {exc.disc}: {type(exc).__name__}")
