"""JSON serialization for every external interface (schema "cma/1").

Rationals serialize as "p/q" strings (plain integers when q = 1),
polynomials as arrays of coefficient strings in ascending degree, matrices
row-major. Serialization is canonical: json.dumps with sorted keys and fixed
separators, so identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError
from .etale import EtaleAlgebra
from .linalg import Mat
from .matgroups import GeneratorSet
from .places import PlaceProfile
from .torus import AmpleCertificate, SubmoduleWitness
from .units import UnitSystem

SCHEMA = "cma/1"


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s, path="") -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}: {exc}", path)


def poly_to_json(coeffs) -> list[str]:
    return [frac_str(c) for c in coeffs]


def poly_from_json(data, path="") -> list[Fraction]:
    if not isinstance(data, list):
        raise InputError("polynomial must be an array of coefficient strings", path)
    return [parse_frac(c, f"{path}[{i}]") for i, c in enumerate(data)]


def matrix_to_json(m: Mat) -> list[list[str]]:
    return [[frac_str(x) for x in row] for row in m]


def matrix_from_json(data, path="") -> Mat:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError("matrix must be an array of arrays", path)
    return tuple(
        tuple(parse_frac(x, f"{path}[{i}][{j}]") for j, x in enumerate(row))
        for i, row in enumerate(data)
    )


def vector_to_json(v) -> list[str]:
    return [frac_str(x) for x in v]


def vector_from_json(data, path=""):
    return tuple(parse_frac(x, f"{path}[{i}]") for i, x in enumerate(data))


def algebra_to_json(e: EtaleAlgebra) -> dict:
    return {
        "factors": [poly_to_json(f.coeffs) for f in e.factors],
        "order_basis": matrix_to_json(e.order_basis),
    }


def algebra_from_json(data, path="algebra") -> EtaleAlgebra:
    if not isinstance(data, dict) or "factors" not in data:
        raise InputError("algebra needs a 'factors' array", path)
    from .polynomials import QPoly

    factors = [
        QPoly(poly_from_json(f, f"{path}.factors[{i}]"))
        for i, f in enumerate(data["factors"])
    ]
    basis = None
    if data.get("order_basis") is not None:
        basis = matrix_from_json(data["order_basis"], f"{path}.order_basis")
    try:
        return EtaleAlgebra(factors, basis)
    except Exception as exc:
        raise InputError(str(exc), path)


def unit_system_to_json(sys: UnitSystem) -> dict:
    return {
        "torsion": {
            "element": vector_to_json(sys.torsion_generator),
            "order": sys.torsion_order,
        },
        "free": [vector_to_json(g) for g in sys.free_generators],
        "s_primes": list(sys.s_primes),
    }


def unit_system_from_json(e: EtaleAlgebra, data, path="units") -> UnitSystem:
    try:
        torsion = data["torsion"]
        return UnitSystem(
            e,
            vector_from_json(torsion["element"], f"{path}.torsion.element"),
            int(torsion["order"]),
            [
                vector_from_json(g, f"{path}.free[{i}]")
                for i, g in enumerate(data["free"])
            ],
            tuple(int(p) for p in data.get("s_primes", [])),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad unit system: {exc}", path)


def place_profile_to_json(p: PlaceProfile) -> dict:
    return {"place": p.place_str(), "orbits": [list(o) for o in p.orbits]}


def submodule_to_json(w: SubmoduleWitness) -> dict:
    return {
        "components": list(w.components),
        "dim": w.dim,
        "witness_place": w.witness_place,
        "sub_rank_at_witness": w.sub_rank_at_witness,
        "torus_rank_at_witness": w.torus_rank_at_witness,
        "local_ranks": {k: list(v) for k, v in sorted(w.local_ranks.items())},
    }


def certificate_to_json(cert: AmpleCertificate) -> dict:
    return {
        "schema": SCHEMA,
        "verdict": cert.verdict,
        "ambient": cert.ambient,
        "n": cert.n,
        "places": cert.places,
        "condition_i": cert.condition_i,
        "condition_ii": cert.condition_ii,
        "condition_iii": cert.condition_iii,
        "local_ranks": dict(sorted(cert.local_ranks.items())),
        "global_rank": cert.global_rank,
        "submodules": [submodule_to_json(w) for w in cert.submodules],
        "notes": cert.notes,
    }


def generator_set_to_json(gens: GeneratorSet) -> dict:
    return {
        "ring": gens.ring_str(),
        "n": gens.n,
        "ambient": gens.ambient,
        "torus": [matrix_to_json(m) for m in gens.torus_gens],
        "torsion": [matrix_to_json(m) for m in gens.torsion_gens],
        "normalizer": [matrix_to_json(m) for m in gens.normalizer_gens],
        "unipotent": [matrix_to_json(m) for m in gens.unipotent_gens],
        "provenance": {k: v for k, v in sorted(gens.provenance.items())},
    }


def sanity_to_json(report: dict) -> dict:
    out = {}
    for k, v in report.items():
        detail = v.get("detail")
        out[k] = {"pass": v["pass"]}
        if detail:
            out[k]["detail"] = _jsonable(detail)
    return out


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, Fraction):
        return frac_str(x)
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str, path="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}", path)
