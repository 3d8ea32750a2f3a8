import json
from fractions import Fraction

import pytest

from ampletori import serialize
from ampletori.errors import InputError
from ampletori.etale import EtaleAlgebra
from ampletori.places import INF, decomposition_profile, galois_group_small
from ampletori.polynomials import QPoly
from ampletori.units import UnitSystem


def test_fraction_round_trip():
    for x in (Fraction(4, 5), Fraction(-3), Fraction(0), Fraction(22, 7)):
        assert serialize.parse_frac(serialize.frac_str(x)) == x
    assert serialize.frac_str(Fraction(-3, 5)) == "-3/5"
    assert serialize.frac_str(Fraction(7)) == "7"


def test_polynomial_round_trip():
    f = QPoly([-1, 1, 0, 1])
    assert serialize.poly_to_json(f.coeffs) == ["-1", "1", "0", "1"]
    assert QPoly(serialize.poly_from_json(["-1", "1", "0", "1"])) == f


def test_algebra_round_trip():
    e = EtaleAlgebra([QPoly([1, 0, 1])], [[1, 0], [0, 2]])
    data = serialize.algebra_to_json(e)
    e2 = serialize.algebra_from_json(data)
    assert e2.factors == e.factors and e2.order_basis == e.order_basis


def test_unit_system_round_trip():
    e = EtaleAlgebra([QPoly([1, 0, 1])])
    sys = UnitSystem(e, (Fraction(0), Fraction(1)), 4, [(Fraction(4, 5), Fraction(3, 5))], (5,))
    data = serialize.unit_system_to_json(sys)
    assert data == {
        "torsion": {"element": ["0", "1"], "order": 4},
        "free": [["4/5", "3/5"]],
        "s_primes": [5],
    }
    back = serialize.unit_system_from_json(e, data)
    assert back.free_generators == sys.free_generators
    assert back.torsion_order == 4 and back.s_primes == (5,)


def test_place_profile_schema():
    f = QPoly([1, 0, 1])
    prof = decomposition_profile(f, galois_group_small(f), 5)
    assert serialize.place_profile_to_json(prof) == {
        "place": "p:5",
        "orbits": [[0], [1]],
    }
    prof_inf = decomposition_profile(f, galois_group_small(f), INF)
    assert serialize.place_profile_to_json(prof_inf)["place"] == "inf"


def test_dumps_is_canonical():
    a = serialize.dumps({"b": 1, "a": Fraction(1, 2)})
    b = serialize.dumps({"a": Fraction(1, 2), "b": 1})
    assert a == b == '{"a":"1/2","b":1}\n'


def test_bad_inputs_carry_paths():
    with pytest.raises(InputError) as err:
        serialize.algebra_from_json({"factors": [["nope"]]})
    assert "factors[0][0]" in err.value.path
    with pytest.raises(InputError):
        serialize.loads("{", "<test>")
