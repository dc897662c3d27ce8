from fractions import Fraction

import pytest

from zpflab.errors import ParityError
from zpflab.halfint import HalfInt


@pytest.mark.parametrize("value,units", [(1, 2), ("3/2", 3), (-0.5, -1), (Fraction(5, 2), 5),
                                         ({"half_units": 7}, 7)])
def test_coercion(value, units):
    assert HalfInt.of(value).half_units == units


def test_rejects_non_half():
    with pytest.raises(ParityError):
        HalfInt.of(0.3)
    with pytest.raises(TypeError):
        HalfInt.of(True)


def test_parity_and_arithmetic():
    a, b = HalfInt.of("3/2"), HalfInt.of("-1/2")
    assert a.is_half_odd and not a.is_integer
    assert (a - b).as_int() == 2
    assert str(a + b) == "1"
    assert abs(b) == HalfInt(1)
    assert HalfInt(6).sign_power() == -1
    with pytest.raises(ParityError):
        a.as_int()
    with pytest.raises(ParityError):
        a.sign_power()


def test_json_roundtrip():
    z = HalfInt(-5)
    assert HalfInt.from_json(z.to_json()) == z
