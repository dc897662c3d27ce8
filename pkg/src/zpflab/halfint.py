"""Exact half-integer numbers.

Phase parameters and spin labels both live on the lattice Z/2. They are stored
as doubled integers so parity questions never touch floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ParityError

HalfIntLike = Union["HalfInt", int, float, str, Fraction]


@dataclass(frozen=True, order=True)
class HalfInt:
    half_units: int

    def __post_init__(self):
        if not isinstance(self.half_units, int) or isinstance(self.half_units, bool):
            raise TypeError(f"half_units must be int, got {type(self.half_units).__name__}")

    @classmethod
    def of(cls, value: HalfIntLike) -> HalfInt:
        """Coerce ``value`` (int, ``"3/2"``, 0.5, Fraction, HalfInt) exactly."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a half-integer")
        if isinstance(value, dict):
            return cls.from_json(value)
        doubled = 2 * Fraction(value)
        if doubled.denominator != 1:
            raise ParityError(f"{value!r} is not a multiple of 1/2")
        return cls(int(doubled))

    @property
    def value(self) -> Fraction:
        return Fraction(self.half_units, 2)

    @property
    def is_integer(self) -> bool:
        return self.half_units % 2 == 0

    @property
    def is_half_odd(self) -> bool:
        return self.half_units % 2 == 1

    def as_int(self) -> int:
        if not self.is_integer:
            raise ParityError(f"{self} is not an integer")
        return self.half_units // 2

    def sign_power(self) -> int:
        """(-1)**self for integer values."""
        return -1 if self.as_int() % 2 else 1

    def __float__(self) -> float:
        return self.half_units / 2

    def __abs__(self) -> HalfInt:
        return HalfInt(abs(self.half_units))

    def __neg__(self) -> HalfInt:
        return HalfInt(-self.half_units)

    def __add__(self, other: HalfIntLike) -> HalfInt:
        return HalfInt(self.half_units + HalfInt.of(other).half_units)

    def __sub__(self, other: HalfIntLike) -> HalfInt:
        return HalfInt(self.half_units - HalfInt.of(other).half_units)

    def __str__(self) -> str:
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def to_json(self) -> dict:
        return {"half_units": self.half_units}

    @classmethod
    def from_json(cls, obj: dict) -> HalfInt:
        return cls(int(obj["half_units"]))


# Both quantities share the lattice; the names document intent at call sites.
PhaseParameter = HalfInt
SpinLabel = HalfInt
