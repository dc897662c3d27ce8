"""Two identical particles on one field: phase parameters, families, brackets.

All parity logic runs on doubled integers (``HalfInt``); sines and cosines of
half-integer multiples of pi are looked up, not evaluated.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ParityError, SameLevelError, TruncationWarning
from .halfint import HalfInt, HalfIntLike
from .response import LevelSystem, ParticleResponse, ResponseMatrix, momentum_matrix, trk_sum

TRK_WARN_RTOL = 1e-9

# sin(pi h / 2) and cos(pi h / 2) indexed by h mod 4
_SIN_HALF = (0, 1, 0, -1)
_COS_HALF = (1, 0, -1, 0)


def zeta12(z1: HalfIntLike, z2: HalfIntLike) -> HalfInt:
    """Relative phase parameter |zeta1 - zeta2|."""
    return abs(HalfInt.of(z1) - HalfInt.of(z2))


class Family(enum.Enum):
    B = "B"
    F = "F"


@dataclass(frozen=True)
class FamilyTag:
    tag: Family
    upsilon: HalfInt

    def __post_init__(self):
        ups = HalfInt.of(self.upsilon)
        object.__setattr__(self, "upsilon", ups)
        if ups.half_units < 0:
            raise ValueError("upsilon must be non-negative")
        if self.tag is Family.B and not ups.is_integer:
            raise ParityError("family B needs an integer upsilon")
        if self.tag is Family.F and not ups.is_half_odd:
            raise ParityError("family F needs a half-odd-integer upsilon")

    def members(self) -> list[HalfInt]:
        """Allowed member values -upsilon .. upsilon in unit steps."""
        u = self.upsilon.half_units
        return [HalfInt(h) for h in range(-u, u + 1, 2)]


def classify_family(members: Iterable[HalfIntLike]) -> FamilyTag:
    vals = [HalfInt.of(z) for z in members]
    if not vals:
        raise ValueError("need at least one member")
    ints = [z.is_integer for z in vals]
    if all(ints):
        tag = Family.B
    elif not any(ints):
        tag = Family.F
    else:
        raise ParityError("members mix integer and half-odd-integer phase parameters")
    return FamilyTag(tag, max(abs(z) for z in vals))


def degeneracy(upsilon: HalfIntLike) -> int:
    """g = 2 upsilon + 1."""
    u = HalfInt.of(upsilon)
    if u.half_units < 0:
        raise ValueError("upsilon must be non-negative")
    return u.half_units + 1


@dataclass(frozen=True)
class BipartitePair:
    particle1: ParticleResponse
    particle2: ParticleResponse
    level1: int
    level2: int

    def __post_init__(self):
        p1, p2 = self.particle1, self.particle2
        if p1.system != p2.system:
            raise ValueError("identical particles must share the level system")
        if not np.allclose(np.abs(p1.matrix.entries), np.abs(p2.matrix.entries), rtol=0, atol=1e-12):
            raise ValueError("identical particles must share response magnitudes")
        for lvl in (self.level1, self.level2):
            if not 0 <= lvl < p1.system.dim:
                raise IndexError(f"level {lvl} out of range")

    @classmethod
    def identical(cls, system: LevelSystem, x: ResponseMatrix, zeta1: HalfIntLike,
                  zeta2: HalfIntLike, level1: int, level2: int) -> BipartitePair:
        return cls(ParticleResponse(system, x, HalfInt.of(zeta1), 1),
                   ParticleResponse(system, x, HalfInt.of(zeta2), 2), level1, level2)

    @property
    def system(self) -> LevelSystem:
        return self.particle1.system

    @property
    def x(self) -> np.ndarray:
        return self.particle1.matrix.entries

    @property
    def signed_difference(self) -> HalfInt:
        return self.particle1.zeta - self.particle2.zeta

    @property
    def zeta12(self) -> HalfInt:
        return abs(self.signed_difference)

    def momentum_response(self, particle: int = 2) -> ParticleResponse:
        pr = self.particle2 if particle == 2 else self.particle1
        return ParticleResponse(pr.system, momentum_matrix(pr.matrix, pr.system), pr.zeta, pr.label)


def _sgn(v: float) -> int:
    return (v > 0) - (v < 0)


def bracket_xx_distinct(pair: BipartitePair) -> complex:
    """[x1, x2]_(nm) = 2i |x_nm|^2 sin(theta12) for n != m.

    theta12 is the signed phase difference seen on the positive-frequency
    half of mode (n, m); it equals pi*zeta12 when zeta1 >= zeta2 and n < m.
    Exactly zero for integer zeta12.
    """
    n, m = pair.level1, pair.level2
    if n == m:
        raise SameLevelError("use the shared-level bracket for n == m")
    h = _sgn(pair.system.omega(m, n)) * pair.signed_difference.half_units
    return 2j * abs(pair.x[n, m]) ** 2 * _SIN_HALF[h % 4]


def bracket_xp_distinct(pair: BipartitePair) -> complex:
    """[x1, p2]_(nm) = cos(pi zeta12) 2 i m omega_mn |x_nm|^2 for n != m.

    The cosine is (-1)^zeta12 for integer zeta12 and zero for half-odd values.
    """
    n, m = pair.level1, pair.level2
    if n == m:
        raise SameLevelError("use the shared-level bracket for n == m")
    sign = _COS_HALF[pair.zeta12.half_units % 4]
    sys = pair.system
    return sign * 2j * sys.mass * sys.omega(m, n) * abs(pair.x[n, m]) ** 2


def bracket_xx_same(pair: BipartitePair) -> complex:
    """[x1, x2]_(nn) = 2i sum_k sin(theta12_nk) |x_nk|^2; zero for integer zeta12."""
    n = pair.level1
    if pair.level2 != n:
        raise ValueError("shared-level bracket needs level1 == level2")
    sys, x = pair.system, pair.x
    total = 0.0
    for k in range(sys.dim):
        if k == n:
            continue
        h = _sgn(sys.omega(k, n)) * pair.signed_difference.half_units
        total += _SIN_HALF[h % 4] * abs(x[n, k]) ** 2
    return 2j * total


def bracket_xp_same(pair: BipartitePair) -> complex:
    """[x1, p2]_(nn) = cos(pi zeta12) 2 i m sum_k omega_kn |x_nk|^2 = (-1)^zeta12 i hbar.

    The last form holds for integer zeta12 wherever the sum rule does.
    """
    n = pair.level1
    if pair.level2 != n:
        raise ValueError("shared-level bracket needs level1 == level2")
    sys = pair.system
    sign = _COS_HALF[pair.zeta12.half_units % 4]
    s = trk_sum(pair.x, sys, n)
    if abs(s - sys.hbar) > TRK_WARN_RTOL * sys.hbar:
        warnings.warn(f"sum rule broken at level {n} (sum {s:.6g} vs hbar {sys.hbar:.6g}); "
                      "truncation boundary", TruncationWarning, stacklevel=2)
    return sign * 1j * s


@dataclass(frozen=True)
class PhaseAssignment:
    family: FamilyTag
    size: int
    feasible: bool
    values: tuple[HalfInt, ...] = ()
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "family": self.family.tag.value,
            "upsilon": self.family.upsilon.to_json(),
            "size": self.size,
            "feasible": self.feasible,
            "values": [v.to_json() for v in self.values],
            "certificate": self.certificate,
        }


def pairwise_odd(values: Sequence[HalfInt]) -> bool:
    return all((a - b).is_integer and (a - b).as_int() % 2 == 1
               for i, a in enumerate(values) for b in values[i + 1:])


def _search_odd(candidates: list[HalfInt], size: int) -> tuple[HalfInt, ...] | None:
    chosen: list[HalfInt] = []

    def extend(start: int) -> bool:
        if len(chosen) == size:
            return True
        for i in range(start, len(candidates)):
            c = candidates[i]
            if all((c - z).as_int() % 2 == 1 for z in chosen):
                chosen.append(c)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if extend(0) else None


def phase_assignment(size: int, family: FamilyTag) -> PhaseAssignment:
    """Phase parameters for ``size`` identical particles responding to shared modes.

    Type B members respond in phase: any number fit, using values of one
    parity so every pairwise difference is even. Type F members must differ
    pairwise by an odd amount; the search is exact and, when it fails, the
    certificate records the two parity classes that bound any such set.
    """
    if size < 1:
        raise ValueError("need at least one particle")
    pool = family.members()
    if family.tag is Family.B:
        lattice = pool[::2]  # -upsilon, -upsilon + 2, ... share one parity
        values = tuple(lattice[i % len(lattice)] for i in range(size))
        return PhaseAssignment(family, size, True, values)

    found = _search_odd(pool, size)
    if found is not None:
        return PhaseAssignment(family, size, True, found)
    # zeta - 1/2 is an integer; an odd difference needs opposite integer parities
    classes = {"even": [], "odd": []}
    for z in pool:
        classes["odd" if (z - HalfInt(1)).as_int() % 2 else "even"].append(z.to_json())
    certificate = {
        "argument": "parity",
        "statement": "zeta_i - zeta_j is odd iff (zeta_i - 1/2) and (zeta_j - 1/2) have "
                     "opposite parity; only two parity classes exist, so at most two "
                     "members can be pairwise odd-separated",
        "classes": classes,
        "max_size": 2 if classes["even"] and classes["odd"] else 1,
        "requested": size,
    }
    return PhaseAssignment(family, size, False, (), certificate)
