"""Internal rotation, exchange parity and the exclusion search.

Two different "swap" notions appear here and are kept apart:

* ``swap_parity`` exchanges the level and spin slots of a state vector and
  reports the eigenvalue (+1 symmetric, -1 antisymmetric);
* ``exchange_parity`` performs the physical exchange, in which each particle
  also rotates to the other's azimuthal angle and one of them picks up an
  extra full turn. Its eigenvalue is (-1)**zeta * (-1)**(2 gamma), the factor
  that must equal 1 for identical particles.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .covariance import (Configuration, EntangledState, ObservablePair, _check_levels, _real,
                         _sign)
from .errors import DimensionError, SameLevelError
from .halfint import HalfInt, HalfIntLike

EIGEN_TOL = 1e-10


def spin_config_average(obs: ObservablePair, n: int, m: int, zeta: HalfIntLike,
                        gammas: tuple[HalfIntLike, HalfIntLike], phi: float,
                        cfg: Configuration) -> complex:
    """Partial average with rotation factors e^{i gamma_nm phi}, gamma_nm = gamma_n - gamma_m."""
    _check_levels(obs, n, m)
    s = _sign(zeta)
    g_n, g_m = (float(HalfInt.of(g)) for g in gammas)
    rot_nm = cmath.exp(1j * (g_n - g_m) * phi)
    rot_mn = cmath.exp(1j * (g_m - g_n) * phi)
    f, g = obs.f.entries, obs.g.entries
    if cfg is Configuration.C:
        return complex(f[n, n] * g[m, m] + s * f[n, m] * rot_nm * g[m, n] * rot_mn)
    return complex(f[m, m] * g[n, n] + s * f[m, n] * rot_mn * g[n, m] * rot_nm)


def spin_covariance(obs: ObservablePair, n: int, m: int, zeta: HalfIntLike,
                    gammas: tuple[HalfIntLike, HalfIntLike], phi: float) -> float:
    avg = 0.5 * (spin_config_average(obs, n, m, zeta, gammas, phi, Configuration.C)
                 + spin_config_average(obs, n, m, zeta, gammas, phi, Configuration.D))
    fnn, fmm, gnn, gmm = obs.means(n, m)
    return _real(avg - 0.25 * (fnn + fmm) * (gnn + gmm), "spin covariance")


def exchange_factor(zeta: HalfIntLike, gamma_n: HalfIntLike) -> int:
    """(-1)**zeta * (-1)**(2 gamma_n) by exact parity; same for either exchange direction."""
    z = HalfInt.of(zeta)
    g = HalfInt.of(gamma_n)
    return -1 if (z.as_int() + g.half_units) % 2 else 1


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


def required_zeta_parity(gamma: HalfIntLike) -> Parity:
    """Parity of zeta that makes the exchange factor 1 for spin label gamma."""
    return Parity.ODD if HalfInt.of(gamma).half_units % 2 else Parity.EVEN


Label = tuple[int, HalfInt]


@dataclass(frozen=True)
class CompleteState:
    """(|n g_n>_1 |m g_m>_2 + sign |m g_m>_1 |n g_n>_2) / sqrt(2)."""

    n: int
    gamma_n: HalfInt
    m: int
    gamma_m: HalfInt
    sign: int
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gamma_n", HalfInt.of(self.gamma_n))
        object.__setattr__(self, "gamma_m", HalfInt.of(self.gamma_m))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def branches(self) -> list[tuple[complex, Label, Label]]:
        a, b = (self.n, self.gamma_n), (self.m, self.gamma_m)
        r = 1 / math.sqrt(2)
        return [(r, a, b), (self.sign * r, b, a)]

    def spin_extent(self) -> int:
        """Largest |2 gamma| among the labels; spin slots cover -extent .. extent half-units."""
        return max(abs(self.gamma_n.half_units), abs(self.gamma_m.half_units))

    def _slot_dim(self, dim: int) -> int:
        if max(self.n, self.m) >= dim:
            raise DimensionError(f"levels ({self.n}, {self.m}) exceed dim {dim}")
        return dim * (2 * self.spin_extent() + 1)

    def _slot_index(self, label: Label) -> int:
        level, gamma = label
        ext = self.spin_extent()
        return level * (2 * ext + 1) + gamma.half_units + ext

    def angle_vector(self, dim: int, phi1: float, phi2: float) -> np.ndarray:
        """Level (x) spin vector with rotation factors e^{-i gamma phi_slot} attached."""
        size = self._slot_dim(dim)
        v = np.zeros(size * size, dtype=complex)
        for c, l1, l2 in self.branches():
            rot = cmath.exp(-1j * float(l1[1]) * phi1) * cmath.exp(-1j * float(l2[1]) * phi2)
            v[self._slot_index(l1) * size + self._slot_index(l2)] += c * rot
        return v

    def vector(self, dim: int) -> np.ndarray:
        """Normalized level (x) spin vector without angle factors."""
        v = self.angle_vector(dim, 0.0, 0.0)
        norm = np.linalg.norm(v)
        if norm < EIGEN_TOL:
            raise ValueError("state vanishes")
        return v / norm

    def level_vector(self, dim: int) -> np.ndarray:
        """Two-particle level vector with the branch rotation phases as scalars.

        Both branches carry e^{-i (gamma_n + gamma_m) phi}, a common phase, so
        level observables see the spinless entangled state.
        """
        if self.n == self.m:
            raise SameLevelError("level rendering needs n != m")
        common = cmath.exp(-1j * (float(self.gamma_n) + float(self.gamma_m)) * self.phi)
        return common * EntangledState(self.n, self.m, self.sign).level_vector(dim)

    def energy_state(self) -> EntangledState:
        """The same state with spin labels stripped."""
        return EntangledState(self.n, self.m, self.sign)


def build_complete_state(n: int, gamma_n: HalfIntLike, m: int, gamma_m: HalfIntLike,
                         zeta: HalfIntLike, phi: float = 0.0) -> CompleteState:
    s = _sign(zeta)
    g_n, g_m = HalfInt.of(gamma_n), HalfInt.of(gamma_m)
    if n == m and g_n == g_m and s == -1:
        raise ValueError("antisymmetric combination of identical labels vanishes")
    return CompleteState(n, g_n, m, g_m, s, phi)


def _eigenvalue(v: np.ndarray, w: np.ndarray) -> int | None:
    """+1 or -1 if w = +-v, else None."""
    vv = np.vdot(v, v).real
    if vv < EIGEN_TOL:
        raise ValueError("zero vector has no parity")
    lam = np.vdot(v, w) / vv
    if np.linalg.norm(w - lam * v) > EIGEN_TOL * math.sqrt(vv):
        return None
    for target in (1, -1):
        if abs(lam - target) < EIGEN_TOL:
            return target
    return None


def _swap(v: np.ndarray, slot: int) -> np.ndarray:
    return v.reshape(slot, slot).T.reshape(-1)


def swap_parity(state: CompleteState | EntangledState | np.ndarray, dim: int | None = None) -> int | None:
    """Eigenvalue of the slot exchange, or None if the input is not an eigenstate."""
    if isinstance(state, CompleteState):
        dim = dim or max(state.n, state.m) + 1
        v = state.vector(dim)
        slot = state._slot_dim(dim)
    elif isinstance(state, EntangledState):
        dim = dim or max(state.n, state.m) + 1
        v, slot = state.level_vector(dim), dim
    else:
        v = np.asarray(state, dtype=complex)
        slot = dim or math.isqrt(v.size)
        if slot * slot != v.size:
            raise DimensionError("vector length is not a square")
    return _eigenvalue(v, _swap(v, slot))


def exchange_parity(state: CompleteState, dim: int | None = None, phi1: float = 0.3,
                    phi2: float = 1.1, clockwise: bool = True) -> int | None:
    """Brute-force physical exchange on the angle-dependent vector.

    With phi2 > phi1 the particle at phi1 moves to phi2 and the one at phi2
    moves to phi1 + 2 pi; with phi2 < phi1 the roles flip. Counter-clockwise
    turns use -2 pi. Slot contents (level and spin) travel with the particle.
    """
    dim = dim or max(state.n, state.m) + 1
    size = state._slot_dim(dim)
    turn = 2 * math.pi if clockwise else -2 * math.pi
    if phi2 > phi1:
        ang_from1, ang_from2 = phi2, phi1 + turn
    else:
        ang_from1, ang_from2 = phi2 + turn, phi1
    w = np.zeros(size * size, dtype=complex)
    for c, l1, l2 in state.branches():
        rot = cmath.exp(-1j * float(l1[1]) * ang_from1) * cmath.exp(-1j * float(l2[1]) * ang_from2)
        w[state._slot_index(l2) * size + state._slot_index(l1)] += c * rot
    v = state.angle_vector(dim, phi1, phi2)
    return _eigenvalue(v, w)


def spin_space_covariance(obs: ObservablePair, state: CompleteState) -> float:
    """Covariance of level observables f (x) 1_spin, g (x) 1_spin in the level (x) spin vector."""
    d = obs.dim
    v = state.vector(d)
    s = 2 * state.spin_extent() + 1
    one = np.eye(s)
    fe = np.kron(obs.f.entries, one)
    ge = np.kron(obs.g.entries, one)
    eye = np.eye(d * s)
    fg = np.vdot(v, np.kron(fe, ge) @ v)
    f1 = np.vdot(v, np.kron(fe, eye) @ v)
    g2 = np.vdot(v, np.kron(eye, ge) @ v)
    return _real(complex(fg - f1 * g2), "spin-space covariance")


@dataclass(frozen=True)
class PauliResult:
    upsilon: HalfInt
    k: int
    applicable: bool
    feasible: bool
    witnesses: tuple[tuple[HalfInt, ...], ...] = ()
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "upsilon": self.upsilon.to_json(),
            "k": self.k,
            "applicable": self.applicable,
            "feasible": self.feasible,
            "witnesses": [[str(g) for g in w] for w in self.witnesses],
            "certificate": self.certificate,
        }


def _unit_gap(a: HalfInt, b: HalfInt) -> bool:
    return abs(a - b).half_units == 2


def _cliques(values: Sequence[HalfInt], k: int) -> list[tuple[HalfInt, ...]]:
    """All k-subsets with every pairwise gap exactly 1, by backtracking."""
    out: list[tuple[HalfInt, ...]] = []
    chosen: list[HalfInt] = []

    def extend(start: int) -> None:
        if len(chosen) == k:
            out.append(tuple(sorted(chosen, reverse=True)))
            return
        for i in range(start, len(values)):
            c = values[i]
            if all(_unit_gap(c, z) for z in chosen):
                chosen.append(c)
                extend(i + 1)
                chosen.pop()

    extend(0)
    return out


def pauli_feasibility(upsilon: HalfIntLike, k: int) -> PauliResult:
    """Can k spins in -upsilon .. upsilon pairwise satisfy |g_i - g_j| = 1?"""
    u = HalfInt.of(upsilon)
    if u.half_units < 0:
        raise ValueError("upsilon must be non-negative")
    if k < 1:
        raise ValueError("k must be >= 1")
    if u.is_integer:
        return PauliResult(u, k, applicable=False, feasible=False,
                           certificate={"reason": "integer spin: no exclusion search"})
    values = [HalfInt(h) for h in range(-u.half_units, u.half_units + 1, 2)]
    found = _cliques(values, k)
    if found:
        return PauliResult(u, k, True, True, tuple(found))

    pairs = _cliques(values, 2)
    rows = []
    for g1, g2 in pairs:
        for g3 in values:
            if g3 in (g1, g2):
                continue
            d31, d32 = abs(g3 - g1), abs(g3 - g2)
            fails = [name for name, d in (("31", d31), ("32", d32)) if d.half_units != 2]
            even = [name for name, d in (("31", d31), ("32", d32)) if d.as_int() % 2 == 0]
            rows.append({"gamma1": str(g1), "gamma2": str(g2), "gamma3": str(g3),
                         "fails": fails, "even_offset": even})
    certificate = {
        "reason": "no triple is pairwise unit-separated; every k >= 3 set contains a triple",
        "max_size": 2 if pairs else 1,
        "pair_extensions": rows,
    }
    return PauliResult(u, k, True, False, (), certificate)
