"""Level systems, response matrices and the single-particle identities.

Frequency convention: ``omega(k, n) = (E_k - E_n) / hbar``. This is the sign
under which the response ``x_nn + sum_k x_nk a_nk exp(-i omega_kn t) + c.c.``
matches the Heisenberg/Schroedinger matrix elements and under which the
sum-rule ``2 m sum_k omega_kn |x_nk|^2`` equals +hbar on the oscillator ladder.

Phase convention: a particle with phase parameter zeta multiplies the
positive-frequency half of each mode it responds to by ``exp(i pi zeta)``.
Written with ``a_nk``, the term of level ``n`` toward ``k`` therefore carries
``exp(i sgn(omega_kn) pi zeta)``. With this choice the two-particle brackets
depend on ``zeta1 - zeta2`` both for distinct and for shared levels.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import DimensionError, MissingModeError, TruncationWarning
from .halfint import HalfInt
from .modes import FieldRealization, Mode, canonical, lookup_normal

HERMITIAN_RTOL = 1e-12
REALNESS_TOL = 1e-12
# exp(i pi h / 2) = i**h, kept exact for half-integer phases
_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class LevelSystem:
    energies: tuple[float, ...]
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        e = tuple(float(v) for v in self.energies)
        object.__setattr__(self, "energies", e)
        if len(e) < 2:
            raise DimensionError("a level system needs at least two levels")
        if any(b <= a for a, b in zip(e, e[1:])):
            raise ValueError("energies must be strictly increasing")
        if self.mass <= 0 or self.hbar <= 0:
            raise ValueError("mass and hbar must be positive")

    @property
    def dim(self) -> int:
        return len(self.energies)

    def omega(self, k: int, n: int) -> float:
        """Transition frequency omega_kn = (E_k - E_n) / hbar."""
        return (self.energies[k] - self.energies[n]) / self.hbar

    def omega_matrix(self) -> np.ndarray:
        """W[k, n] = omega_kn."""
        e = np.asarray(self.energies)
        return (e[:, None] - e[None, :]) / self.hbar

    def fundamental_period(self) -> float:
        return 2 * math.pi / float(np.min(np.diff(self.energies)) / self.hbar)

    def to_json(self) -> dict:
        return {"energies": list(self.energies), "mass": self.mass, "hbar": self.hbar}

    @classmethod
    def from_json(cls, obj: Mapping) -> LevelSystem:
        return cls(tuple(obj["energies"]), float(obj.get("mass", 1.0)), float(obj.get("hbar", 1.0)))


class ResponseMatrix:
    """Hermitian complex matrix of response amplitudes; read-only."""

    __slots__ = ("_entries",)

    def __init__(self, entries):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"response matrix must be square, got shape {a.shape}")
        if a.shape[0] < 2:
            raise DimensionError("response matrix needs dim >= 2")
        scale = max(1.0, float(np.max(np.abs(a))))
        if np.max(np.abs(a - a.conj().T)) > HERMITIAN_RTOL * scale:
            raise ValueError("response matrix must be Hermitian")
        a.setflags(write=False)
        self._entries = a

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    def __getitem__(self, idx):
        return self._entries[idx]

    def __array__(self, dtype=None, copy=None):
        return self._entries if dtype is None else self._entries.astype(dtype)

    def __repr__(self):
        return f"ResponseMatrix(dim={self.dim})"

    def to_json(self) -> dict:
        flat = self._entries.reshape(-1)
        return {"dim": self.dim, "entries": [[float(z.real), float(z.imag)] for z in flat]}

    @classmethod
    def from_json(cls, obj: Mapping) -> ResponseMatrix:
        d = int(obj["dim"])
        pairs = obj["entries"]
        if len(pairs) != d * d:
            raise DimensionError(f"expected {d * d} entries, got {len(pairs)}")
        return cls(np.array([complex(re, im) for re, im in pairs]).reshape(d, d))

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path: str | Path) -> ResponseMatrix:
        return cls.from_json(json.loads(Path(path).read_text()))


def _entries(m) -> np.ndarray:
    return m.entries if isinstance(m, ResponseMatrix) else np.asarray(m, dtype=complex)


def random_hermitian(dim: int, rng: np.random.Generator, zero_diagonal: bool = False) -> ResponseMatrix:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (z + z.conj().T) / 2
    if zero_diagonal:
        np.fill_diagonal(h, 0)
    return ResponseMatrix(h)


def harmonic_oscillator(dim: int, mass: float = 1.0, omega0: float = 1.0,
                        hbar: float = 1.0) -> tuple[LevelSystem, ResponseMatrix]:
    """Truncated ladder: E_n = hbar omega0 (n + 1/2), x_{n,n+1} = sqrt((n+1) hbar / (2 m omega0))."""
    if dim < 2:
        raise DimensionError("oscillator truncation needs dim >= 2")
    system = LevelSystem(tuple(hbar * omega0 * (n + 0.5) for n in range(dim)), mass, hbar)
    x = np.zeros((dim, dim), dtype=complex)
    for n in range(dim - 1):
        x[n, n + 1] = x[n + 1, n] = math.sqrt((n + 1) * hbar / (2 * mass * omega0))
    return system, ResponseMatrix(x)


def momentum_matrix(x: ResponseMatrix, system: LevelSystem) -> ResponseMatrix:
    """p_nk = -i m omega_kn x_nk."""
    xe = _entries(x)
    if xe.shape[0] != system.dim:
        raise DimensionError(f"matrix dim {xe.shape[0]} != system dim {system.dim}")
    w = system.omega_matrix()
    return ResponseMatrix(-1j * system.mass * w.T * xe)


@dataclass(frozen=True)
class ParticleResponse:
    system: LevelSystem
    matrix: ResponseMatrix
    zeta: HalfInt = HalfInt(0)
    label: int = 1

    def __post_init__(self):
        object.__setattr__(self, "zeta", HalfInt.of(self.zeta))
        if not isinstance(self.matrix, ResponseMatrix):
            object.__setattr__(self, "matrix", ResponseMatrix(self.matrix))
        if self.matrix.dim != self.system.dim:
            raise DimensionError("response matrix and level system differ in dimension")

    def phase_factors(self, n: int) -> np.ndarray:
        """Per-target factor exp(i sgn(omega_kn) pi zeta) for the terms of level n."""
        sgn = np.sign(self.system.omega_matrix()[:, n]).astype(int)
        h = self.zeta.half_units
        return np.array([_I_POWERS[(s * h) % 4] for s in sgn], dtype=complex)


def analytic_part(pr: ParticleResponse, n: int, normals: Mapping[Mode, complex],
                  t: float = 0.0) -> complex:
    """Mean value plus the normal-variable expansion of level ``n``, without the c.c."""
    x = pr.matrix.entries
    w = pr.system.omega_matrix()
    c = pr.phase_factors(n)
    s = 0j
    for k in range(pr.system.dim):
        if k == n or x[n, k] == 0:
            continue
        a = lookup_normal(normals, n, k)
        s += c[k] * x[n, k] * a * complex(math.cos(w[k, n] * t), -math.sin(w[k, n] * t))
    return complex(x[n, n]) + s


def _evaluate(pr: ParticleResponse, n: int, normals: Mapping[Mode, complex], t: float) -> float:
    x_nn = complex(pr.matrix.entries[n, n])
    s = analytic_part(pr, n, normals, t) - x_nn
    value = x_nn + s + s.conjugate()
    if abs(value.imag) > REALNESS_TOL * max(1.0, abs(value.real)):
        raise ArithmeticError(f"response has imaginary part {value.imag:.3e}")
    return value.real


def evaluate_response(pr: ParticleResponse, n: int, r: FieldRealization, t: float = 0.0) -> float:
    """x_n(t) = x_nn + sum_k e^{i s pi zeta} x_nk a_nk e^{-i omega_kn t} + c.c."""
    if not 0 <= n < pr.system.dim:
        raise IndexError(f"level {n} out of range")
    return _evaluate(pr, n, r._normals, t)


def _wirtinger(fun: Callable[[dict], float], normals: dict, key: Mode, reversed_: bool,
               h: float) -> tuple[complex, complex]:
    """(d/da, d/da*) of ``fun`` w.r.t. the oriented variable stored at ``key``."""
    base = normals[key]
    # a_oriented = conj(c) when reversed, so a shift d in a shifts c by conj(d)
    shift_re = h
    shift_im = -1j * h if reversed_ else 1j * h

    def at(delta):
        normals[key] = base + delta
        try:
            return fun(normals)
        finally:
            normals[key] = base

    d_re = (at(shift_re) - at(-shift_re)) / (2 * h)
    d_im = (at(shift_im) - at(-shift_im)) / (2 * h)
    return 0.5 * (d_re - 1j * d_im), 0.5 * (d_re + 1j * d_im)


def poisson_bracket_numeric(f: ParticleResponse, g: ParticleResponse, n: int, n_prime: int,
                            r: FieldRealization, t: float = 0.0, h: float = 1e-5) -> complex:
    """sum_k (df/da_nk dg/da*_nk - dg/da_nk df/da*_nk) by central differences.

    ``f`` is evaluated at level ``n`` and ``g`` at ``n_prime`` on the same
    realization. Two states of one particle (same label, ``n != n_prime``)
    draw on independent field variables, so ``g`` does not see the
    perturbations of the variables of ``f``. Responses of two particles share
    the variables, including a_nm = conj(a_mn).
    """
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    normals = r.normals()
    shared = not (f.label == g.label and n != n_prime)
    fun_f = lambda nm: _evaluate(f, n, nm, t)
    fun_g = lambda nm: _evaluate(g, n_prime, nm, t)
    total = 0j
    for k in range(f.system.dim):
        if k == n:
            continue
        key, rev = canonical(n, k)
        if key not in normals:
            if f.matrix.entries[n, k] != 0:
                raise MissingModeError(f"mode ({n}, {k}) not present in realization")
            continue
        df, df_c = _wirtinger(fun_f, normals, key, rev, h)
        if shared:
            dg, dg_c = _wirtinger(fun_g, normals, key, rev, h)
        else:
            dg = dg_c = 0j
        total += df * dg_c - dg * df_c
    return total


def bracket_closed_form(x: ResponseMatrix, system: LevelSystem, n: int) -> complex:
    """2 i m sum_k omega_kn |x_nk|^2."""
    return 1j * trk_sum(x, system, n)


def trk_sum(x: ResponseMatrix, system: LevelSystem, n: int) -> float:
    """2 m sum_{k != n} omega_kn |x_nk|^2; equals hbar wherever the ladder is complete."""
    xe = _entries(x)
    if not 0 <= n < xe.shape[0]:
        raise IndexError(f"level {n} out of range for dim {xe.shape[0]}")
    w = system.omega_matrix()[:, n]
    mag = np.abs(xe[n, :]) ** 2
    mag[n] = 0.0
    return float(2 * system.mass * np.dot(w, mag))


def trk_table(x: ResponseMatrix, system: LevelSystem) -> list[dict]:
    """Rows of level, sum, deviation from hbar, boundary flag."""
    rows = []
    for n in range(system.dim):
        s = trk_sum(x, system, n)
        rows.append({"level": n, "sum": s, "deviation": s - system.hbar,
                     "boundary": n == system.dim - 1})
    return rows


def commutator(a, b) -> np.ndarray:
    ae, be = _entries(a), _entries(b)
    if ae.shape != be.shape:
        raise DimensionError(f"shape mismatch {ae.shape} vs {be.shape}")
    return ae @ be - be @ ae


def canonical_commutator_deviation(x: ResponseMatrix, p: ResponseMatrix, hbar: float) -> np.ndarray:
    """Entrywise |[x, p] - i hbar 1| on the block of levels 0 .. d-2."""
    c = commutator(x, p)
    d = c.shape[0]
    return np.abs(c - 1j * hbar * np.eye(d))[: d - 1, : d - 1]


def heisenberg_residual(x: ResponseMatrix, p: ResponseMatrix, system: LevelSystem) -> float:
    """max |[x, H]/(i hbar) - p/m| over levels 1 .. d-2, with H = diag(E)."""
    xe, pe = _entries(x), _entries(p)
    d = system.dim
    if xe.shape != (d, d) or pe.shape != (d, d):
        raise DimensionError("matrices must match the level system")
    if d <= 2:
        warnings.warn("no interior levels; residual over empty block is 0", TruncationWarning,
                      stacklevel=2)
        return 0.0
    h = np.diag(np.asarray(system.energies, dtype=complex))
    r = commutator(xe, h) / (1j * system.hbar) - pe / system.mass
    return float(np.max(np.abs(r[1 : d - 1, 1 : d - 1])))


def heisenberg_operator(x: ResponseMatrix, system: LevelSystem, t: float) -> np.ndarray:
    """x(t) = sum_{n,k} x_nk e^{-i omega_kn t} |n><k|."""
    w = system.omega_matrix()
    return _entries(x) * np.exp(-1j * w.T * t)


def schrodinger_element(x: ResponseMatrix, system: LevelSystem, n: int, k: int, t: float) -> complex:
    """<n(t)| x |k(t)> with |n(t)> = exp(-i E_n t / hbar) |n>."""
    d = system.dim
    e = np.asarray(system.energies)
    basis = np.eye(d, dtype=complex)
    bra = basis[n] * np.exp(-1j * e[n] * t / system.hbar)
    ket = basis[k] * np.exp(-1j * e[k] * t / system.hbar)
    return complex(bra.conj() @ _entries(x) @ ket)
