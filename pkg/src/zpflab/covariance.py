"""Field-induced covariance of two particles' observables.

Three routes to the same number:

* configuration averages over the two degenerate assignments C and D, giving
  the closed form ``-1/4 (f_nn - f_mm)(g_nn - g_mm) + 1/2 s (f_nm g_mn + f_mn g_nm)``
  with ``s = (-1)**zeta``;
* the covariance of ``f (x) g`` in the entangled state
  ``(|n>|m> + s |m>|n>) / sqrt(2)``;
* Monte Carlo over field realizations, configurations and times.

The Monte Carlo route averages products of the normal-variable expansions
(mean plus ``sum_k f_nk a_nk e^{-i omega_kn t}``, no c.c.), which is the
average the pairing rule E[a_nk a_ml] = delta_nl delta_km is applied to.
Averaging the full real series instead counts the shared mode twice, once
through each conjugate half; ``series="real"`` exposes that variant.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .errors import DimensionError, ParityError, SameLevelError
from .halfint import HalfInt, HalfIntLike
from .modes import (STREAM_AUX, STREAM_PHASES, STREAM_PHASES_ALT, all_modes, canonical,
                    parse_seed, phase_block, uniform_block)
from .response import LevelSystem, ParticleResponse, ResponseMatrix

IMAG_TOL = 1e-10
DEFAULT_BATCHES = 20
MIN_SAMPLES = 1000


@dataclass(frozen=True)
class ObservablePair:
    f: ResponseMatrix
    g: ResponseMatrix

    def __post_init__(self):
        for name in ("f", "g"):
            v = getattr(self, name)
            if not isinstance(v, ResponseMatrix):
                object.__setattr__(self, name, ResponseMatrix(v))
        if self.f.dim != self.g.dim:
            raise DimensionError(f"f is {self.f.dim}-dimensional, g is {self.g.dim}-dimensional")

    @property
    def dim(self) -> int:
        return self.f.dim

    def means(self, n: int, m: int) -> tuple[float, float, float, float]:
        f, g = self.f.entries, self.g.entries
        return f[n, n].real, f[m, m].real, g[n, n].real, g[m, m].real


class Configuration(enum.Enum):
    C = "C"  # particle 1 in n, particle 2 in m
    D = "D"  # swapped


def _sign(zeta: HalfIntLike) -> int:
    z = HalfInt.of(zeta)
    if not z.is_integer:
        raise ParityError(f"zeta must be an integer here, got {z}")
    return z.sign_power()


def _check_levels(obs: ObservablePair, n: int, m: int) -> None:
    if n == m:
        raise SameLevelError("no shared mode correlates a particle pair in one level")
    for lvl in (n, m):
        if not 0 <= lvl < obs.dim:
            raise IndexError(f"level {lvl} out of range for dim {obs.dim}")


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        raise ArithmeticError(f"{what} has imaginary part {z.imag:.3e}")
    return z.real


def config_average(obs: ObservablePair, n: int, m: int, zeta: HalfIntLike,
                   cfg: Configuration) -> float:
    """Average of f1 g2 in one configuration; the paired term enters through its real part."""
    _check_levels(obs, n, m)
    s = _sign(zeta)
    if cfg is Configuration.D:
        n, m = m, n
    f, g = obs.f.entries, obs.g.entries
    return float((f[n, n] * g[m, m]).real + s * (f[n, m] * g[m, n]).real)


def covariance_terms(obs: ObservablePair, n: int, m: int, zeta: HalfIntLike) -> tuple[float, float]:
    """(classical, shared-mode) contributions of the closed form."""
    _check_levels(obs, n, m)
    s = _sign(zeta)
    f, g = obs.f.entries, obs.g.entries
    classical = -0.25 * (f[n, n] - f[m, m]) * (g[n, n] - g[m, m])
    shared = 0.5 * s * (f[n, m] * g[m, n] + f[m, n] * g[n, m])
    return _real(complex(classical), "classical term"), _real(complex(shared), "shared-mode term")


def analytic_covariance(obs: ObservablePair, n: int, m: int, zeta: HalfIntLike) -> float:
    """Equal-weight mixture of C and D minus the product of mixture means."""
    avg = 0.5 * (config_average(obs, n, m, zeta, Configuration.C)
                 + config_average(obs, n, m, zeta, Configuration.D))
    fnn, fmm, gnn, gmm = obs.means(n, m)
    return avg - 0.25 * (fnn + fmm) * (gnn + gmm)


def independent_covariance(obs: ObservablePair, n: int, m: int) -> float:
    """Particles on independent realizations: mean minus own level value, for both."""
    fnn, _, _, gmm = obs.means(n, m)
    f_bar, g_bar = fnn, gmm  # averages over independent phases leave only the diagonal
    return (f_bar - fnn) * (g_bar - gmm)


class HasLevelVector(Protocol):
    def level_vector(self, dim: int) -> np.ndarray: ...


@dataclass(frozen=True)
class EntangledState:
    n: int
    m: int
    sign: int

    def __post_init__(self):
        if self.n == self.m:
            raise SameLevelError("no entanglement without a correlating mode (n == m)")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def symmetric(self) -> bool:
        return self.sign == 1

    def level_vector(self, dim: int) -> np.ndarray:
        if max(self.n, self.m) >= dim:
            raise DimensionError(f"levels ({self.n}, {self.m}) exceed dim {dim}")
        v = np.zeros(dim * dim, dtype=complex)
        v[self.n * dim + self.m] += 1 / math.sqrt(2)
        v[self.m * dim + self.n] += self.sign / math.sqrt(2)
        return v


def build_entangled_state(n: int, m: int, zeta: HalfIntLike) -> EntangledState:
    return EntangledState(n, m, _sign(zeta))


def product_state(n: int, m: int, dim: int) -> np.ndarray:
    """|n>_1 |m>_2."""
    v = np.zeros(dim * dim, dtype=complex)
    v[n * dim + m] = 1.0
    return v


def quantum_covariance(obs: ObservablePair, psi: HasLevelVector | np.ndarray) -> float:
    """<f (x) g> - <f (x) 1><1 (x) g> in the two-particle level space."""
    d = obs.dim
    v = psi if isinstance(psi, np.ndarray) else psi.level_vector(d)
    v = np.asarray(v, dtype=complex)
    if v.shape != (d * d,):
        raise DimensionError(f"state has shape {v.shape}, expected ({d * d},)")
    f, g = obs.f.entries, obs.g.entries
    eye = np.eye(d)
    norm = np.vdot(v, v).real
    fg = np.vdot(v, np.kron(f, g) @ v) / norm
    f1 = np.vdot(v, np.kron(f, eye) @ v) / norm
    g2 = np.vdot(v, np.kron(eye, g) @ v) / norm
    return _real(complex(fg - f1 * g2), "quantum covariance")


@dataclass
class CovarianceReport:
    estimate: float
    standard_error: float
    samples: int
    analytic: float
    quantum: float
    trace: list[dict] = field(default_factory=list, repr=False)

    @property
    def z_score(self) -> float:
        diff = self.estimate - self.analytic
        if self.standard_error == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / self.standard_error

    CSV_FIELDS = ("estimate", "standard_error", "samples", "analytic", "quantum", "z_score")

    def csv_row(self) -> dict:
        return {k: getattr(self, k) for k in self.CSV_FIELDS}

    def to_json(self) -> dict:
        return self.csv_row()


def _level_waves(phases: np.ndarray, index: dict, system: LevelSystem, level: int,
                 t: np.ndarray) -> np.ndarray:
    """(N, dim) array of a_{level,k} e^{-i omega_{k,level} t}; column ``level`` is zero."""
    d = system.dim
    w = system.omega_matrix()[:, level]
    angle = np.zeros((phases.shape[0], d))
    for k in range(d):
        if k == level:
            continue
        key, rev = canonical(level, k)
        col = phases[:, index[key]]
        angle[:, k] = (-col if rev else col) - w[k] * t
    waves = np.exp(1j * angle)
    waves[:, level] = 0
    return waves


def _coefficients(pr: ParticleResponse, level: int) -> np.ndarray:
    coef = pr.phase_factors(level) * pr.matrix.entries[level]
    coef[level] = 0
    return coef


@dataclass(frozen=True)
class _MCSetup:
    p1: ParticleResponse
    p2: ParticleResponse
    n: int
    m: int
    seed: int
    weight_c: float
    independent: bool
    series: str


def _batch_sums(setup: _MCSetup, start: int, count: int) -> tuple[complex, complex, complex, int]:
    sys = setup.p1.system
    keys = all_modes(sys.dim)
    index = {k: i for i, k in enumerate(keys)}
    ph1 = phase_block(setup.seed, len(keys), start, count, STREAM_PHASES)
    aux = uniform_block(setup.seed, 2, start, count, STREAM_AUX)
    in_c = aux[:, 0] < setup.weight_c
    t = aux[:, 1] * sys.fundamental_period()
    n, m = setup.n, setup.m
    f, g = setup.p1.matrix.entries, setup.p2.matrix.entries

    w1_n = _level_waves(ph1, index, sys, n, t)
    w1_m = _level_waves(ph1, index, sys, m, t)
    if setup.independent:
        ph2 = phase_block(setup.seed, len(keys), start, count, STREAM_PHASES_ALT)
        w2_n = _level_waves(ph2, index, sys, n, t)
        w2_m = _level_waves(ph2, index, sys, m, t)
    else:
        w2_n, w2_m = w1_n, w1_m

    # particle 1 in n / particle 2 in m under C, swapped under D
    u = np.where(in_c, f[n, n] + w1_n @ _coefficients(setup.p1, n),
                 f[m, m] + w1_m @ _coefficients(setup.p1, m))
    v = np.where(in_c, g[m, m] + w2_m @ _coefficients(setup.p2, m),
                 g[n, n] + w2_n @ _coefficients(setup.p2, n))
    if setup.series == "real":
        f_diag = np.where(in_c, f[n, n].real, f[m, m].real)
        g_diag = np.where(in_c, g[m, m].real, g[n, n].real)
        u = (2 * u.real - f_diag).astype(complex)
        v = (2 * v.real - g_diag).astype(complex)
    return complex(u.sum()), complex(v.sum()), complex((u * v).sum()), count


def _cov_from_sums(su: complex, sv: complex, suv: complex, cnt: int) -> float:
    return (suv / cnt - su * sv / cnt**2).real


def _run_mc(setup: _MCSetup, samples: int, batches: int, workers: int,
            analytic: float) -> tuple[float, float, list[dict]]:
    edges = [b * samples // batches for b in range(batches + 1)]
    spans = [(edges[b], edges[b + 1] - edges[b]) for b in range(batches)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(lambda sp: _batch_sums(setup, *sp), spans))
    else:
        sums = [_batch_sums(setup, *sp) for sp in spans]

    per_batch = np.array([_cov_from_sums(*s) for s in sums])
    trace = []
    acc = [0j, 0j, 0j, 0]
    for b, s in enumerate(sums):
        acc = [acc[i] + s[i] for i in range(4)]
        if b >= 1:
            se = float(np.std(per_batch[: b + 1], ddof=1) / math.sqrt(b + 1))
            trace.append({"samples": acc[3], "estimate": _cov_from_sums(*acc),
                          "stderr": se, "analytic": analytic})
    estimate = _cov_from_sums(*acc)
    se = float(np.std(per_batch, ddof=1) / math.sqrt(batches))
    return estimate, se, trace


def _default_system(dim: int) -> LevelSystem:
    return LevelSystem(tuple(k + 0.5 for k in range(dim)))


def mc_covariance(obs: ObservablePair, n: int, m: int, zeta: HalfIntLike, samples: int,
                  seed: int | str, system: LevelSystem | None = None,
                  particle_zetas: tuple[HalfIntLike, HalfIntLike] | None = None,
                  batches: int = DEFAULT_BATCHES, workers: int = 1,
                  weights: tuple[float, float] = (0.5, 0.5),
                  series: str = "analytic") -> CovarianceReport:
    """Monte Carlo covariance of f on particle 1 and g on particle 2, shared field.

    ``zeta`` is the relative phase parameter; unless ``particle_zetas`` is
    given, particle 1 carries ``zeta`` and particle 2 carries 0. ``weights``
    overrides the equal C/D weighting and exists for negative controls only.
    """
    _check_levels(obs, n, m)
    z12 = HalfInt.of(zeta)
    _sign(z12)
    if particle_zetas is None:
        particle_zetas = (z12, HalfInt(0))
    z1, z2 = (HalfInt.of(z) for z in particle_zetas)
    if abs(z1 - z2) != z12:
        raise ValueError(f"particle phases {z1}, {z2} do not give zeta12 = {z12}")
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if batches < 2 or samples < batches:
        raise ValueError("need at least two non-empty batches")
    if series not in ("analytic", "real"):
        raise ValueError(f"unknown series kind {series!r}")
    if not math.isclose(sum(weights), 1.0):
        raise ValueError("configuration weights must sum to 1")
    system = system or _default_system(obs.dim)
    if system.dim != obs.dim:
        raise DimensionError("level system and observables differ in dimension")

    setup = _MCSetup(ParticleResponse(system, obs.f, z1, 1), ParticleResponse(system, obs.g, z2, 2),
                     n, m, parse_seed(seed), float(weights[0]), False, series)
    analytic = analytic_covariance(obs, n, m, z12)
    quantum = quantum_covariance(obs, build_entangled_state(n, m, z12))
    est, se, trace = _run_mc(setup, samples, batches, workers, analytic)
    return CovarianceReport(est, se, samples, analytic, quantum, trace)


def mc_independent_covariance(obs: ObservablePair, n: int, m: int, samples: int,
                              seed: int | str, system: LevelSystem | None = None,
                              batches: int = DEFAULT_BATCHES) -> CovarianceReport:
    """Particle 1 in n, particle 2 in m, each on its own field realization."""
    if n == m:
        raise SameLevelError("levels must differ")
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    system = system or _default_system(obs.dim)
    setup = _MCSetup(ParticleResponse(system, obs.f, 0, 1), ParticleResponse(system, obs.g, 0, 2),
                     n, m, parse_seed(seed), 1.0, True, "analytic")
    exact = independent_covariance(obs, n, m)
    est, se, trace = _run_mc(setup, samples, batches, 1, exact)
    return CovarianceReport(est, se, samples, exact, exact, trace)
