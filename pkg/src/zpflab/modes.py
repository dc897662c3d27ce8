"""Random-phase field modes, normal variables and quadratures.

A mode is the unordered level pair {n, k}; it is stored once under the
canonical key ``(min, max)`` and the reversed orientation is obtained by
conjugation, ``a_kn = conj(a_nk)``.

Sampling is counter based: realization ``j`` of a stream is a pure function of
``(seed, stream, j)``. Each realization owns a fixed stride of Philox blocks, so
any contiguous range of realizations can be generated in one vectorized call
and the result does not depend on how the range is partitioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import MissingModeError

TWO_PI = 2.0 * math.pi
_MASK64 = (1 << 64) - 1

Mode = tuple[int, int]

# Stream tags keep independent uses of one seed apart.
STREAM_PHASES = 0
STREAM_AUX = 1
STREAM_PHASES_ALT = 2


def canonical(n: int, k: int) -> tuple[Mode, bool]:
    """Return the canonical key of mode (n, k) and whether it was reversed."""
    if n == k:
        raise ValueError(f"a mode joins two different levels, got ({n}, {k})")
    if n < 0 or k < 0:
        raise ValueError(f"level indices must be >= 0, got ({n}, {k})")
    return ((n, k), False) if n < k else ((k, n), True)


def all_modes(dim: int) -> list[Mode]:
    """Every canonical mode of a ``dim``-level system, in lexicographic order."""
    return [(n, k) for n in range(dim) for k in range(n + 1, dim)]


def parse_seed(seed: int | str) -> int:
    """Accept decimal or 0x-prefixed hex; reduce to 64 bits."""
    if isinstance(seed, str):
        seed = int(seed.strip(), 0)
    return int(seed) & _MASK64


def uniform_block(seed: int | str, n_draws: int, start: int, count: int,
                  stream: int = STREAM_PHASES) -> np.ndarray:
    """Uniform [0, 1) draws for realizations ``start .. start+count-1``.

    Row ``i`` holds the ``n_draws`` numbers of realization ``start + i`` and is
    identical to what ``uniform_block(seed, n_draws, start + i, 1)`` returns.
    """
    if n_draws < 1 or count < 0 or start < 0:
        raise ValueError("need n_draws >= 1, count >= 0, start >= 0")
    stride = -(-n_draws // 4)  # Philox4x64 emits 4 words per counter value
    key = parse_seed(seed) | (int(stream) << 64)
    gen = np.random.Generator(np.random.Philox(key=key, counter=start * stride))
    raw = gen.random(count * stride * 4)
    return raw.reshape(count, stride * 4)[:, :n_draws]


def phase_block(seed: int | str, n_modes: int, start: int, count: int,
                stream: int = STREAM_PHASES) -> np.ndarray:
    """Phases in [0, 2pi) with shape ``(count, n_modes)``."""
    return TWO_PI * uniform_block(seed, n_modes, start, count, stream)


@dataclass(frozen=True)
class FieldRealization:
    """One draw of random phases over a set of canonical modes."""

    phases: Mapping[Mode, float]
    seed: int = 0
    index: int = 0
    _normals: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        clean = {}
        for key, phi in self.phases.items():
            ckey, _ = canonical(*key)
            if ckey != tuple(key):
                raise ValueError(f"phase keys must be canonical (from < to), got {key}")
            clean[ckey] = float(phi) % TWO_PI
        object.__setattr__(self, "phases", MappingProxyType(clean))
        object.__setattr__(self, "_normals",
                           {k: complex(math.cos(p), math.sin(p)) for k, p in clean.items()})

    @classmethod
    def from_phases(cls, phases: Mapping[tuple[int, int], float], seed: int = 0) -> FieldRealization:
        """Build from phases keyed in either orientation; a reversed key gives -phi."""
        canon = {}
        for (n, k), phi in phases.items():
            key, rev = canonical(n, k)
            canon[key] = -phi if rev else phi
        return cls(canon, seed=seed)

    @property
    def modes(self) -> frozenset[Mode]:
        return frozenset(self.phases)

    def has_mode(self, n: int, k: int) -> bool:
        return canonical(n, k)[0] in self._normals

    def normals(self) -> dict[Mode, complex]:
        """Canonical mode -> a_nk. A fresh dict, safe to perturb."""
        return dict(self._normals)


def sample_realization(modes: Iterable[tuple[int, int]], seed: int | str,
                       index: int = 0, stream: int = STREAM_PHASES) -> FieldRealization:
    """Draw realization number ``index`` over ``modes`` from the given seed."""
    keys = sorted({canonical(n, k)[0] for n, k in modes})
    if not keys:
        raise ValueError("need at least one mode")
    row = phase_block(seed, len(keys), index, 1, stream)[0]
    return FieldRealization(dict(zip(keys, row.tolist())), seed=parse_seed(seed), index=index)


def lookup_normal(normals: Mapping[Mode, complex], n: int, k: int) -> complex:
    key, rev = canonical(n, k)
    try:
        a = normals[key]
    except KeyError:
        raise MissingModeError(f"mode ({n}, {k}) not present in realization") from None
    return a.conjugate() if rev else a


def normal_variable(r: FieldRealization, n: int, k: int) -> complex:
    """a_nk = exp(i phi_nk); the reversed key returns the conjugate."""
    return lookup_normal(r._normals, n, k)


@dataclass(frozen=True)
class Quadratures:
    q: float
    p: float


def quadratures_from_normal(a: complex, omega: float, hbar: float = 1.0) -> Quadratures:
    if omega == 0:
        raise ValueError("quadratures undefined for a zero-frequency mode")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    w = abs(omega)
    a = complex(a)
    q = math.sqrt(hbar / (2 * w)) * (a + a.conjugate())
    p = -1j * math.sqrt(hbar * w / 2) * (a - a.conjugate())
    return Quadratures(q.real, p.real)


def normal_from_quadratures(quad: Quadratures, omega: float, hbar: float = 1.0) -> complex:
    if omega == 0:
        raise ValueError("quadratures undefined for a zero-frequency mode")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    w = abs(omega)
    re = quad.q / (2 * math.sqrt(hbar / (2 * w)))
    im = quad.p / (2 * math.sqrt(hbar * w / 2))
    return complex(re, im)


def pairing_estimate(levels: int, n_samples: int, seed: int | str,
                     ) -> dict[tuple[Mode, Mode], tuple[complex, float, complex]]:
    """Monte Carlo estimate of E[a_nk a_ml] for every ordered pair with n != m.

    Returns ``{((n, k), (m, l)): (mean, stderr, expected)}`` where ``stderr`` is
    the standard error of the complex mean, sqrt(E|z - mean|^2 / N), and
    ``expected`` is delta_nl * delta_km.
    """
    keys = all_modes(levels)
    index = {key: i for i, key in enumerate(keys)}
    a = np.exp(1j * phase_block(seed, len(keys), 0, n_samples))
    oriented = [(n, k) for n in range(levels) for k in range(levels) if n != k]

    def column(n, k):
        key, rev = canonical(n, k)
        col = a[:, index[key]]
        return col.conj() if rev else col

    out = {}
    for n, k in oriented:
        ank = column(n, k)
        for m, l in oriented:
            if m == n:
                continue
            z = ank * column(m, l)
            mean = z.mean()
            se = math.sqrt(float(np.mean(np.abs(z - mean) ** 2)) / n_samples)
            expected = 1.0 + 0j if (n == l and k == m) else 0j
            out[((n, k), (m, l))] = (complex(mean), se, expected)
    return out
