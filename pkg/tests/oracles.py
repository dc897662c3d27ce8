"""Independent reference implementations used by the tests.

These use explicit loops, Dirac-style sums and plain floats/complex numbers,
and do not import any package internals. They are deliberately slow and simple.
"""

from __future__ import annotations

import cmath
import itertools
import math


def oscillator_x(d, mass=1.0, omega0=1.0, hbar=1.0):
    x = [[0j] * d for _ in range(d)]
    for n in range(d - 1):
        v = math.sqrt((n + 1) * hbar / (2 * mass * omega0))
        x[n][n + 1] = x[n + 1][n] = v
    return x


def trk(x, energies, n, mass=1.0, hbar=1.0):
    """2 m sum_k (E_k - E_n)/hbar |x_nk|^2."""
    return sum(2 * mass * (energies[k] - energies[n]) / hbar * abs(x[n][k]) ** 2
               for k in range(len(energies)) if k != n)


def matmul(a, b):
    d = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)] for i in range(d)]


def momentum(x, energies, mass=1.0, hbar=1.0):
    """p = m dx/dt from the Heisenberg equation: p_nk = i m (E_n - E_k)/hbar x_nk."""
    d = len(x)
    return [[1j * mass * (energies[n] - energies[k]) / hbar * x[n][k] for k in range(d)]
            for n in range(d)]


def response_value(x, energies, zeta, n, phases, t, hbar=1.0):
    """Real response of a particle in level n, written out with cosines.

    phases maps canonical (i<j) mode keys to phi_ij. The term toward k uses
    phase phi_nk (= -phi_kn for reversed keys) and the particle's response
    phase pi*zeta on the positive-frequency half.
    """
    total = x[n][n].real
    for k in range(len(energies)):
        if k == n:
            continue
        phi = phases[(n, k)] if n < k else -phases[(k, n)]
        w = (energies[k] - energies[n]) / hbar
        shift = math.pi * zeta * (1 if w > 0 else -1)
        amp = x[n][k]
        total += 2 * abs(amp) * math.cos(phi + cmath.phase(amp) + shift - w * t)
    return total


def entangled_covariance(f, g, n, m, sign):
    """<f g> - <f><g> in (|n m> + sign |m n>)/sqrt 2 by explicit Dirac sums."""
    branches = [((n, m), 1 / math.sqrt(2)), ((m, n), sign / math.sqrt(2))]

    def expect(op1, op2):
        s = 0j
        for (a1, a2), ca in branches:
            for (b1, b2), cb in branches:
                s += ca.conjugate() * cb * op1(a1, b1) * op2(a2, b2)
        return s

    ident = lambda i, j: 1.0 if i == j else 0.0
    fg = expect(lambda i, j: f[i][j], lambda i, j: g[i][j])
    f1 = expect(lambda i, j: f[i][j], ident)
    g2 = expect(ident, lambda i, j: g[i][j])
    return (fg - f1 * g2).real


def exchange_factor(zeta, two_gamma):
    """e^{i pi zeta} e^{i 2 pi gamma}, rounded to +-1."""
    z = cmath.exp(1j * math.pi * zeta) * cmath.exp(1j * math.pi * two_gamma)
    return round(z.real)


def max_pauli_clique(two_upsilon):
    """Largest set of spin values in -U..U with every pairwise gap exactly 1."""
    values = [h / 2 for h in range(-two_upsilon, two_upsilon + 1, 2)]
    best = 1 if values else 0
    for k in range(2, len(values) + 1):
        if any(all(abs(a - b) == 1 for a, b in itertools.combinations(c, 2))
               for c in itertools.combinations(values, k)):
            best = k
    return best


def max_odd_separated(two_upsilon):
    """Largest set of members -U..U with every pairwise difference an odd integer."""
    values = [h / 2 for h in range(-two_upsilon, two_upsilon + 1, 2)]
    best = 1
    for k in range(2, len(values) + 1):
        if any(all((a - b) % 2 == 1 for a, b in itertools.combinations(c, 2))
               for c in itertools.combinations(values, k)):
            best = k
    return best
