import math

import numpy as np
from hypothesis import given, settings, strategies as st

from zpflab.bipartite import BipartitePair, bracket_xx_distinct, bracket_xx_same
from zpflab.covariance import (ObservablePair, analytic_covariance, build_entangled_state,
                               covariance_terms, quantum_covariance)
from zpflab.halfint import HalfInt
from zpflab.modes import uniform_block
from zpflab.response import (LevelSystem, ResponseMatrix, harmonic_oscillator, momentum_matrix,
                             trk_sum)
from zpflab.spin import exchange_factor, pauli_feasibility, spin_covariance

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian(draw, dim):
    re = np.array(draw(st.lists(finite, min_size=dim * dim, max_size=dim * dim))).reshape(dim, dim)
    im = np.array(draw(st.lists(finite, min_size=dim * dim, max_size=dim * dim))).reshape(dim, dim)
    z = re + 1j * im
    return ResponseMatrix((z + z.conj().T) / 2)


@st.composite
def covariance_case(draw):
    d = draw(st.integers(2, 5))
    n = draw(st.integers(0, d - 1))
    m = draw(st.integers(0, d - 1).filter(lambda v: v != n))
    return ObservablePair(draw(hermitian(d)), draw(hermitian(d))), n, m


@settings(max_examples=60, deadline=None)
@given(covariance_case(), st.integers(0, 5))
def test_analytic_matches_quantum(case, zeta):
    obs, n, m = case
    a = analytic_covariance(obs, n, m, zeta)
    q = quantum_covariance(obs, build_entangled_state(n, m, zeta))
    assert abs(a - q) <= 1e-12 * max(1.0, abs(a))


@settings(max_examples=60, deadline=None)
@given(covariance_case())
def test_parity_flips_only_the_shared_term(case):
    obs, n, m = case
    c0, s0 = covariance_terms(obs, n, m, 0)
    c1, s1 = covariance_terms(obs, n, m, 1)
    assert c0 == c1 and math.isclose(s0, -s1, abs_tol=1e-15)


@settings(max_examples=60, deadline=None)
@given(covariance_case(), st.integers(0, 3), st.integers(-5, 5),
       st.floats(0, 2 * math.pi, allow_nan=False))
def test_spin_covariance_reduces(case, zeta, two_g, phi):
    obs, n, m = case
    g = (HalfInt(2 * two_g + 1), HalfInt(2 * two_g - 1))
    ref = analytic_covariance(obs, n, m, zeta)
    assert abs(spin_covariance(obs, n, m, zeta, g, phi) - ref) <= 1e-12 * max(1.0, abs(ref))


@given(st.integers(0, 20), st.integers(-20, 20))
def test_exchange_factor_is_parity(zeta, two_g):
    f = exchange_factor(zeta, HalfInt(two_g))
    assert f == (1 if (zeta - two_g) % 2 == 0 else -1)


@given(st.integers(0, 6).map(lambda u: HalfInt(2 * u + 1)), st.integers(3, 6))
def test_pauli_never_three(u, k):
    assert not pauli_feasibility(u, k).feasible


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 9), st.integers(-4, 4), st.integers(0, 4))
def test_integer_relative_phase_never_correlates_positions(d, z2, dz):
    system, x = harmonic_oscillator(d)
    for n in range(d):
        for m in range(d):
            pair = BipartitePair.identical(system, x, z2 + dz, z2, n, m)
            val = bracket_xx_same(pair) if n == m else bracket_xx_distinct(pair)
            assert val == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.1, 2.0), min_size=2, max_size=6), st.floats(0.2, 3.0), st.floats(0.2, 3.0))
def test_trk_matches_commutator_diagonal(gaps, mass, hbar):
    energies = tuple(np.cumsum(gaps))
    system = LevelSystem(energies, mass, hbar)
    rng = np.random.default_rng(len(gaps))
    z = rng.normal(size=(len(gaps),) * 2) + 1j * rng.normal(size=(len(gaps),) * 2)
    x = ResponseMatrix((z + z.conj().T) / 2)
    p = momentum_matrix(x, system).entries
    c = x.entries @ p - p @ x.entries
    for n in range(system.dim):
        assert math.isclose(c[n, n].imag, trk_sum(x, system, n), rel_tol=1e-9, abs_tol=1e-9)


@given(st.integers(0, 2**64 - 1), st.integers(0, 50), st.integers(1, 20), st.integers(1, 9))
def test_counter_draws_are_partition_free(seed, start, count, width):
    whole = uniform_block(seed, width, start, count)
    cut = count // 2
    parts = np.vstack([uniform_block(seed, width, start, cut),
                       uniform_block(seed, width, start + cut, count - cut)])
    assert np.array_equal(whole, parts)
