import math

import numpy as np
import pytest

import oracles
from zpflab.covariance import ObservablePair, analytic_covariance, quantum_covariance
from zpflab.errors import ParityError
from zpflab.halfint import HalfInt
from zpflab.response import random_hermitian
from zpflab.spin import (CompleteState, Parity, build_complete_state, exchange_factor, exchange_parity,
                         pauli_feasibility, required_zeta_parity, spin_covariance,
                         spin_space_covariance, swap_parity)


def test_exchange_factor_against_oracle():
    for two_g in range(-7, 8):
        for zeta in range(8):
            assert exchange_factor(zeta, HalfInt(two_g)) == oracles.exchange_factor(zeta, two_g)


def test_exchange_factor_needs_integer_zeta():
    with pytest.raises(ParityError):
        exchange_factor("1/2", "1/2")


def test_required_parity():
    assert required_zeta_parity("1/2") is Parity.ODD
    assert required_zeta_parity("-3/2") is Parity.ODD
    assert required_zeta_parity(1) is Parity.EVEN


@pytest.mark.parametrize("clockwise", [True, False])
@pytest.mark.parametrize("phis", [(0.2, 2.0), (2.0, 0.2)])
def test_brute_force_exchange_agrees(clockwise, phis):
    for two_g in (-3, -1, 1, 3, 0, 2):
        for zeta in range(4):
            st = CompleteState(0, HalfInt(two_g), 2, HalfInt(two_g - 2), (-1) ** zeta)
            assert exchange_parity(st, 3, *phis, clockwise) == exchange_factor(zeta, HalfInt(two_g))


def test_spin_half_pair():
    st = build_complete_state(0, "1/2", 1, "-1/2", zeta=1)
    assert exchange_parity(st) == 1
    assert swap_parity(st.energy_state()) == -1
    # a bare slot swap carries no extra turn, so it sees only the state's sign
    assert swap_parity(st) == -1


def test_swap_parity_detects_non_eigenstate():
    v = np.zeros(4, dtype=complex)
    v[1], v[2] = 1.0, 0.5
    assert swap_parity(v) is None
    assert swap_parity(np.array([0, 1, -1, 0], dtype=complex)) == -1


def test_spin_covariance_phi_independent():
    rng = np.random.default_rng(0)
    obs = ObservablePair(random_hermitian(4, rng), random_hermitian(4, rng))
    for zeta in (0, 1):
        ref = analytic_covariance(obs, 1, 3, zeta)
        for phi in (0, math.pi / 3, math.pi, 2 * math.pi, 4.1):
            assert spin_covariance(obs, 1, 3, zeta, ("1/2", "-1/2"), phi) == pytest.approx(ref, abs=1e-12)


def test_complete_state_level_rendering():
    rng = np.random.default_rng(1)
    obs = ObservablePair(random_hermitian(3, rng), random_hermitian(3, rng))
    st = build_complete_state(0, "1/2", 2, "-1/2", zeta=1, phi=0.9)
    assert quantum_covariance(obs, st) == pytest.approx(analytic_covariance(obs, 0, 2, 1), abs=1e-12)


def test_orthogonal_spin_slots_remove_shared_term():
    obs = ObservablePair([[0, 1], [1, 0]], [[0, 1], [1, 0]])
    st = build_complete_state(0, "1/2", 1, "-1/2", zeta=1)
    assert spin_space_covariance(obs, st) == pytest.approx(0.0, abs=1e-13)
    same = build_complete_state(0, "1/2", 1, "1/2", zeta=1)
    assert spin_space_covariance(obs, same) == pytest.approx(-1.0, abs=1e-13)


def test_pauli_examples():
    r = pauli_feasibility("3/2", 2)
    ws = {tuple(str(g) for g in w) for w in r.witnesses}
    assert ("3/2", "1/2") in ws and ("-1/2", "-3/2") in ws
    assert pauli_feasibility("1/2", 2).witnesses == ((HalfInt(1), HalfInt(-1)),)
    r3 = pauli_feasibility("3/2", 3)
    assert not r3.feasible and r3.certificate["pair_extensions"]
    for row in r3.certificate["pair_extensions"]:
        assert row["fails"] and row["even_offset"]
    assert pauli_feasibility(1, 2).applicable is False


@pytest.mark.parametrize("two_u", [1, 3, 5, 7])
def test_pauli_against_oracle(two_u):
    best = oracles.max_pauli_clique(two_u)
    for k in range(1, 6):
        assert pauli_feasibility(HalfInt(two_u), k).feasible == (k <= best)
