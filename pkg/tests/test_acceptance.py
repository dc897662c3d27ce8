"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

Tolerances and time bounds live in ``zpflab.suite``; the lines are also
collected into the terminal summary by ``conftest.py``.
"""

import pytest

from zpflab import suite

ACCEPTANCE_LINES: list[str] = []


def _check(result):
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, line
    assert result.within_time, f"took {result.elapsed:.2f}s, bound {result.time_bound}s"


def test_sum_rule_on_truncated_oscillator():
    _check(suite.criterion_trk())


def test_canonical_commutator_interior_block():
    _check(suite.criterion_commutator())


def test_numeric_poisson_bracket():
    _check(suite.criterion_poisson_bracket())


def test_two_particle_bracket_signs():
    _check(suite.criterion_bipartite_signs())


def test_covariance_analytic_quantum_monte_carlo():
    _check(suite.criterion_covariance())


def test_pairing_rule_monte_carlo():
    _check(suite.criterion_pairing())


@pytest.mark.filterwarnings("error")
def test_spin_statistics_constraint():
    _check(suite.criterion_spin_statistics())


def test_exclusion_search_with_brute_force_cross_check():
    _check(suite.criterion_pauli())


def test_multiparticle_phase_assignment():
    _check(suite.criterion_phase_assignment())


def test_spin_covariance_reduction():
    _check(suite.criterion_spin_covariance())
