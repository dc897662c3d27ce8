import warnings
from itertools import combinations

import pytest

import oracles
from zpflab.bipartite import (BipartitePair, Family, FamilyTag, bracket_xp_distinct, bracket_xp_same,
                              bracket_xx_distinct, bracket_xx_same, classify_family, degeneracy,
                              pairwise_odd, phase_assignment, zeta12)
from zpflab.errors import ParityError, SameLevelError, TruncationWarning
from zpflab.halfint import HalfInt
from zpflab.modes import all_modes, sample_realization
from zpflab.response import harmonic_oscillator, poisson_bracket_numeric

ZETAS = [0, 1, 2, 3, "1/2", "3/2", "-1/2", "5/2"]


def _numeric(pair, which):
    r = sample_realization(all_modes(pair.system.dim), 31)
    g = pair.particle2 if which == "xx" else pair.momentum_response(2)
    return poisson_bracket_numeric(pair.particle1, g, pair.level1, pair.level2, r, t=0.2)


@pytest.mark.parametrize("z1,z2", [(a, b) for a in ZETAS for b in ZETAS[:5]])
def test_closed_forms_match_finite_differences(z1, z2):
    system, x = harmonic_oscillator(5)
    for n, m in [(1, 2), (2, 1), (0, 3), (2, 2), (0, 0)]:
        pair = BipartitePair.identical(system, x, z1, z2, n, m)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            xx = bracket_xx_same(pair) if n == m else bracket_xx_distinct(pair)
            xp = bracket_xp_same(pair) if n == m else bracket_xp_distinct(pair)
        assert abs(_numeric(pair, "xx") - xx) < 1e-6
        assert abs(_numeric(pair, "xp") - xp) < 1e-6


def test_half_odd_relative_phase_gives_nonzero_xx():
    system, x = harmonic_oscillator(4)
    pair = BipartitePair.identical(system, x, "1/2", 0, 1, 2)
    assert abs(bracket_xx_distinct(pair)) == pytest.approx(2 * abs(x.entries[1, 2]) ** 2)


def test_xp_same_sign_follows_zeta12():
    system, x = harmonic_oscillator(8)
    for z in range(6):
        pair = BipartitePair.identical(system, x, z, 0, 3, 3)
        assert bracket_xp_same(pair) == pytest.approx((-1) ** z * 1j, abs=1e-12)


def test_xp_same_warns_at_boundary():
    system, x = harmonic_oscillator(4)
    with pytest.warns(TruncationWarning):
        bracket_xp_same(BipartitePair.identical(system, x, 0, 0, 3, 3))


def test_same_level_errors():
    system, x = harmonic_oscillator(3)
    pair = BipartitePair.identical(system, x, 0, 0, 1, 1)
    with pytest.raises(SameLevelError):
        bracket_xx_distinct(pair)
    with pytest.raises(ValueError):
        bracket_xx_same(BipartitePair.identical(system, x, 0, 0, 0, 1))


def test_families():
    assert classify_family([0, 1, -2]).tag is Family.B
    tag = classify_family(["1/2", "-3/2"])
    assert tag.tag is Family.F and tag.upsilon == HalfInt(3)
    with pytest.raises(ParityError):
        classify_family([0, "1/2"])
    with pytest.raises(ParityError):
        FamilyTag(Family.B, "1/2")
    assert degeneracy("3/2") == 4 and degeneracy(2) == 5
    assert zeta12("1/2", "-1/2") == HalfInt(2)


def test_b_family_any_size():
    res = phase_assignment(10, FamilyTag(Family.B, 2))
    assert res.feasible and len(res.values) == 10
    assert all((a - b).as_int() % 2 == 0 for a, b in combinations(res.values, 2))


@pytest.mark.parametrize("two_u", [1, 3, 5, 7, 9])
def test_f_family_bound_matches_exhaustive_oracle(two_u):
    tag = FamilyTag(Family.F, HalfInt(two_u))
    best = oracles.max_odd_separated(two_u)
    pair = phase_assignment(2, tag)
    assert pair.feasible == (best >= 2) and pairwise_odd(pair.values)
    res = phase_assignment(3, tag)
    assert not res.feasible
    assert res.certificate["max_size"] == best
    assert res.to_json()["feasible"] is False
