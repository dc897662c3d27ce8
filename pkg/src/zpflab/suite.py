"""The acceptance battery: ten checks, each with its own tolerance and time bound.

Every criterion is a function returning a ``CriterionResult``; ``run_suite``
runs them in order. The battery is deterministic: all randomness comes from
fixed seeds.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable

import numpy as np

from .bipartite import (BipartitePair, Family, FamilyTag, bracket_xp_same, bracket_xx_distinct,
                        bracket_xx_same, pairwise_odd, phase_assignment)
from .covariance import (ObservablePair, analytic_covariance, build_entangled_state, mc_covariance,
                         quantum_covariance)
from .errors import TruncationWarning
from .halfint import HalfInt
from .modes import pairing_estimate, sample_realization, all_modes
from .report import CheckRecord
from .response import (ParticleResponse, bracket_closed_form, canonical_commutator_deviation,
                       harmonic_oscillator, momentum_matrix, poisson_bracket_numeric,
                       random_hermitian, trk_table)
from .spin import (CompleteState, Parity, build_complete_state, exchange_factor, exchange_parity,
                   pauli_feasibility, required_zeta_parity, spin_covariance, swap_parity)

SUITE_SEED = 20240607


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    elapsed: float
    time_bound: float | None
    summary: str
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def within_time(self) -> bool:
        return self.time_bound is None or self.elapsed < self.time_bound

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        bound = "" if self.time_bound is None else f" < {self.time_bound:g}s"
        verdict = "PASS" if self.ok else "FAIL"
        return (f"[{verdict}] criterion {self.number:2d} {self.title}: {self.summary} "
                f"({self.elapsed:.2f}s{bound})")

    def to_record(self) -> CheckRecord:
        return CheckRecord(f"criterion{self.number}.{self.title}", True, self.ok, self.time_bound,
                           self.ok, f"{self.summary}; {self.elapsed:.3f}s")


def _timed(number: int, title: str, bound: float | None,
           body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    passed, summary = body()
    return CriterionResult(number, title, passed, time.perf_counter() - t0, bound, summary)


# 1 -------------------------------------------------------------------------

def criterion_trk(dim: int = 10, tol: float = 1e-12) -> CriterionResult:
    def body():
        system, x = harmonic_oscillator(dim)
        rows = trk_table(x, system)
        interior = rows[:-1]
        worst = max(abs(r["deviation"]) for r in interior)
        edge = rows[-1]
        flagged = edge["boundary"] and abs(edge["deviation"]) > tol
        ok = worst <= tol and flagged
        return ok, (f"max |sum-1| over levels 0..{dim - 2} = {worst:.1e}; "
                    f"level {dim - 1} sum = {edge['sum']:g} flagged={flagged}")
    return _timed(1, "trk-sum-rule", 1.0, body)


# 2 -------------------------------------------------------------------------

def criterion_commutator(dim: int = 12, tol: float = 1e-12) -> CriterionResult:
    def body():
        system, x = harmonic_oscillator(dim)
        dev = canonical_commutator_deviation(x, momentum_matrix(x, system), system.hbar)
        worst = float(dev.max())
        return worst <= tol, f"max |[x,p]-i| on block 0..{dim - 2} = {worst:.1e}"
    return _timed(2, "canonical-commutator", 1.0, body)


# 3 -------------------------------------------------------------------------

def criterion_poisson_bracket(dim: int = 8, rel_tol: float = 1e-6, off_tol: float = 1e-8,
                              seed: int = SUITE_SEED) -> CriterionResult:
    def body():
        system, x = harmonic_oscillator(dim)
        px = ParticleResponse(system, x)
        pp = ParticleResponse(system, momentum_matrix(x, system))
        worst_rel = worst_off = 0.0
        for draw in range(3):
            r = sample_realization(all_modes(dim), seed, index=draw)
            t = 0.37 * draw
            for n in range(dim - 1):
                num = poisson_bracket_numeric(px, pp, n, n, r, t)
                ref = bracket_closed_form(x, system, n)
                worst_rel = max(worst_rel, abs(num - ref) / abs(ref))
            for n, n2 in product(range(dim), repeat=2):
                if n != n2:
                    worst_off = max(worst_off, abs(poisson_bracket_numeric(px, pp, n, n2, r, t)))
        ok = worst_rel <= rel_tol and worst_off <= off_tol
        return ok, f"max rel err {worst_rel:.1e}; max off-diagonal {worst_off:.1e}"
    return _timed(3, "numeric-poisson-bracket", 5.0, body)


# 4 -------------------------------------------------------------------------

def criterion_bipartite_signs(dim: int = 8, tol: float = 1e-12) -> CriterionResult:
    def body():
        system, x = harmonic_oscillator(dim)
        xx_max = 0.0
        xp_worst = 0.0
        pairs = 0
        for z12 in range(6):
            for z2 in (0, 1, -2):  # several absolute placements of the same difference
                z1 = z2 + z12
                for n, m in product(range(dim), repeat=2):
                    pair = BipartitePair.identical(system, x, z1, z2, n, m)
                    xx = bracket_xx_same(pair) if n == m else bracket_xx_distinct(pair)
                    xx_max = max(xx_max, abs(xx))
                    pairs += 1
                for n in range(dim - 1):
                    pair = BipartitePair.identical(system, x, z1, z2, n, n)
                    ratio = bracket_xp_same(pair) / (1j * system.hbar)
                    xp_worst = max(xp_worst, abs(ratio - (-1) ** z12))
        ok = xx_max == 0.0 and xp_worst <= tol
        return ok, (f"max |[x1,x2]| = {xx_max:g} over {pairs} level pairs; "
                    f"max |[x1,p2]/(i hbar) - (-1)^z12| = {xp_worst:.1e}")
    return _timed(4, "bipartite-bracket-signs", 1.0, body)


# 5 -------------------------------------------------------------------------

def _random_case(rng: np.random.Generator, i: int):
    d = int(rng.integers(2, 7))
    n, m = (int(v) for v in rng.choice(d, 2, replace=False))
    obs = ObservablePair(random_hermitian(d, rng), random_hermitian(d, rng))
    return obs, n, m, i % 2


def criterion_covariance(runs: int = 100, samples: int = 200_000, sigma: float = 4.0,
                         required: int = 95, tol: float = 1e-12,
                         seed: int = SUITE_SEED) -> CriterionResult:
    def body():
        rng = np.random.default_rng(seed)
        worst = 0.0
        within = 0
        for i in range(runs):
            obs, n, m, zeta = _random_case(rng, i)
            a = analytic_covariance(obs, n, m, zeta)
            q = quantum_covariance(obs, build_entangled_state(n, m, zeta))
            worst = max(worst, abs(a - q))
            rep = mc_covariance(obs, n, m, zeta, samples, seed + i)
            within += abs(rep.z_score) <= sigma
        ok = worst <= tol and within >= required
        return ok, (f"max |analytic-quantum| = {worst:.1e}; "
                    f"MC within {sigma:g} SE in {within}/{runs} runs (need {required})")
    return _timed(5, "covariance-triple-agreement", 60.0, body)


# 6 -------------------------------------------------------------------------

def criterion_pairing(levels: int = 4, samples: int = 100_000, k_se: float = 3.0,
                      seed: int = SUITE_SEED) -> CriterionResult:
    def body():
        est = pairing_estimate(levels, samples, seed)
        bad = [key for key, (mean, se, exp) in est.items()
               if abs(mean - exp) > k_se * se + 1e-12]
        return not bad, f"{len(est) - len(bad)}/{len(est)} ordered mode pairs within {k_se:g} SE"
    return _timed(6, "pairing-rule", 10.0, body)


# 7 -------------------------------------------------------------------------

def criterion_spin_statistics() -> CriterionResult:
    def body():
        mismatches = 0
        brute = 0
        for two_g, zeta in product(range(-7, 8), range(8)):
            g = HalfInt(two_g)
            factor = exchange_factor(zeta, g)
            if (factor == 1) != (zeta % 2 == two_g % 2):
                mismatches += 1
            state = CompleteState(0, g, 1, g, (-1) ** zeta)
            for phi1, phi2 in ((0.3, 1.1), (1.1, 0.3)):
                for cw in (True, False):
                    if exchange_parity(state, 2, phi1, phi2, cw) != factor:
                        brute += 1
        half = HalfInt(1)
        parity = required_zeta_parity(half)
        state = build_complete_state(0, half, 1, -half, 1)
        energy_swap = swap_parity(state.energy_state())
        physical = exchange_parity(state)
        ok = (mismatches == 0 and brute == 0 and parity is Parity.ODD
              and energy_swap == -1 and physical == 1)
        return ok, (f"parity-rule mismatches {mismatches}, brute-force disagreements {brute}; "
                    f"gamma=1/2 needs {parity.value} zeta; energy-state swap {energy_swap:+d}, "
                    f"complete-state exchange {physical:+d}")
    return _timed(7, "spin-statistics", None, body)


# 8 -------------------------------------------------------------------------

def brute_force_pauli(upsilon: HalfInt, k: int) -> bool:
    """Whether any k-tuple of spin values is pairwise unit-separated, enumerating all tuples."""
    values = [h / 2 for h in range(-upsilon.half_units, upsilon.half_units + 1, 2)]
    return any(all(abs(a - b) == 1 for a, b in combinations(t, 2))
               for t in product(values, repeat=k))


def criterion_pauli(upsilons=(1, 3, 5, 7), ks=range(2, 6)) -> CriterionResult:
    def body():
        problems = []
        for two_u in upsilons:
            u = HalfInt(two_u)
            for k in ks:
                res = pauli_feasibility(u, k)
                if k == 2 and not (res.feasible and res.witnesses):
                    problems.append(f"{u},k=2 infeasible")
                if k >= 3 and (res.feasible or not res.certificate):
                    problems.append(f"{u},k={k} feasible or uncertified")
                if brute_force_pauli(u, k) != res.feasible:
                    problems.append(f"{u},k={k} brute force disagrees")
        summary = "k=2 feasible, k=3..5 infeasible for every upsilon; brute force agrees"
        return not problems, summary if not problems else "; ".join(problems)
    return _timed(8, "pauli-exclusion", 1.0, body)


# 9 -------------------------------------------------------------------------

def criterion_phase_assignment(max_two_u: int = 9) -> CriterionResult:
    def body():
        problems = []
        for two_u in range(0, max_two_u + 1, 2):
            res = phase_assignment(10, FamilyTag(Family.B, HalfInt(two_u)))
            if not res.feasible or len(res.values) != 10 or not all(
                    (a - b).as_int() % 2 == 0 for a, b in combinations(res.values, 2)):
                problems.append(f"B upsilon={HalfInt(two_u)}")
        for two_u in range(1, max_two_u + 1, 2):
            u = HalfInt(two_u)
            res = phase_assignment(3, FamilyTag(Family.F, u))
            if res.feasible or res.certificate.get("argument") != "parity":
                problems.append(f"F upsilon={u} not certified")
                continue
            pool = FamilyTag(Family.F, u).members()
            classes = res.certificate["classes"]
            if sorted(HalfInt.of(c) for c in classes["even"] + classes["odd"]) != pool:
                problems.append(f"F upsilon={u} classes do not partition the members")
            if any(pairwise_odd(t) for t in combinations(pool, 3)):
                problems.append(f"F upsilon={u} exhaustive search found a triple")
            best = max((k for k in range(1, len(pool) + 1)
                        if any(pairwise_odd(t) for t in combinations(pool, k))), default=1)
            if best != res.certificate["max_size"]:
                problems.append(f"F upsilon={u} max size {best} vs {res.certificate['max_size']}")
        ok = not problems
        return ok, ("B feasible for N=10; F infeasible for N=3 with parity certificate, "
                    f"validated exhaustively up to |zeta| <= {HalfInt(max_two_u)}"
                    if ok else "; ".join(problems))
    return _timed(9, "phase-assignment", None, body)


# 10 ------------------------------------------------------------------------

def criterion_spin_covariance(pairs: int = 50, tol: float = 1e-12,
                              seed: int = SUITE_SEED) -> CriterionResult:
    phis = (0.0, math.pi / 3, math.pi, 2 * math.pi)

    def body():
        rng = np.random.default_rng(seed + 1)
        worst = 0.0
        for i in range(pairs):
            obs, n, m, _ = _random_case(rng, i)
            two_g = int(rng.choice([-3, -1, 1, 3]))
            gammas = (HalfInt(two_g), HalfInt(two_g - 2))
            for zeta in (0, 1):
                ref = analytic_covariance(obs, n, m, zeta)
                for phi in phis:
                    worst = max(worst, abs(spin_covariance(obs, n, m, zeta, gammas, phi) - ref))
        return worst <= tol, f"max |spin - spinless| = {worst:.1e} over {pairs} pairs x 4 phi x 2 zeta"
    return _timed(10, "spin-covariance-reduction", None, body)


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    criterion_trk, criterion_commutator, criterion_poisson_bracket, criterion_bipartite_signs,
    criterion_covariance, criterion_pairing, criterion_spin_statistics, criterion_pauli,
    criterion_phase_assignment, criterion_spin_covariance,
)


def run_suite(echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    results = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for crit in CRITERIA:
            res = crit()
            if echo:
                echo(res.line())
            results.append(res)
    return results
