"""Dispatch a validated scenario to the module operations and collect checks."""

from __future__ import annotations

import math
import warnings
from typing import Callable

from .bipartite import BipartitePair, bracket_xp_distinct, bracket_xp_same, bracket_xx_distinct, bracket_xx_same
from .config import ScenarioConfig
from .covariance import (CovarianceReport, ObservablePair, analytic_covariance, build_entangled_state,
                         mc_covariance, quantum_covariance)
from .errors import ConfigError, TruncationWarning
from .halfint import HalfInt
from .modes import all_modes, parse_seed, sample_realization
from .report import CheckRecord, RunReport, check_close, check_equal
from .response import (canonical_commutator_deviation, heisenberg_residual,
                       momentum_matrix, poisson_bracket_numeric, trk_table)
from .spin import (build_complete_state, exchange_factor, exchange_parity, pauli_feasibility,
                   required_zeta_parity, spin_covariance, swap_parity)

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 200_000

TRACE_COLUMNS = {
    "trk": ("level", "sum", "deviation"),
    "covariance": ("samples", "estimate", "stderr", "analytic"),
}


def _param(cfg: ScenarioConfig, key: str, default=None):
    if key in cfg.params:
        return cfg.params[key]
    if default is None:
        raise ConfigError(f"experiment {cfg.experiment!r} needs params.{key}")
    return default


def _half(cfg: ScenarioConfig, key: str, default=None) -> HalfInt:
    try:
        return HalfInt.of(_param(cfg, key, default))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"params.{key}: {exc}") from None


def _levels(cfg: ScenarioConfig, dim: int) -> tuple[int, int]:
    n, m = int(_param(cfg, "n", 0)), int(_param(cfg, "m", 1))
    for name, v in (("n", n), ("m", m)):
        if v >= dim:
            raise ConfigError(f"params.{name} = {v} out of range for dim {dim}")
    return n, m


def _trk(cfg: ScenarioConfig, rep: RunReport) -> None:
    system = cfg.require_system()
    x = cfg.matrix("x")
    tol = cfg.tol("trk")
    rows = trk_table(x, system)
    rep.trace = rows
    for row in rows:
        name = f"trk.level{row['level']}"
        if row["boundary"]:
            rep.add(CheckRecord(name, "truncation boundary", row["sum"], None, True,
                                f"flagged: sum deviates from hbar by {row['deviation']:.3g}"))
        else:
            rep.add(check_close(name, system.hbar, row["sum"], tol))


def _commutator(cfg: ScenarioConfig, rep: RunReport) -> None:
    system = cfg.require_system()
    x = cfg.matrix("x")
    p = cfg.matrices["p"] if "p" in cfg.matrices else momentum_matrix(x, system)
    dev = canonical_commutator_deviation(x, p, system.hbar)
    rep.add(CheckRecord("commutator.interior_block", 0.0, float(dev.max()), cfg.tol("commutator"),
                        bool(dev.max() <= cfg.tol("commutator")),
                        f"levels 0..{system.dim - 2}"))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        res = heisenberg_residual(x, p, system)
    rep.add(CheckRecord("heisenberg.interior_block", 0.0, res, cfg.tol("heisenberg"),
                        bool(res <= cfg.tol("heisenberg")), "[x,H]/(i hbar) = p/m"))


def _bracket2(cfg: ScenarioConfig, rep: RunReport) -> None:
    system = cfg.require_system()
    x = cfg.matrix("x")
    z1, z2 = _half(cfg, "zeta1", 0), _half(cfg, "zeta2", 0)
    n, m = _levels(cfg, system.dim)
    seed = parse_seed(_param(cfg, "seed", DEFAULT_SEED))
    step = float(_param(cfg, "step", 1e-5))
    rel = cfg.tol("bracket_rel")
    pair = BipartitePair.identical(system, x, z1, z2, n, m)
    r = sample_realization(all_modes(system.dim), seed)
    p1, p2 = pair.particle1, pair.particle2
    p2_mom = pair.momentum_response(2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        if n == m:
            xx, xp = bracket_xx_same(pair), bracket_xp_same(pair)
        else:
            xx, xp = bracket_xx_distinct(pair), bracket_xp_distinct(pair)
    num_xx = poisson_bracket_numeric(p1, p2, n, m, r, h=step)
    num_xp = poisson_bracket_numeric(p1, p2_mom, n, m, r, h=step)
    scale = max(abs(xp), abs(xx), 1.0)
    rep.add(check_close("bracket2.xx.closed_vs_numeric", xx, num_xx, rel * scale))
    rep.add(check_close("bracket2.xp.closed_vs_numeric", xp, num_xp, rel * scale))
    z12 = pair.zeta12
    if z12.is_integer:
        rep.add(check_equal("bracket2.xx.vanishes_for_integer_zeta12", 0, xx))
    rep.artifacts["zeta12"] = z12
    rep.artifacts["closed_form"] = {"xx": xx, "xp": xp}


def _covariance(cfg: ScenarioConfig, rep: RunReport) -> None:
    f = cfg.matrix("f")
    g = cfg.matrices.get("g", f)
    obs = ObservablePair(f, g)
    n, m = _levels(cfg, obs.dim)
    zeta = _half(cfg, "zeta", 0)
    samples = int(_param(cfg, "samples", DEFAULT_SAMPLES))
    seed = parse_seed(_param(cfg, "seed", DEFAULT_SEED))
    batches = int(_param(cfg, "batches", 20))
    workers = int(_param(cfg, "workers", 1))
    exact = cfg.tol("exact")
    a = analytic_covariance(obs, n, m, zeta)
    q = quantum_covariance(obs, build_entangled_state(n, m, zeta))
    rep.add(check_close("covariance.analytic_vs_quantum", a, q, exact))
    res: CovarianceReport = mc_covariance(obs, n, m, zeta, samples, seed, system=cfg.system,
                                          batches=batches, workers=workers)
    sigma = cfg.tol("mc_sigma")
    rep.add(CheckRecord("covariance.mc_within_sigma", a, res.estimate, sigma * res.standard_error,
                        bool(abs(res.z_score) <= sigma),
                        f"estimate {res.estimate:.6g} +- {res.standard_error:.2g} "
                        f"(z = {res.z_score:.2f}, {samples} samples)"))
    rep.trace = res.trace
    rep.artifacts["covariance"] = res.csv_row()


def _entangle(cfg: ScenarioConfig, rep: RunReport) -> None:
    f = cfg.matrix("f")
    obs = ObservablePair(f, cfg.matrices.get("g", f))
    n, m = _levels(cfg, obs.dim)
    zeta = _half(cfg, "zeta", 0)
    state = build_entangled_state(n, m, zeta)
    rep.add(check_equal("entangle.swap_parity", zeta.sign_power(), swap_parity(state, obs.dim)))
    rep.add(check_close("entangle.quantum_vs_analytic", analytic_covariance(obs, n, m, zeta),
                        quantum_covariance(obs, state), cfg.tol("exact")))
    rep.artifacts["state"] = {"n": n, "m": m, "sign": state.sign,
                              "vector": state.level_vector(obs.dim)}


def _spin(cfg: ScenarioConfig, rep: RunReport) -> None:
    raw = _param(cfg, "gamma", "1/2")
    try:
        gammas = [HalfInt.of(v) for v in (raw if isinstance(raw, list) else [raw])]
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"params.gamma: {exc}") from None
    phis = _param(cfg, "phi", [0.0, math.pi / 3, math.pi, 2 * math.pi])
    phis = phis if isinstance(phis, list) else [phis]
    for g in gammas:
        parity = required_zeta_parity(g)
        zeta = 1 if parity.value == "odd" else 0
        label = f"spin.gamma={g}"
        rep.add(check_equal(f"{label}.exchange_factor", 1, exchange_factor(zeta, g),
                            f"zeta parity {parity.value}"))
        partner = g - HalfInt(2)
        state = build_complete_state(0, g, 1, partner, zeta)
        rep.add(check_equal(f"{label}.complete_state_exchange", 1, exchange_parity(state),
                            "brute-force rotation by 2 pi plus slot exchange"))
        rep.add(check_equal(f"{label}.energy_state_swap", -1 if zeta else 1,
                            swap_parity(state.energy_state())))
        wrong = 1 - zeta
        rep.add(check_equal(f"{label}.opposite_parity_rejected", -1, exchange_factor(wrong, g)))
    if "f" in cfg.matrices:
        f = cfg.matrix("f")
        obs = ObservablePair(f, cfg.matrices.get("g", f))
        n, m = _levels(cfg, obs.dim)
        zeta = _half(cfg, "zeta", 1)
        g = gammas[0]
        ref = analytic_covariance(obs, n, m, zeta)
        for phi in phis:
            rep.add(check_close(f"spin.covariance.phi={phi:.6g}", ref,
                                spin_covariance(obs, n, m, zeta, (g, g - HalfInt(2)), phi),
                                cfg.tol("exact")))


def _pauli(cfg: ScenarioConfig, rep: RunReport) -> None:
    u = _half(cfg, "upsilon", "1/2")
    k = int(_param(cfg, "k", 2))
    res = pauli_feasibility(u, k)
    rep.artifacts["pauli"] = res.to_json()
    if not res.applicable:
        rep.add(CheckRecord("pauli.applicable", "half-odd upsilon", str(u), None, True,
                            "integer spin: exclusion search not applicable"))
        return
    expected = k <= 2
    rep.add(check_equal(f"pauli.upsilon={u}.k={k}.feasible", expected, res.feasible,
                        "witness attached" if res.feasible else "certificate attached"))
    if not res.feasible:
        rep.add(check_equal("pauli.certificate.max_size", 2 if u.half_units >= 1 else 1,
                            res.certificate.get("max_size")))


def _full_suite(cfg: ScenarioConfig, rep: RunReport) -> None:
    from .suite import run_suite

    for res in run_suite():
        rep.add(res.to_record())


EXPERIMENTS: dict[str, Callable[[ScenarioConfig, RunReport], None]] = {
    "trk": _trk,
    "commutator": _commutator,
    "bracket2": _bracket2,
    "covariance": _covariance,
    "entangle": _entangle,
    "spin": _spin,
    "pauli": _pauli,
    "full-suite": _full_suite,
}


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    """Run one scenario. Configuration problems raise ``ConfigError``; numerical
    problems become failed records."""
    seed = cfg.params.get("seed")
    rep = RunReport(cfg.experiment, seed=None if seed is None else parse_seed(seed),
                    trace_columns=TRACE_COLUMNS.get(cfg.experiment, ()))
    if cfg.experiment in ("covariance", "bracket2") and seed is None:
        rep.seed = DEFAULT_SEED
    rep.guarded(f"{cfg.experiment}.run", EXPERIMENTS[cfg.experiment], cfg, rep)
    if not rep.records:
        rep.add(CheckRecord(f"{cfg.experiment}.run", "checks", "none", None, False,
                            "experiment produced no checks"))
    return rep
