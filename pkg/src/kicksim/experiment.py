"""End-to-end experiment: build, change basis, propagate, analyse, sample."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import kicks, montecarlo, patterns, pspace, qstate, ubasis
from .config import ExperimentConfig
from .propagate import PropagationSpec, default_screen_grid, evolve_entangled, to_far_field

SCHEMA_VERSION = 1


@dataclass
class ExperimentResult:
    report: dict
    columns: dict[str, np.ndarray]
    samples: montecarlo.SampleRun | None


def _basis(cfg: ExperimentConfig):
    if cfg.basis == "which_way":
        return None
    if cfg.basis == "fourier":
        return ubasis.fourier_basis(cfg.n)
    if cfg.basis == "three_slit":
        return ubasis.three_slit_basis()
    if cfg.basis == "general_two_slit":
        return ubasis.general_two_slit_basis(*cfg.thetas)
    return cfg.matrix


def _matrix(basis, n):
    if basis is None:
        return np.eye(n)
    return np.asarray(getattr(basis, "matrix", basis))


def _position_kicks(cfg, slits, states, ww, state, basis) -> dict:
    spectrum = kicks.kick_spectrum(cfg.n, cfg.d, folded=True)
    out: dict = {"spectrum": [
        {"index": k.index, "fraction_h_over_d": str(k.fraction), "momentum": k.momentum,
         "probability": k.probability} for k in spectrum.kicks]}
    m = _matrix(basis, cfg.n)
    unbiased, _ = ubasis.is_unbiased(m)
    if cfg.basis == "general_two_slit":
        rec = kicks.general_basis_kick_form(ww, basis, slits)
        out["kick_form"] = {"kick": rec.kick, "expected_kick": rec.expected_kick,
                            "constant_phase": rec.constant_phase,
                            "expected_phase": rec.expected_phase,
                            "fidelity": rec.fidelity, "pass": rec.passed}
        return out
    if unbiased:
        phases, residual = kicks.lattice_phases(m, slits.centers, spectrum)
        if residual < 1e-9:
            base = qstate.superpose(states, np.ones(cfg.n) / np.sqrt(cfg.n))
            kicked = kicks.kick_representation(base, spectrum, phases, state.basis_tag)
            rec = kicks.representation_fidelity(state, kicked)
            out["kick_form"] = {"constant_phases": phases.tolist(),
                                "fidelity": rec.global_fidelity,
                                "per_component": list(rec.per_component)}
            return out
    if cfg.n == 2:
        rec = kicks.biased_basis_counterexample(ww, m, slits)
        out["kick_form"] = {"best_fit_kick": rec.best_kick, "fidelity": rec.fidelity,
                            "norm_difference": rec.norm_difference,
                            "disqualified_by": list(rec.disqualified_by)}
    else:
        out["kick_form"] = None
    return out


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    """Run one configured experiment; numerical guards propagate as exceptions."""
    momentum = cfg.experiment == "momentum_space"
    if momentum:
        width = cfg.width if cfg.width is not None else (cfg.p2 - cfg.p1) / 20
        grid = pspace.default_momentum_grid(cfg.p1, cfg.p2, width, cfg.grid_points)
        peaks = pspace.MomentumPeaks(cfg.p1, cfg.p2, width, grid, cfg.profile)
        states = pspace.momentum_peak_states(peaks)
    else:
        slits = qstate.SlitArray(cfg.n, cfg.d, cfg.sigma, cfg.profile, cfg.origin)
        grid = qstate.default_grid(slits, cfg.grid_points)
        states = qstate.make_slit_states(slits, grid)
    ww = qstate.entangle(states)
    basis = _basis(cfg)
    state = ww if basis is None else qstate.change_basis(ww, basis)

    t = cfg.flight_time
    fresnel = cfg.mode == "fresnel_exact"
    if fresnel:
        far = evolve_entangled(state, PropagationSpec("fresnel_exact", t))
        scale, envelope = 1.0, None
        axis = "x"
    else:
        screen = default_screen_grid(ww.matrix(), grid, cfg.screen_points)
        far = evolve_entangled(state, PropagationSpec("fraunhofer", None if momentum else t,
                                                      screen))
        if momentum:
            scale, axis = 1.0, "x"
            envelope = patterns.pattern_of(to_far_field(states[0], screen_grid=screen))
        else:
            scale, axis = t, "x = p t"
            envelope = patterns.envelope_pattern(slits, screen, grid)
    if momentum:
        period = 2 * np.pi / (cfg.p2 - cfg.p1)
    elif fresnel:
        period = None
    else:
        period = 2 * np.pi / cfg.d

    total = patterns.intensity(far)
    cond = [patterns.conditioned_pattern(far, j) for j in range(cfg.n)]
    rep_total = patterns.fringe_report(total, period=period, envelope=envelope)
    reps = [patterns.fringe_report(c, cond[0], period=period, envelope=envelope) for c in cond]

    def screen_len(v):
        return None if v is None else v * scale

    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.summary(),
        "basis_tag": state.basis_tag,
        "screen": {"axis": axis, "flight_time": None if momentum else t,
                   "points": far.grid.n_points},
        "probabilities": state.probabilities().tolist(),
        "visibility": {"unconditioned": rep_total.visibility,
                       "conditioned": [r.visibility for r in reps]},
        "period": {"unconditioned": screen_len(rep_total.period),
                   "conditioned": [screen_len(r.period) for r in reps],
                   "expected": screen_len(period)},
        "shift": [r.shift for r in reps],
    }
    if momentum:
        x0 = pspace.position_kick_value(cfg.p1, cfg.p2)
        entry: dict = {"x0": x0}
        if cfg.basis in ("which_way", "fourier"):
            _, rec = pspace.position_kick_representation(state, peaks)
            entry["fidelity"] = rec.global_fidelity
        report["position_kick"] = entry
    else:
        report["kicks"] = _position_kicks(cfg, slits, states, ww, state, basis)

    x = far.grid.points * scale
    columns = {"x": x, "unconditioned": total.intensity / scale}
    for j, c in enumerate(cond):
        columns[f"conditioned_{j}"] = c.intensity / scale

    samples = None
    if cfg.montecarlo:
        run = montecarlo.sample(far, cfg.n_samples, cfg.seed, bins=cfg.bins, threads=threads)
        samples = dataclasses.replace(run, positions=run.positions * scale,
                                      edges=run.edges * scale)
        report["montecarlo"] = {"n_samples": cfg.n_samples, "seed": cfg.seed,
                                "outcome_frequencies":
                                    run.outcome_frequencies(cfg.n).tolist()}
    return ExperimentResult(report, columns, samples)
