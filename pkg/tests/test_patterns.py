import numpy as np
import pytest

from kicksim import patterns, qstate, ubasis
from kicksim.errors import GridMismatch, IndexOutOfRange
from kicksim.patterns import Pattern
from kicksim.qstate import Grid
from kicksim.verify import setup

GRID = Grid(-60, 60, 8192)


def synthetic(vis, shift=0.0, period=2 * np.pi, width=12.0):
    x = GRID.points
    env = np.exp(-x**2 / (2 * width**2))
    inten = env * (1 + vis * np.cos(2 * np.pi * (x / period - shift)))
    return Pattern(GRID, inten, float(inten.sum() * GRID.spacing)), \
        Pattern(GRID, env, float(env.sum() * GRID.spacing))


def test_pattern_weight_checked():
    with pytest.raises(ValueError):
        Pattern(GRID, np.ones(GRID.n_points), 1.0)
    with pytest.raises(ValueError):
        Pattern(GRID, -np.ones(GRID.n_points), -GRID.spacing * GRID.n_points)


@pytest.mark.parametrize("vis", [0.1, 0.25, 0.5, 0.75, 1.0])
def test_visibility_with_envelope_is_exact(vis):
    p, env = synthetic(vis)
    got = patterns.fringe_report(p, period=2 * np.pi, envelope=env).visibility
    assert got == pytest.approx(vis, abs=1e-6)


@pytest.mark.parametrize("vis", [0.25, 0.5, 0.75])
def test_visibility_with_estimated_envelope(vis):
    p, _ = synthetic(vis)
    assert patterns.visibility(p) == pytest.approx(vis, abs=0.01)


@pytest.mark.parametrize("shift", [0.5, 1 / 3, -1 / 3, 0.2, -0.4])
def test_shift_measurement(shift):
    ref, env = synthetic(0.9)
    p, _ = synthetic(0.9, shift)
    rep = patterns.fringe_report(p, ref, period=2 * np.pi, envelope=env)
    assert patterns.shift_distance(rep.shift, shift) < 1e-3
    assert rep.period == pytest.approx(2 * np.pi, rel=1e-3)


def test_period_estimate():
    p, env = synthetic(0.8, period=5.0)
    assert patterns.estimate_period(p, env) == pytest.approx(5.0, rel=1e-3)
    assert patterns.estimate_period(p) == pytest.approx(5.0, rel=1e-3)


def test_no_fringes_reported_for_smooth_pattern():
    p, env = synthetic(0.0)
    rep = patterns.fringe_report(p, period=2 * np.pi, envelope=env)
    assert rep.visibility == 0 and not rep.has_fringes and rep.shift is None


def test_wrap_shift_range():
    for s in (0.5, -0.5, 1.5, 0.0, -0.0, 0.25, 2.75):
        w = patterns.wrap_shift(s)
        assert -0.5 < w <= 0.5
        assert patterns.shift_distance(w, s) < 1e-12
    assert str(patterns.wrap_shift(0.0)) == "0.0"


def test_grid_mismatch():
    p, _ = synthetic(0.5)
    other = Pattern(Grid(-1, 1, 16), np.zeros(16), 0.0)
    with pytest.raises(GridMismatch):
        patterns.fringe_report(p, other)
    with pytest.raises(GridMismatch):
        patterns.combine([p, other])


def test_conditioned_patterns_carry_probability():
    s = setup(3)
    far = s.far(qstate.change_basis(s.which_way, ubasis.fourier_basis(3)))
    for j in range(3):
        assert patterns.conditioned_pattern(far, j).weight == pytest.approx(1 / 3, abs=1e-10)
    with pytest.raises(IndexOutOfRange):
        patterns.conditioned_pattern(far, 3)


def test_envelope_is_single_slit_pattern():
    s = setup(2)
    assert s.envelope.weight == pytest.approx(1.0, abs=1e-10)
    # the single-slit far field has no fringes
    inten = s.envelope.intensity
    peak = np.argmax(inten)
    assert np.all(np.diff(inten[peak:]) <= 1e-15)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fringe_period_in_far_field(n):
    s = setup(n)
    far = s.far(s.no_detector())
    rep = patterns.fringe_report(patterns.intensity(far), envelope=s.envelope)
    assert rep.period == pytest.approx(2 * np.pi, rel=1e-3)


def test_partial_overlap_oracle():
    # unconditioned intensity = (|A|^2 + |B|^2 + 2 Re(c A* B)) / 2, with A, B the slit far fields
    s = setup(2)
    c = 0.5
    far = s.far(qstate.entangle(s.states, qstate.partial_detectors(c)))
    a, b = s.far(s.which_way).matrix() * np.sqrt(2)
    want = (np.abs(a) ** 2 + np.abs(b) ** 2 + 2 * np.real(c * a.conj() * b)) / 2
    assert np.max(np.abs(patterns.intensity(far).intensity - want)) < 1e-12
