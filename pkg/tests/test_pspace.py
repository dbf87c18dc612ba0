import numpy as np
import pytest

from kicksim import kicks, patterns, pspace, qstate
from kicksim.errors import DegenerateMomenta
from kicksim.propagate import to_far_field
from kicksim.pspace import MomentumPeaks


def closed_form(dp, width):
    x0 = np.pi / dp
    return (1 + np.exp(-(x0**2) * width**2 / 4)) / 2


def test_position_kick_value():
    assert pspace.position_kick_value(0.0, 1.0) == np.pi
    assert pspace.position_kick_value(1.0, 3.0) == np.pi / 2
    with pytest.raises(DegenerateMomenta):
        pspace.position_kick_value(2.0, 2.0)


def test_width_bound():
    with pytest.raises(ValueError):
        MomentumPeaks(0.0, 1.0, 0.2)
    with pytest.raises(ValueError):
        MomentumPeaks(1.0, 0.0, 0.01)


def test_width_at_bound_accepted_for_tophat():
    peaks = MomentumPeaks(0.0, 1.0, 1 / 8, profile="tophat")
    a, b = pspace.momentum_peak_states(peaks)
    assert qstate.inner(a, b) == 0


@pytest.mark.parametrize("width_frac", [1 / 20, 1 / 40, 1 / 100])
def test_fidelity_closed_form(width_frac):
    peaks = MomentumPeaks(0.0, 1.0, width_frac)
    _, rec = pspace.position_kick_representation(pspace.entangled_momentum_state(peaks), peaks)
    assert rec.global_fidelity == pytest.approx(closed_form(1.0, width_frac), abs=1e-12)


def test_duality_with_slits():
    sigma = 0.05
    pos = kicks.fourier_kick_equivalence(qstate.SlitArray(2, sigma=sigma)).global_fidelity
    peaks = MomentumPeaks(0.0, 2 * np.pi, sigma * 2 * np.pi)
    _, rec = pspace.position_kick_representation(pspace.entangled_momentum_state(peaks), peaks)
    assert abs(pos - rec.global_fidelity) < 1e-12


def test_position_kick_displaces_position_representation():
    peaks = MomentumPeaks(0.0, 1.0, 0.05)
    psi = pspace.make_momentum_state(peaks)
    x0 = pspace.position_kick_value(peaks.p1, peaks.p2)
    a = patterns.pattern_of(to_far_field(psi))
    b = patterns.pattern_of(to_far_field(pspace.position_kick(psi, x0), screen_grid=a.grid))
    assert abs(b.centroid() - a.centroid()) == pytest.approx(x0, abs=1e-6)


def test_kick_needs_momentum_state():
    psi = qstate.make_slit_states(qstate.SlitArray(2))[0]
    with pytest.raises(ValueError):
        pspace.position_kick(psi, 1.0)


def test_minus_outcome_fringes_shift_by_half():
    from kicksim.propagate import PropagationSpec, default_screen_grid, evolve_entangled
    from kicksim.ubasis import fourier_basis
    peaks = MomentumPeaks(0.0, 1.0, 0.05)
    ww = pspace.entangled_momentum_state(peaks)
    screen = default_screen_grid(ww.matrix(), ww.grid)
    far = evolve_entangled(qstate.change_basis(ww, fourier_basis(2)),
                           PropagationSpec(t=None, screen_grid=screen))
    env = patterns.pattern_of(to_far_field(pspace.momentum_peak_states(peaks)[0],
                                           screen_grid=screen))
    plus, minus = (patterns.conditioned_pattern(far, j) for j in range(2))
    rep = patterns.fringe_report(minus, plus, period=2 * np.pi, envelope=env)
    assert patterns.shift_distance(rep.shift, 0.5) < 1e-3
