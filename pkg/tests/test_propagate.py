import numpy as np
import pytest

from kicksim import propagate, qstate
from kicksim.errors import AliasingDetected, NotFarField
from kicksim.propagate import PropagationSpec
from kicksim.qstate import Grid, SlitArray, WaveFunction


def gaussian_packet(grid, sigma, k0=0.0, x0=0.0):
    x = grid.points
    amp = (np.pi * sigma**2) ** -0.25 * np.exp(-(x - x0) ** 2 / (2 * sigma**2) + 1j * k0 * x)
    return WaveFunction(grid, amp)


def free_gaussian(x, t, sigma, k0):
    """Closed-form free evolution of the packet above (hbar = m = 1)."""
    s = 1 + 1j * t / sigma**2
    return ((np.pi * sigma**2) ** -0.25 / np.sqrt(s)
            * np.exp(-(x - k0 * t) ** 2 / (2 * sigma**2 * s) + 1j * k0 * x - 0.5j * k0**2 * t))


@pytest.mark.parametrize("t,k0", [(0.5, 0.0), (1.0, 3.0), (2.0, -2.0)])
def test_free_gaussian_closed_form(t, k0):
    grid = Grid(-30, 30, 4096)
    out = propagate.evolve_free(gaussian_packet(grid, 0.7, k0), t)
    assert np.max(np.abs(out.amplitudes - free_gaussian(grid.points, t, 0.7, k0))) < 1e-10


def test_ehrenfest_centroid():
    grid = Grid(-20, 40, 4096)
    k0, t = 2.5, 3.0
    psi = gaussian_packet(grid, 0.8, k0, x0=1.0)
    assert propagate.evolve_free(psi, t).centroid() == pytest.approx(1.0 + k0 * t, abs=1e-9)


def test_galilean_covariance():
    # evolving a kicked packet = kicking and translating the evolved packet
    grid = Grid(-40, 40, 8192)
    k0, t = 1.5, 2.0
    psi = gaussian_packet(grid, 0.6)
    lhs = propagate.evolve_free(psi.scaled(np.exp(1j * k0 * grid.points)), t)
    x = grid.points
    rhs = np.exp(1j * k0 * x - 0.5j * k0**2 * t) * free_gaussian(x - k0 * t, t, 0.6, 0.0)
    assert np.max(np.abs(lhs.amplitudes - rhs)) < 1e-10


def test_evolution_is_reversible_and_unitary():
    grid = Grid(-10, 10, 2048)
    psi = gaussian_packet(grid, 0.5, 1.0)
    fwd = propagate.evolve_free(psi, 1.3)
    assert abs(fwd.norm() - psi.norm()) < 1e-12
    back = propagate.evolve_free(fwd, -1.3)
    assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-12


def test_aliasing_guard():
    grid = Grid(-5, 5, 1024)
    with pytest.raises(AliasingDetected):
        propagate.evolve_free(gaussian_packet(grid, 0.3, 6.0), 2.0)


def test_czt_matches_direct_sum():
    rng = np.random.default_rng(3)
    src = Grid(-2.0, 3.0, 64)
    out = Grid(-7.3, 11.1, 32)
    amps = rng.normal(size=64) + 1j * rng.normal(size=64)
    for sign in (-1, 1):
        direct = np.exp(sign * 1j * np.outer(out.points, src.points)) @ amps
        direct *= src.spacing / np.sqrt(2 * np.pi)
        got = propagate.fourier_transform(amps, src, out, sign)
        assert np.max(np.abs(got - direct)) < 1e-11 * np.max(np.abs(direct))


def test_far_field_of_gaussian():
    grid = Grid(-10, 10, 4096)
    sigma, x0 = 0.4, 1.2
    psi = gaussian_packet(grid, sigma, x0=x0)
    far = propagate.to_far_field(psi, screen_grid=Grid(-15, 15, 2048))
    p = far.x
    want = (sigma**2 / np.pi) ** 0.25 * np.exp(-(p**2) * sigma**2 / 2 - 1j * p * x0)
    assert np.max(np.abs(far.amplitudes - want)) < 1e-10
    assert far.space == "momentum"


def test_far_field_round_trip():
    grid = Grid(-10, 10, 2048)
    psi = gaussian_packet(grid, 0.5, 2.0)
    far = propagate.to_far_field(psi, screen_grid=Grid(-20, 24, 2048))
    back = propagate.to_far_field(far, screen_grid=grid)
    assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-9


def test_not_far_field_guard():
    psi = qstate.make_slit_states(SlitArray(2))[0]
    states = qstate.make_slit_states(SlitArray(2))
    two = qstate.superpose(states, [1, 1])
    with pytest.raises(NotFarField):
        propagate.to_far_field(two, t=0.01)
    propagate.to_far_field(psi, t=propagate.default_flight_time())


def test_default_screen_grid_is_symmetric_and_captures_probability():
    states = qstate.make_slit_states(SlitArray(2))
    ww = qstate.entangle(states)
    g = propagate.default_screen_grid(ww.matrix(), ww.grid)
    assert g.x_min == -g.x_max and isinstance(g.x_min, float)
    far = propagate.evolve_entangled(ww, PropagationSpec(screen_grid=g))
    assert abs(far.norm() - 1) < 1e-12


def test_propagation_spec_validation():
    with pytest.raises(ValueError):
        PropagationSpec("paraxial")
    with pytest.raises(ValueError):
        PropagationSpec("fraunhofer", t=-1)
    with pytest.raises(ValueError):
        PropagationSpec("fresnel_exact", t=None)


def test_screen_positions():
    g = Grid(-1, 1, 16)
    assert np.allclose(propagate.screen_positions(g, 3.0), 3.0 * g.points)


def test_fresnel_mode_acts_componentwise():
    states = qstate.make_slit_states(SlitArray(2))
    ww = qstate.entangle(states)
    out = propagate.evolve_entangled(ww, PropagationSpec("fresnel_exact", 0.05))
    single = propagate.evolve_free(states[1], 0.05)
    assert np.max(np.abs(out.components[1].amplitudes
                         - single.amplitudes / np.sqrt(2))) < 1e-14
