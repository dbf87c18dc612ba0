from fractions import Fraction

import numpy as np
import pytest

from kicksim import kicks, qstate, ubasis
from kicksim.errors import DimensionMismatch, InvalidDimension, NotUnbiased
from kicksim.qstate import SlitArray


def closed_form_fidelity(n, sigma, d=1.0, folded=True):
    """Global fidelity of the kick form for Gaussian slits: mean of exp(-p_j^2 sigma^2 / 4)."""
    p = kicks.kick_spectrum(n, d, folded).momenta
    return float(np.mean(np.exp(-(p**2) * sigma**2 / 4)))


@pytest.mark.parametrize("n", range(2, 9))
def test_unfolded_spectrum_is_rational(n):
    spec = kicks.kick_spectrum(n, folded=False)
    assert spec.fractions == [Fraction(j, n) for j in range(n)]
    assert sum(k.probability for k in spec.kicks) == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("n,max_frac", [(2, Fraction(1, 2)), (3, Fraction(1, 3)),
                                        (4, Fraction(1, 2)), (5, Fraction(2, 5)),
                                        (8, Fraction(1, 2))])
def test_folded_extremes(n, max_frac):
    spec = kicks.kick_spectrum(n)
    assert spec.max_abs_fraction() == max_frac
    assert spec.min_nonzero_fraction() == Fraction(1, n)


def test_spectrum_momenta_scale_with_spacing():
    assert kicks.kick_spectrum(4, 2.0, folded=False).momenta[1] == 2 * np.pi / 8


def test_spectrum_rejects_bad_n():
    with pytest.raises(InvalidDimension):
        kicks.kick_spectrum(1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_fourier_lattice_phases(n):
    slits = SlitArray(n)
    phases, residual = kicks.lattice_phases(ubasis.fourier_basis(n), slits.centers,
                                            kicks.kick_spectrum(n))
    assert residual < 1e-12
    assert np.allclose(phases, 0, atol=1e-12)


def test_three_slit_basis_is_kick_basis_for_centered_slits():
    slits = SlitArray(3, origin="centered")
    _, residual = kicks.lattice_phases(ubasis.three_slit_basis(), slits.centers,
                                       kicks.kick_spectrum(3))
    assert residual < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("sigma", [0.1, 0.05, 0.025])
def test_fidelity_matches_closed_form(n, sigma):
    # the closed form neglects neighbour-slit overlaps, exp(-25) at sigma = d/10
    rec = kicks.fourier_kick_equivalence(SlitArray(n, sigma=sigma))
    assert rec.global_fidelity == pytest.approx(closed_form_fidelity(n, sigma), abs=1e-10)


def test_first_component_is_exact():
    rec = kicks.fourier_kick_equivalence(SlitArray(3))
    assert rec.per_component[0] == pytest.approx(1.0, abs=1e-14)


def test_unfolded_kicks_are_worse_off_lattice():
    slits = SlitArray(3)
    folded = kicks.fourier_kick_equivalence(slits, folded=True).global_fidelity
    raw = kicks.fourier_kick_equivalence(slits, folded=False).global_fidelity
    assert raw == pytest.approx(closed_form_fidelity(3, 0.05, folded=False), abs=1e-12)
    assert raw < folded


def test_kick_representation_checks_phases():
    base = qstate.make_slit_states(SlitArray(2))[0]
    with pytest.raises(DimensionMismatch):
        kicks.kick_representation(base, kicks.kick_spectrum(2), [0.0])


@pytest.mark.parametrize("origin,offset", [("at_zero", 0.0), ("centered", np.pi / 2)])
def test_general_basis_constant_phase(origin, offset):
    slits = SlitArray(2, origin=origin)
    ww = qstate.entangle(qstate.make_slit_states(slits))
    t1, t2, t3 = 0.4, 1.3, -0.7
    rec = kicks.general_basis_kick_form(ww, ubasis.general_two_slit_basis(t1, t2, t3), slits)
    assert abs(rec.kick) == pytest.approx(np.pi, rel=1e-9)
    want = np.angle(np.exp(1j * (t2 - t1 + offset)))
    assert abs(np.angle(np.exp(1j * (rec.constant_phase - want)))) < 1e-9
    assert rec.passed


def test_general_basis_rejects_biased():
    slits = SlitArray(2)
    ww = qstate.entangle(qstate.make_slit_states(slits))
    with pytest.raises(NotUnbiased):
        kicks.general_basis_kick_form(ww, ubasis.rotation_basis(np.pi / 6), slits)


def test_identity_basis_counterexample():
    slits = SlitArray(2)
    ww = qstate.entangle(qstate.make_slit_states(slits))
    rec = kicks.biased_basis_counterexample(ww, np.eye(2), slits)
    assert rec.fidelity < 1e-6 and "fidelity" in rec.disqualified_by


def best_kick_oracle(sigma, d=1.0):
    """Maximizer of |sin(p d / 2)| exp(-p^2 sigma^2 / 4): the plane wave gains
    the slit phase difference but loses overlap across each aperture."""
    from scipy.optimize import brentq
    return brentq(lambda p: np.cos(p * d / 2) * d / 2 - np.sin(p * d / 2) * p * sigma**2 / 2,
                  0.5 * np.pi / d, np.pi / d)


def test_rotation_counterexample():
    # weights (cos, sin) on the two slits are not a pure phase factor
    sigma = 0.05
    slits = SlitArray(2, sigma=sigma)
    ww = qstate.entangle(qstate.make_slit_states(slits))
    rec = kicks.biased_basis_counterexample(ww, ubasis.rotation_basis(np.pi / 6), slits)
    c, s = np.cos(np.pi / 6), np.sin(np.pi / 6)
    p = best_kick_oracle(sigma)
    want = 2 * c * s * abs(np.sin(p / 2)) * np.exp(-(p**2) * sigma**2 / 4)
    assert rec.fidelity == pytest.approx(want, abs=1e-9)
    assert abs(rec.best_kick) == pytest.approx(p, abs=1e-6)
    assert abs(rec.norm_difference) < 1e-12
    assert rec.disqualified_by == ("fidelity",)


def test_fourier_control_holds():
    sigma = 0.05
    slits = SlitArray(2, sigma=sigma)
    ww = qstate.entangle(qstate.make_slit_states(slits))
    rec = kicks.biased_basis_counterexample(ww, ubasis.fourier_basis(2), slits)
    assert rec.kick_form_holds
    assert abs(rec.best_kick) == pytest.approx(best_kick_oracle(sigma), abs=1e-6)
