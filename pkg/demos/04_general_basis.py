"""
Which bases carry a kick?
=========================

Any detector basis that is unbiased with respect to the which-way states
gives a kick picture: the two components differ by ``exp(i delta) exp(i p0 x)``
with ``|p0| = h/2d`` and a constant phase ``delta`` set by the basis angles.
A biased basis gives components with unequal slit weights, which no plane
wave can relate.
"""
# %%
import numpy as np

from kicksim import kicks, qstate, ubasis

rng = np.random.default_rng(0)
for origin in ("at_zero", "centered"):
    slits = qstate.SlitArray(2, origin=origin)
    ww = qstate.entangle(qstate.make_slit_states(slits))
    print(f"slits {origin}: {np.round(slits.centers, 3)}")
    for t1, t2, t3 in rng.uniform(-np.pi, np.pi, (4, 3)):
        rec = kicks.general_basis_kick_form(ww, ubasis.general_two_slit_basis(t1, t2, t3), slits)
        print(f"  kick {rec.kick:+.5f} (|p0| = {np.pi:.5f}), phase {rec.constant_phase:+.4f} "
              f"expected {np.angle(np.exp(1j * rec.expected_phase)):+.4f}, fidelity {rec.fidelity:.5f}")

# %%
# Biased bases: the identity (pure which-way readout) and a pi/6 rotation.
slits = qstate.SlitArray(2)
ww = qstate.entangle(qstate.make_slit_states(slits))
for name, U in (("identity", np.eye(2)), ("rotation pi/6", ubasis.rotation_basis(np.pi / 6)),
                ("Fourier (control)", ubasis.fourier_basis(2))):
    rec = kicks.biased_basis_counterexample(ww, U, slits)
    verdict = "kick form holds" if rec.kick_form_holds else f"no kick ({', '.join(rec.disqualified_by)})"
    print(f"{name:18s} best fidelity {rec.fidelity:.4f}: {verdict}")
