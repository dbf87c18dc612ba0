"""
Many slits: a spectrum of kicks
===============================

With n slits and a detector read in the discrete Fourier basis, outcome j
corresponds to a kick ``p_j = j h / (n d)``.  The conditioned fringe
patterns are shifted by ``j/n`` of a period and cancel when summed.  For
three slits centred on the origin the natural basis references phases to
the middle slit and yields kicks ``0, +h/3d, -h/3d``.
"""
# %%
import numpy as np

from kicksim import kicks, patterns, qstate, ubasis
from kicksim.propagate import PropagationSpec, default_screen_grid, evolve_entangled

# %%
# Kick tables in exact rational arithmetic (units of h/d).
for n in range(2, 9):
    spec = kicks.kick_spectrum(n, folded=True)
    print(f"n={n}: kicks {[str(f) for f in spec.fractions]}, "
          f"largest {spec.max_abs_fraction()}, smallest {spec.min_nonzero_fraction()}")


# %%
def shifts(slits, basis):
    states = qstate.make_slit_states(slits)
    ww = qstate.entangle(states)
    screen = default_screen_grid(ww.matrix(), ww.grid)
    far = evolve_entangled(qstate.change_basis(ww, basis), PropagationSpec(screen_grid=screen))
    env = patterns.envelope_pattern(slits, screen, ww.grid)
    cond = [patterns.conditioned_pattern(far, j) for j in range(slits.n)]
    kw = dict(period=2 * np.pi / slits.d, envelope=env)
    out = [patterns.fringe_report(c, cond[0], **kw).shift for c in cond]
    washout = patterns.fringe_report(patterns.combine(cond), **kw).visibility
    return np.round(out, 4), washout


# %%
# Three centred slits in the alpha/beta/gamma basis.
s, v = shifts(qstate.SlitArray(3, origin="centered"), ubasis.three_slit_basis())
print("\nthree slits: shifts", s, " summed visibility", round(v, 4))

# %%
# Five slits in the Fourier basis: shifts j/5, folded into (-1/2, 1/2].
s, v = shifts(qstate.SlitArray(5), ubasis.fourier_basis(5))
print("five slits:  shifts", s, " summed visibility", round(v, 4))
