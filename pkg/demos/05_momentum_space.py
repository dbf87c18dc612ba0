"""
Position kicks from momentum superpositions
===========================================

Swap the roles of x and p: a particle in a superposition of two narrow
momentum peaks ``p1, p2`` shows fringes in position.  A which-way detector
on the momentum erases them; reading it in the d+/d- basis restores two
complementary fringe sets, and the d- component is a position-kicked copy
of d+ with ``x0 = h / (2 (p2 - p1))``.
"""
# %%
import numpy as np

from kicksim import kicks, patterns, pspace, qstate, ubasis
from kicksim.propagate import PropagationSpec, default_screen_grid, evolve_entangled, to_far_field

peaks = pspace.MomentumPeaks(0.0, 1.0, 1 / 20)
ww = pspace.entangled_momentum_state(peaks)
print("x0 =", pspace.position_kick_value(peaks.p1, peaks.p2))

# %%
screen = default_screen_grid(ww.matrix(), ww.grid)
spec = PropagationSpec(t=None, screen_grid=screen)   # momentum -> position
env = patterns.pattern_of(to_far_field(pspace.momentum_peak_states(peaks)[0], screen_grid=screen))
kw = dict(period=2 * np.pi / peaks.delta, envelope=env)
far = evolve_entangled(qstate.change_basis(ww, ubasis.fourier_basis(2)), spec)
plus, minus = (patterns.conditioned_pattern(far, j) for j in range(2))
print("which-way visibility", round(patterns.fringe_report(patterns.intensity(far), **kw).visibility, 4))
print("d- shift vs d+      ", patterns.fringe_report(minus, plus, **kw).shift)

# %%
# The same fidelity law as for slits, with sigma/d replaced by width/dp.
for frac in (20, 40, 100):
    pk = pspace.MomentumPeaks(0.0, 2 * np.pi, 2 * np.pi / frac)
    _, rec = pspace.position_kick_representation(pspace.entangled_momentum_state(pk), pk)
    pos = kicks.fourier_kick_equivalence(qstate.SlitArray(2, sigma=1 / frac)).global_fidelity
    print(f"width dp/{frac}: momentum-space {rec.global_fidelity:.9f}, slit dual {pos:.9f}")
