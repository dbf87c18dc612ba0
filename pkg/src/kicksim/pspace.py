"""Momentum-space interference and position kicks.

The mirror image of the slit problem: a particle in a superposition of two
narrow momentum peaks at ``p1`` and ``p2``.  With a which-way detector the
``d-`` outcome flips the relative sign of the peaks, which is the same, on
the peaks, as multiplying by ``exp(-i p1 x0) exp(i p x0)`` with
``x0 = h / (2 (p2 - p1))``.  The second factor displaces the position
representation by ``x0`` in magnitude: a random position kick.  (With the
``exp(+i p x)`` inverse-transform convention used here the displacement is
towards ``-x0``.)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMomenta, DimensionMismatch
from .kicks import PLANCK, FidelityRecord, representation_fidelity
from .qstate import (
    EntangledState,
    Grid,
    WaveFunction,
    change_basis,
    entangle,
    localized_states,
    resolving_points,
    superpose,
)
from .ubasis import fourier_basis


@dataclass(frozen=True)
class MomentumPeaks:
    p1: float
    p2: float
    width: float
    grid: Grid | None = None
    profile: str = "gaussian"

    def __post_init__(self):
        if not self.p2 > self.p1:
            raise ValueError(f"need p2 > p1, got p1={self.p1}, p2={self.p2}")
        if not 0 < self.width <= self.delta / 8 * (1 + 1e-12):
            raise ValueError(f"peak width {self.width} must be in (0, (p2-p1)/8]")
        if self.grid is None:
            object.__setattr__(self, "grid", default_momentum_grid(self.p1, self.p2, self.width))

    @property
    def delta(self) -> float:
        return self.p2 - self.p1

    @property
    def centers(self) -> np.ndarray:
        return np.array([self.p1, self.p2])


def default_momentum_grid(p1: float, p2: float, width: float,
                          n_points: int | None = None) -> Grid:
    """Counterpart of the two-slit grid: ``[p1 - 4 dp, p2 + 3 dp]``."""
    dp = p2 - p1
    lo, hi = p1 - 4 * dp, p2 + 3 * dp
    if n_points is None:
        n_points = resolving_points(hi - lo, width)
    return Grid(lo, hi, n_points)


def momentum_peak_states(peaks: MomentumPeaks) -> list[WaveFunction]:
    return localized_states(peaks.centers, peaks.width, peaks.grid, peaks.profile,
                            space="momentum")


def make_momentum_state(peaks: MomentumPeaks) -> WaveFunction:
    """``(psi1(p) + psi2(p)) / sqrt(2)``."""
    return superpose(momentum_peak_states(peaks), [1 / np.sqrt(2), 1 / np.sqrt(2)])


def entangled_momentum_state(peaks: MomentumPeaks) -> EntangledState:
    """``(psi1(p)|d1> + psi2(p)|d2>) / sqrt(2)`` in the which-way basis."""
    return entangle(momentum_peak_states(peaks))


def position_kick_value(p1: float, p2: float) -> float:
    """``x0 = h / (2 (p2 - p1))``."""
    if p2 == p1:
        raise DegenerateMomenta("position kick needs distinct momenta")
    return PLANCK / (2 * (p2 - p1))


def position_kick(psi: WaveFunction, x0: float) -> WaveFunction:
    """Multiply a momentum-space state by ``exp(i p x0)``."""
    if psi.space != "momentum":
        raise ValueError("position kicks act on momentum-space states")
    return psi.scaled(np.exp(1j * psi.x * x0))


def position_kick_representation(state: EntangledState, peaks: MomentumPeaks,
                                 constant_phase: bool = True,
                                 ) -> tuple[EntangledState, FidelityRecord]:
    """Replace the phase-flipped ``d-`` component by a position-kicked copy of ``d+``.

    ``state`` is the two-peak entangled state in the which-way or the
    ``d+/d-`` basis.  Returns the kicked state and its fidelity with the
    phase-flip form.
    """
    if state.n != 2:
        raise DimensionMismatch("position kicks are defined for two momentum peaks")
    if state.space != "momentum":
        raise ValueError("expected a momentum-space state")
    if state.basis_tag == "which-way":
        state = change_basis(state, fourier_basis(2))
    x0 = position_kick_value(peaks.p1, peaks.p2)
    plus = state.components[0]
    minus = position_kick(plus, x0)
    if constant_phase:
        minus = minus.scaled(np.exp(-1j * peaks.p1 * x0))
    kicked = EntangledState((plus, minus), state.basis_tag)
    return kicked, representation_fidelity(state, kicked)
