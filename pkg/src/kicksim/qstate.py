"""Slit wavefunctions and particle-detector entangled states.

Units: hbar = m = 1, so Planck's constant is ``h = 2*pi`` and a momentum
kick of ``h/(2d)`` is ``pi/d``.

A wavefunction lives on a uniform 1-D grid, either in position or in
momentum space.  An :class:`EntangledState` stores the particle state paired
with each vector of an orthonormal detector basis::

    Psi = sum_k  components[k] (x)  |b_k>

so the unconditioned screen density is ``sum_k |components[k]|**2`` in any
basis, and conditioning on detector outcome ``j`` simply picks component
``j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    GridMismatch,
    GridTooCoarse,
    IndexOutOfRange,
    InvalidDimension,
    NotUnitary,
    OverlapTooLarge,
)

OVERLAP_TOL = 1e-8
UNITARY_TOL = 1e-10
PROFILES = ("gaussian", "tophat")
ORIGINS = ("at_zero", "centered")
SPACES = ("position", "momentum")


@dataclass(frozen=True)
class SlitArray:
    """Geometry of ``n`` equally spaced apertures.

    ``origin="at_zero"`` puts the slits at 0, d, ..., (n-1)d;
    ``origin="centered"`` centres the array on x = 0 (so +-d/2 for two slits
    and -d, 0, d for three).  ``sigma`` is the Gaussian amplitude width
    (``exp(-(x-c)**2 / (2 sigma**2))``) or the top-hat half width.
    """

    n: int
    d: float = 1.0
    sigma: float | None = None
    profile: str = "gaussian"
    origin: str = "at_zero"

    def __post_init__(self):
        if self.sigma is None:
            object.__setattr__(self, "sigma", self.d / 20)
        if int(self.n) != self.n or self.n < 2:
            raise InvalidDimension(f"need at least two slits, got n={self.n}")
        if not self.d > 0:
            raise ValueError(f"slit spacing must be positive, got d={self.d}")
        if not 0 < self.sigma <= self.d / 4 * (1 + 1e-12):
            raise ValueError(
                f"slit width sigma={self.sigma} must satisfy 0 < sigma <= d/4")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown slit profile {self.profile!r}")
        if self.origin not in ORIGINS:
            raise ValueError(f"unknown slit origin {self.origin!r}")

    @property
    def centers(self) -> np.ndarray:
        k = np.arange(self.n, dtype=float)
        if self.origin == "centered":
            k -= (self.n - 1) / 2
        return k * self.d


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``n_points`` samples including both end points."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        n = int(self.n_points)
        if n != self.n_points or n < 2 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise ValueError("grid needs x_max > x_min")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def contains(self, lo: float, hi: float) -> bool:
        return self.x_min <= lo and hi <= self.x_max


def resolving_points(span: float, sigma: float, minimum: int = 4096) -> int:
    """Smallest power of two >= ``minimum`` giving a spacing of at most sigma/8."""
    n = minimum
    while span / (n - 1) > sigma / 8:
        n *= 2
    return n


def default_grid(slits: SlitArray, n_points: int | None = None) -> Grid:
    """The standard simulation grid ``[-4d, (n+3)d]``.

    4096 points unless narrower slits need more to keep ``spacing <= sigma/8``.
    """
    lo, hi = -4 * slits.d, (slits.n + 3) * slits.d
    if n_points is None:
        n_points = resolving_points(hi - lo, slits.sigma)
    return Grid(lo, hi, n_points)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    grid: Grid
    amplitudes: np.ndarray
    space: str = "position"

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.shape != (self.grid.n_points,):
            raise GridMismatch(
                f"expected {self.grid.n_points} amplitudes, got shape {amp.shape}")
        if not np.all(np.isfinite(amp)):
            raise ValueError("wavefunction has non-finite amplitudes")
        if self.space not in SPACES:
            raise ValueError(f"unknown space label {self.space!r}")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.spacing))

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def normalized(self) -> "WaveFunction":
        return self.scaled(1.0 / self.norm())

    def scaled(self, factor) -> "WaveFunction":
        """Multiply by a scalar or by a pointwise array of factors."""
        return WaveFunction(self.grid, self.amplitudes * factor, self.space)

    def centroid(self) -> float:
        rho = self.density()
        return float(np.sum(self.x * rho) / np.sum(rho))


def check_compatible(a: WaveFunction, b: WaveFunction) -> None:
    if a.grid != b.grid or a.space != b.space:
        raise GridMismatch("wavefunctions live on different grids or spaces")


def inner(a: WaveFunction, b: WaveFunction) -> complex:
    """<a|b> as a Riemann sum on the shared grid."""
    check_compatible(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.grid.spacing)


@dataclass(frozen=True, eq=False)
class EntangledState:
    """Particle states paired with an orthonormal detector basis."""

    components: tuple[WaveFunction, ...]
    basis_tag: str = "which-way"

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) == 0:
            raise InvalidDimension("entangled state needs at least one component")
        for c in comps[1:]:
            check_compatible(comps[0], c)
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def grid(self) -> Grid:
        return self.components[0].grid

    @property
    def space(self) -> str:
        return self.components[0].space

    def matrix(self) -> np.ndarray:
        """Amplitudes stacked as an ``(n, n_points)`` array."""
        return np.stack([c.amplitudes for c in self.components])

    def norm(self) -> float:
        return float(np.sqrt(sum(c.norm() ** 2 for c in self.components)))

    def probabilities(self) -> np.ndarray:
        return np.array([c.norm() ** 2 for c in self.components])

    @classmethod
    def from_matrix(cls, grid: Grid, amps: np.ndarray, basis_tag: str,
                    space: str = "position") -> "EntangledState":
        return cls(tuple(WaveFunction(grid, row, space) for row in amps), basis_tag)


def _profile(x: np.ndarray, center: float, sigma: float, profile: str) -> np.ndarray:
    if profile == "gaussian":
        return np.exp(-((x - center) ** 2) / (2 * sigma**2))
    # half-open top hat keeps supports of slits exactly d/2 apart disjoint
    u = x - center
    return ((u >= -sigma * (1 + 1e-12)) & (u < sigma * (1 - 1e-12))).astype(float)


def localized_states(centers: Sequence[float], sigma: float, grid: Grid,
                     profile: str = "gaussian", space: str = "position",
                     ) -> list[WaveFunction]:
    """Unit-normalized narrow states at ``centers`` with overlap guards.

    Shared by slit states (position space) and momentum peaks.
    """
    if grid.spacing > sigma / 8 * (1 + 1e-12):
        raise GridTooCoarse(
            f"grid spacing {grid.spacing:.3g} exceeds sigma/8 = {sigma / 8:.3g}")
    lo, hi = min(centers) - 8 * sigma, max(centers) + 8 * sigma
    if not grid.contains(lo, hi):
        raise GridTooCoarse(
            f"grid [{grid.x_min}, {grid.x_max}] must span [{lo:.4g}, {hi:.4g}]")
    x = grid.points
    states = [WaveFunction(grid, _profile(x, c, sigma, profile), space).normalized()
              for c in centers]
    for j in range(len(states)):
        for k in range(j + 1, len(states)):
            ov = abs(inner(states[j], states[k]))
            if ov >= OVERLAP_TOL:
                raise OverlapTooLarge(
                    f"states {j} and {k} overlap by {ov:.3g} (limit {OVERLAP_TOL})")
    return states


def make_slit_states(slits: SlitArray, grid: Grid | None = None) -> list[WaveFunction]:
    """One unit-normalized state per slit, centred on the slit positions."""
    grid = default_grid(slits) if grid is None else grid
    return localized_states(slits.centers, slits.sigma, grid, slits.profile)


def superpose(states: Sequence[WaveFunction], coeffs: Sequence[complex]) -> WaveFunction:
    """Normalized ``sum_k coeffs[k] * states[k]``."""
    if len(states) != len(coeffs):
        raise DimensionMismatch(f"{len(states)} states but {len(coeffs)} coefficients")
    for s in states[1:]:
        check_compatible(states[0], s)
    amps = sum(c * s.amplitudes for c, s in zip(coeffs, states))
    return WaveFunction(states[0].grid, amps, states[0].space).normalized()


def partial_detectors(overlap: complex) -> np.ndarray:
    """Two unit detector vectors with ``<d1|d2> = overlap``, as columns.

    The vectors are embedded in a two dimensional orthonormal frame:
    ``d1 = (1, 0)`` and ``d2 = (overlap, sqrt(1 - |overlap|**2))``.
    """
    if abs(overlap) > 1:
        raise ValueError("detector overlap must have modulus <= 1")
    return np.array([[1, overlap], [0, np.sqrt(1 - abs(overlap) ** 2)]], dtype=complex)


def entangle(states: Sequence[WaveFunction], detectors: np.ndarray | None = None,
             ) -> EntangledState:
    """Build ``(1/sqrt(n)) sum_k psi_k |d_k>``.

    ``detectors`` holds the detector states as columns expressed in some
    orthonormal frame; the default identity gives perfectly distinguishing
    which-way states.
    """
    n = len(states)
    if n < 2:
        raise InvalidDimension(f"need at least two path states, got {n}")
    for j in range(n):
        for k in range(j + 1, n):
            ov = abs(inner(states[j], states[k]))
            if ov >= OVERLAP_TOL:
                raise OverlapTooLarge(f"path states {j} and {k} overlap by {ov:.3g}")
    if detectors is None:
        detectors, tag = np.eye(n), "which-way"
    else:
        detectors, tag = np.asarray(detectors, dtype=complex), "detector-frame"
        if detectors.ndim != 2 or detectors.shape[1] != n:
            raise DimensionMismatch(f"need {n} detector columns, got {detectors.shape}")
        if np.max(np.abs(np.linalg.norm(detectors, axis=0) - 1)) > 1e-12:
            raise ValueError("detector vectors must be unit normalized")
    psi = np.stack([s.amplitudes for s in states]) / np.sqrt(n)
    return EntangledState.from_matrix(states[0].grid, detectors @ psi, tag, states[0].space)


def as_unitary(U) -> tuple[np.ndarray, str]:
    """Extract ``(matrix, tag)`` from an UnbiasedBasis or a plain array."""
    matrix = np.asarray(getattr(U, "matrix", U), dtype=complex)
    tag = getattr(U, "tag", "custom")
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotUnitary(f"basis matrix must be square, got shape {matrix.shape}")
    dev = np.max(np.abs(matrix @ matrix.conj().T - np.eye(len(matrix))))
    if dev > UNITARY_TOL:
        raise NotUnitary(f"matrix deviates from unitarity by {dev:.3g}")
    return matrix, tag


def change_basis(state: EntangledState, U, tag: str | None = None) -> EntangledState:
    """Re-express ``state`` in a new detector basis.

    ``U[j, k] = <b'_j | b_k>``, i.e. column ``k`` gives the old basis vector
    ``k`` in the new basis.  The new component ``j`` is then
    ``<b'_j|Psi> = sum_k U[j, k] c_k``, which is what a coincidence
    measurement on ``|b'_j>`` post-selects.
    """
    matrix, utag = as_unitary(U)
    if matrix.shape[0] != state.n:
        raise DimensionMismatch(f"{matrix.shape[0]}x{matrix.shape[0]} basis for "
                                f"{state.n} components")
    return EntangledState.from_matrix(state.grid, matrix @ state.matrix(),
                                      tag or utag, state.space)


def condition(state: EntangledState, j: int) -> tuple[WaveFunction, float]:
    """Post-select detector outcome ``j``: normalized state and probability."""
    if not 0 <= j < state.n:
        raise IndexOutOfRange(f"outcome {j} outside 0..{state.n - 1}")
    comp = state.components[j]
    p = comp.norm() ** 2
    if p == 0:
        return comp, 0.0
    return comp.normalized(), p
