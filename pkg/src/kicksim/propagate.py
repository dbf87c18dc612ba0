"""Free evolution from the slit plane to the screen.

Two modes are supported:

``fresnel_exact``
    Spectral free-particle evolution: multiply the momentum representation
    by ``exp(-i p**2 t / 2)`` and transform back.  Exact up to rounding for
    band-limited states, but periodic, so it is only usable while the state
    stays clear of the grid edges.

``fraunhofer``
    The far-field limit, in which the screen position maps onto momentum as
    ``x_screen = p t``.  The result is the momentum representation itself,
    sampled on a momentum grid, so fringe periods come out in momentum
    units (``h/d = 2 pi/d`` for slit spacing ``d``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import czt

from .errors import AliasingDetected, NotFarField
from .qstate import EntangledState, Grid, WaveFunction

EDGE_POINTS = 4
EDGE_PROB_TOL = 1e-6
SUPPORT_REL = 1e-12


def default_flight_time(d: float = 1.0) -> float:
    """Flight time that puts >= 10 fringe periods inside the central window."""
    return 40 * d**2 / (2 * np.pi)


@dataclass(frozen=True)
class PropagationSpec:
    mode: str = "fraunhofer"
    t: float | None = default_flight_time()
    screen_grid: Grid | None = None

    def __post_init__(self):
        # t=None in fraunhofer mode skips the far-field guard
        if self.mode not in ("fresnel_exact", "fraunhofer"):
            raise ValueError(f"unknown propagation mode {self.mode!r}")
        if self.mode == "fresnel_exact" and self.t is None:
            raise ValueError("exact propagation needs a flight time")
        if self.mode == "fraunhofer" and self.t is not None and not self.t > 0:
            raise ValueError("far-field propagation needs t > 0")
        if self.mode == "fresnel_exact" and self.t < 0:
            raise ValueError("flight time must be non-negative")


def _conjugate_space(space: str) -> str:
    return "momentum" if space == "position" else "position"


def _kinetic_phase(grid: Grid, t: float) -> np.ndarray:
    k = 2 * np.pi * np.fft.fftfreq(grid.n_points, grid.spacing)
    return np.exp(-0.5j * k**2 * t)


def _check_edges(amps: np.ndarray, dx: float) -> None:
    rho = np.abs(amps) ** 2
    edge = (rho[..., :EDGE_POINTS].sum() + rho[..., -EDGE_POINTS:].sum()) * dx
    if edge > EDGE_PROB_TOL:
        raise AliasingDetected(
            f"probability {edge:.3g} within {EDGE_POINTS} points of the grid edge")


def evolve_free(psi: WaveFunction, t: float, check: bool = True) -> WaveFunction:
    """Free evolution for time ``t`` (any sign) on a position grid."""
    if psi.space != "position":
        raise ValueError("free evolution expects a position-space wavefunction")
    if t == 0:
        return psi
    amps = np.fft.ifft(np.fft.fft(psi.amplitudes) * _kinetic_phase(psi.grid, t))
    if check:
        _check_edges(amps, psi.grid.spacing)
    return WaveFunction(psi.grid, amps, psi.space)


def _support_extent(amps: np.ndarray, x: np.ndarray) -> float:
    rho = np.abs(np.atleast_2d(amps)) ** 2
    rho = rho.sum(axis=0)
    idx = np.nonzero(rho > SUPPORT_REL * rho.max())[0]
    return float(x[idx[-1]] - x[idx[0]])


def fresnel_number(psi: WaveFunction, t: float) -> float:
    """``L**2 / (2 pi t)`` for the occupied extent ``L`` of ``psi``."""
    return _support_extent(psi.amplitudes, psi.x) ** 2 / (2 * np.pi * t)


def fourier_transform(amps: np.ndarray, src: Grid, out: Grid, sign: int = -1) -> np.ndarray:
    """``(1/sqrt(2 pi)) sum_n f(x_n) exp(sign*i q x_n) dx`` on the grid ``out``.

    Evaluated with a chirp-z transform, so ``out`` can be any uniform grid
    (not only the FFT frequencies).  Works along the last axis.
    """
    dx, dq = src.spacing, out.spacing
    a = np.exp(-sign * 1j * out.x_min * dx)
    w = np.exp(sign * 1j * dq * dx)
    spec = czt(amps, out.n_points, w, a, axis=-1)
    q = out.points
    return spec * np.exp(sign * 1j * q * src.x_min) * dx / np.sqrt(2 * np.pi)


def default_screen_grid(amps: np.ndarray, grid: Grid, n_points: int = 16384,
                        tail: float = 1e-15) -> Grid:
    """Symmetric conjugate-space grid holding all but ``tail`` of the probability."""
    power = np.abs(np.fft.fft(np.atleast_2d(amps), axis=-1)) ** 2
    power = np.fft.fftshift(power.sum(axis=0))
    k = np.fft.fftshift(2 * np.pi * np.fft.fftfreq(grid.n_points, grid.spacing))
    order = np.argsort(np.abs(k))
    cum = np.cumsum(power[order])
    idx = min(np.searchsorted(cum, (1 - tail) * cum[-1]), len(k) - 1)
    half = np.abs(k[order][idx]) * 1.25
    return Grid(-float(half), float(half), n_points)


def to_far_field(psi: WaveFunction, t: float | None = None, screen_grid: Grid | None = None,
                 check: bool = True) -> WaveFunction:
    """Far-field amplitude on a conjugate-space grid.

    For a position-space state this is ``phi(p)`` with ``p = x_screen / t``;
    for a momentum-space state it is the position representation.  The
    result carries the norm of ``psi`` (so unit in, unit out).
    ``t`` only enters through the far-field guard ``L**2 / (2 pi t) <= 1``.
    """
    if check and t is not None and fresnel_number(psi, t) > 1:
        raise NotFarField(f"Fresnel number {fresnel_number(psi, t):.3g} > 1 at t={t}")
    if screen_grid is None:
        screen_grid = default_screen_grid(psi.amplitudes, psi.grid)
    sign = -1 if psi.space == "position" else 1
    amps = fourier_transform(psi.amplitudes, psi.grid, screen_grid, sign)
    out = WaveFunction(screen_grid, amps, _conjugate_space(psi.space))
    return out.scaled(psi.norm() / out.norm())


def screen_positions(grid: Grid, t: float) -> np.ndarray:
    """Map a far-field momentum axis onto screen coordinates ``x = p t``."""
    return grid.points * t


def evolve_entangled(state: EntangledState, spec: PropagationSpec) -> EntangledState:
    """Apply the same free evolution to every component; the detector is untouched."""
    if spec.mode == "fresnel_exact":
        comps = tuple(evolve_free(c, spec.t) for c in state.components)
        return EntangledState(comps, state.basis_tag)
    src = state.matrix()
    if spec.t is not None:
        frn = _support_extent(src, state.grid.points) ** 2 / (2 * np.pi * spec.t)
        if frn > 1:
            raise NotFarField(f"Fresnel number {frn:.3g} > 1 at t={spec.t}")
    screen = spec.screen_grid or default_screen_grid(src, state.grid)
    sign = -1 if state.space == "position" else 1
    amps = fourier_transform(src, state.grid, screen, sign)
    scale = state.norm() / np.sqrt(np.sum(np.abs(amps) ** 2) * screen.spacing)
    return EntangledState.from_matrix(screen, amps * scale, state.basis_tag,
                                      _conjugate_space(state.space))
