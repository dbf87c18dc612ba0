"""Momentum-kick representation of which-way entanglement.

In a detector basis that is unbiased with respect to the which-way states,
component ``j`` of the entangled state equals, on the slit lattice, the
undisturbed superposition multiplied by a plane wave ``exp(i p_j x)``:
the particle received a momentum kick ``p_j = j h / (n d)``.  Off the
lattice points the plane wave varies across each finite aperture, so for
slits of width ``sigma`` the two descriptions agree only up to a fidelity
that tends to one as ``sigma/d -> 0``.  This module builds the kicked
states and measures that agreement.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DimensionMismatch, GridMismatch, InvalidDimension, NotUnbiased
from .qstate import (
    EntangledState,
    Grid,
    SlitArray,
    WaveFunction,
    as_unitary,
    change_basis,
    default_grid,
    entangle,
    inner,
    make_slit_states,
    superpose,
)
from .ubasis import UnbiasedBasis, fourier_basis, is_unbiased

PLANCK = 2 * np.pi
KICK_FIDELITY_MIN = 0.99
DISQUALIFY = 0.05


@dataclass(frozen=True)
class Kick:
    index: int
    fraction: Fraction  # momentum in units of h/d
    momentum: float
    probability: float


@dataclass(frozen=True)
class KickSpectrum:
    n: int
    d: float
    kicks: tuple[Kick, ...]
    folded: bool

    @property
    def momenta(self) -> np.ndarray:
        return np.array([k.momentum for k in self.kicks])

    @property
    def fractions(self) -> list[Fraction]:
        return [k.fraction for k in self.kicks]

    def max_abs_fraction(self) -> Fraction:
        return max(abs(f) for f in self.fractions)

    def min_nonzero_fraction(self) -> Fraction:
        return min(abs(f) for f in self.fractions if f != 0)


def kick_spectrum(n: int, d: float = 1.0, folded: bool = True) -> KickSpectrum:
    """Kicks ``p_j = j h/(n d)`` for outcomes ``j = 0..n-1``.

    Folding maps ``j > n/2`` to ``j - n``; on the slit lattice ``x = k d`` a
    kick and the same kick minus ``h/d`` are indistinguishable, and folding
    picks the representative in ``(-h/2d, h/2d]``.
    """
    if int(n) != n or n < 2:
        raise InvalidDimension(f"kick spectrum needs n >= 2, got {n}")
    if not d > 0:
        raise ValueError("slit spacing must be positive")
    kicks = []
    for j in range(n):
        frac = Fraction(j - n if folded and 2 * j > n else j, n)
        kicks.append(Kick(j, frac, PLANCK * float(frac) / d, 1 / n))
    return KickSpectrum(n, d, tuple(kicks), folded)


def lattice_phases(basis, centers, spectrum: KickSpectrum) -> tuple[np.ndarray, float]:
    """Constant phases ``phi_j`` with ``sqrt(n) U[j,k] = exp(i phi_j) exp(i p_j x_k)``.

    Returns the phases and the worst violation of that identity over all
    ``j, k``; a tiny residual means the basis is a kick basis for this
    slit layout.
    """
    m, _ = as_unitary(basis)
    n = len(m)
    if n != spectrum.n or len(centers) != n:
        raise DimensionMismatch("basis, slit centres and spectrum disagree on n")
    centers = np.asarray(centers, dtype=float)
    kick_phase = np.exp(1j * np.outer(spectrum.momenta, centers))
    phases = np.angle(np.sqrt(n) * m[:, 0] / kick_phase[:, 0])
    model = np.exp(1j * phases)[:, None] * kick_phase
    return phases, float(np.max(np.abs(np.sqrt(n) * m - model)))


def kick_representation(base: WaveFunction, spectrum: KickSpectrum,
                        constant_phases=None, basis_tag: str | None = None,
                        ) -> EntangledState:
    """Components ``exp(i phi_j) exp(i p_j x) base / sqrt(n)``."""
    n = spectrum.n
    phases = np.zeros(n) if constant_phases is None else np.asarray(constant_phases, float)
    if phases.shape != (n,):
        raise DimensionMismatch(f"need {n} constant phases, got {phases.shape}")
    if base.space != "position":
        raise ValueError("momentum kicks act on position-space states")
    x = base.x
    comps = tuple(base.scaled(np.exp(1j * (phi + p * x)) / np.sqrt(n))
                  for phi, p in zip(phases, spectrum.momenta))
    return EntangledState(comps, basis_tag or f"fourier-{n}")


@dataclass(frozen=True)
class FidelityRecord:
    per_component: tuple[float, ...]
    global_fidelity: float

    @property
    def infidelity(self) -> float:
        return 1 - self.global_fidelity


def representation_fidelity(a: EntangledState, b: EntangledState) -> FidelityRecord:
    """Per-component ``|<a_j|b_j>|/(|a_j||b_j|)`` and global ``|<a|b>|/(|a||b|)``."""
    if a.n != b.n:
        raise DimensionMismatch(f"{a.n} vs {b.n} components")
    if a.grid != b.grid or a.space != b.space:
        raise GridMismatch("states live on different grids")
    if a.basis_tag != b.basis_tag:
        raise ValueError(f"basis tags differ: {a.basis_tag!r} vs {b.basis_tag!r}")
    dx = a.grid.spacing
    ov = np.einsum("ij,ij->i", a.matrix().conj(), b.matrix()) * dx
    na = np.array([c.norm() for c in a.components])
    nb = np.array([c.norm() for c in b.components])
    with np.errstate(divide="ignore", invalid="ignore"):
        per = np.where(na * nb > 0, np.abs(ov) / (na * nb), 0.0)
    glob = abs(ov.sum()) / (a.norm() * b.norm())
    return FidelityRecord(tuple(float(v) for v in per), float(glob))


def fourier_kick_equivalence(slits: SlitArray, grid: Grid | None = None,
                             folded: bool = True, basis: UnbiasedBasis | None = None,
                             ) -> FidelityRecord:
    """Fidelity between the Fourier-basis state and its kicked form."""
    grid = default_grid(slits) if grid is None else grid
    states = make_slit_states(slits, grid)
    basis = fourier_basis(slits.n) if basis is None else basis
    spectrum = kick_spectrum(slits.n, slits.d, folded)
    phases, _ = lattice_phases(basis, slits.centers, spectrum)
    fourier_state = change_basis(entangle(states), basis)
    base = superpose(states, np.ones(slits.n) / np.sqrt(slits.n))
    kicked = kick_representation(base, spectrum, phases, fourier_state.basis_tag)
    return representation_fidelity(fourier_state, kicked)


def _support_masks(slits: SlitArray, x: np.ndarray) -> list[np.ndarray]:
    reach = 3 * slits.sigma if slits.profile == "gaussian" else slits.sigma
    return [np.abs(x - c) <= reach for c in slits.centers]


def _fold_phase(phi: float) -> float:
    """Wrap into ``(-pi, pi]``, sending rounding noise around -pi to +pi."""
    w = float(-((np.pi - phi) % (2 * np.pi) - np.pi))
    return np.pi if abs(w + np.pi) < 1e-9 else w


def fit_kick(a: WaveFunction, b: WaveFunction, slits: SlitArray) -> tuple[float, float]:
    """Kick ``p`` and phase ``delta`` with ``b ~ exp(i delta) exp(i p x) a``.

    Least-squares line through the phase of ``conj(a) b`` sampled on each
    slit support, unwrapped slit to slit into ``(-pi, pi]`` (i.e. the kick is
    folded into ``(-h/2d, h/2d]``).
    """
    prod = a.amplitudes.conj() * b.amplitudes
    phases = np.array([np.angle(prod[m].sum()) for m in _support_masks(slits, a.x)])
    steps = [_fold_phase(s) for s in np.diff(phases)]
    unwrapped = phases[0] + np.concatenate([[0.0], np.cumsum(steps)])
    slope, intercept = np.polyfit(slits.centers, unwrapped, 1)
    return float(slope), float(intercept)


@dataclass(frozen=True)
class KickFormRecord:
    kick: float
    expected_kick: float
    constant_phase: float
    expected_phase: float
    fidelity: float
    norm_ratio: float

    @property
    def kick_error(self) -> float:
        return abs(abs(self.kick) - self.expected_kick) / self.expected_kick

    @property
    def phase_error(self) -> float:
        return abs(_fold_phase(self.constant_phase - self.expected_phase))

    @property
    def passed(self) -> bool:
        return (self.kick_error <= 0.01 and self.phase_error <= 0.01
                and self.fidelity >= KICK_FIDELITY_MIN and abs(self.norm_ratio - 1) < 1e-6)


def general_basis_kick_form(state: EntangledState, basis: UnbiasedBasis,
                            slits: SlitArray) -> KickFormRecord:
    """Check ``component_b = exp(i delta) exp(i p0 x) component_a`` for a two-slit state.

    ``state`` may be given in the which-way basis (it is then transformed)
    or already in ``basis``.  The expected constant phase is
    ``theta2 - theta1 - p0 x_1``, i.e. ``theta2 - theta1`` for slits at
    0 and d and ``theta2 - theta1 + pi/2`` for slits at -d/2 and d/2.
    """
    ok, dev = is_unbiased(basis)
    if not ok:
        raise NotUnbiased(f"basis deviates from unbiased by {dev:.3g}")
    if state.n != 2 or slits.n != 2:
        raise DimensionMismatch("the general unbiased basis is two dimensional")
    if state.basis_tag != getattr(basis, "tag", None):
        state = change_basis(state, basis)
    a, b = state.components
    kick, delta = fit_kick(a, b, slits)
    p0 = PLANCK / (2 * slits.d)
    thetas = basis.thetas or (0.0, np.angle(basis.matrix[1, 0] / basis.matrix[0, 0]))
    expected = thetas[1] - thetas[0] - p0 * slits.centers[0]
    model = a.scaled(np.exp(1j * (delta + kick * a.x)))
    fid = abs(inner(model, b)) / (a.norm() * b.norm())
    return KickFormRecord(kick, p0, delta, expected, float(fid), b.norm() / a.norm())


@dataclass(frozen=True)
class CounterexampleRecord:
    fidelity: float
    best_kick: float
    norm_difference: float
    disqualified_by: tuple[str, ...]

    @property
    def kick_form_holds(self) -> bool:
        return not self.disqualified_by


def best_fit_kick(a: WaveFunction, b: WaveFunction, d: float,
                  n_scan: int = 801) -> tuple[float, float]:
    """Kick maximizing ``|<exp(ipx) a | b>| / (|a||b|)`` over ``|p| <= h/d``."""
    na, nb = a.norm(), b.norm()
    if na == 0 or nb == 0:
        return 0.0, 0.0
    prod = a.amplitudes.conj() * b.amplitudes
    keep = np.abs(prod) > 1e-14 * np.abs(prod).max()
    x, prod = a.x[keep], prod[keep]
    scale = a.grid.spacing / (na * nb)

    def fid(p):
        return abs(np.sum(prod * np.exp(-1j * p * x))) * scale

    ps = np.linspace(-PLANCK / d, PLANCK / d, n_scan)
    vals = np.abs(np.exp(-1j * np.outer(ps, x)) @ prod) * scale
    i = int(np.argmax(vals))
    step = ps[1] - ps[0]
    res = minimize_scalar(lambda p: -fid(p), bounds=(ps[i] - step, ps[i] + step),
                          method="bounded", options={"xatol": 1e-10})
    best = max((vals[i], ps[i]), (-res.fun, res.x))
    return float(best[1]), float(best[0])


def biased_basis_counterexample(state: EntangledState, U, slits: SlitArray,
                                ) -> CounterexampleRecord:
    """Show that a biased detector basis admits no kick interpretation.

    The kick form fails if even the best single plane-wave factor leaves an
    infidelity above 0.05 between the two components, or if the component
    norms differ by more than 0.05.  An unbiased ``U`` serves as control.
    """
    if state.n != 2:
        raise DimensionMismatch("counterexample is defined for two slits")
    a, b = change_basis(state, U).components
    kick, fid = best_fit_kick(a, b, slits.d)
    norm_diff = abs(a.norm() - b.norm())
    reasons = []
    if 1 - fid > DISQUALIFY:
        reasons.append("fidelity")
    if norm_diff > DISQUALIFY:
        reasons.append("norm")
    return CounterexampleRecord(fid, kick, norm_diff, tuple(reasons))
