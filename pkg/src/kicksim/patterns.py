"""Screen patterns, fringe visibility and fringe shifts.

Visibility is the Michelson contrast ``(I_max - I_min) / (I_max + I_min)``
of the envelope-normalized intensity over a window of six fringe periods
centred on the pattern centroid.  The envelope is best supplied explicitly
(the far-field pattern of a single aperture, see :func:`envelope_pattern`);
otherwise it is estimated by a least-squares fit that separates the
slowly varying envelope from the fringe harmonics.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import legvander
from scipy.optimize import minimize_scalar

from .errors import GridMismatch, IndexOutOfRange
from .propagate import to_far_field
from .qstate import EntangledState, Grid, SlitArray, WaveFunction, make_slit_states

WEIGHT_TOL = 1e-8
NOISE_FLOOR = 1e-6


@dataclass(frozen=True, eq=False)
class Pattern:
    grid: Grid
    intensity: np.ndarray
    weight: float
    space: str = "momentum"

    def __post_init__(self):
        inten = np.array(self.intensity, dtype=float)
        if inten.shape != (self.grid.n_points,):
            raise GridMismatch("intensity does not match the grid")
        if np.any(inten < 0):
            raise ValueError("pattern intensity must be non-negative")
        inten.flags.writeable = False
        object.__setattr__(self, "intensity", inten)
        if abs(self.integral() - self.weight) > WEIGHT_TOL:
            raise ValueError(f"pattern integrates to {self.integral():.12g}, "
                             f"weight is {self.weight:.12g}")

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def integral(self) -> float:
        return float(np.sum(self.intensity) * self.grid.spacing)

    def centroid(self) -> float:
        return float(np.sum(self.x * self.intensity) / np.sum(self.intensity))

    def scaled(self, factor: float) -> "Pattern":
        return Pattern(self.grid, self.intensity * factor, self.weight * factor, self.space)


@dataclass(frozen=True)
class FringeReport:
    visibility: float
    period: float | None
    shift: float | None
    window: tuple[float, float]

    @property
    def has_fringes(self) -> bool:
        return self.period is not None


def pattern_of(psi: WaveFunction) -> Pattern:
    rho = psi.density()
    return Pattern(psi.grid, rho, float(rho.sum() * psi.grid.spacing), psi.space)


def intensity(state: EntangledState) -> Pattern:
    """Unconditioned screen density ``sum_k |component_k|**2``."""
    rho = np.sum(np.abs(state.matrix()) ** 2, axis=0)
    return Pattern(state.grid, rho, float(rho.sum() * state.grid.spacing), state.space)


def conditioned_pattern(state: EntangledState, j: int) -> Pattern:
    """Density in coincidence with detector outcome ``j``, weighted by its probability."""
    if not 0 <= j < state.n:
        raise IndexOutOfRange(f"outcome {j} outside 0..{state.n - 1}")
    return pattern_of(state.components[j])


def combine(patterns: Sequence[Pattern]) -> Pattern:
    first = patterns[0]
    for p in patterns[1:]:
        if p.grid != first.grid:
            raise GridMismatch("cannot add patterns on different grids")
    return Pattern(first.grid, sum(p.intensity for p in patterns),
                   sum(p.weight for p in patterns), first.space)


def envelope_pattern(slits: SlitArray, screen_grid: Grid, source_grid: Grid | None = None,
                     ) -> Pattern:
    """Far-field pattern of a single aperture of the array (unit weight)."""
    single = make_slit_states(slits, source_grid)[0]
    return pattern_of(to_far_field(single, screen_grid=screen_grid))


def _estimate_envelope(x: np.ndarray, inten: np.ndarray, period: float,
                       degree: int = 8, harmonics: int = 6, mod_degree: int = 3,
                       ) -> np.ndarray:
    """Slowly varying envelope of a fringe pattern on a window.

    Linear least-squares fit of ``E(x) + sum_m A_m(x) cos(m k x) + B_m(x) sin(m k x)``
    with Legendre polynomials ``E`` (degree 8) and low-degree modulations
    ``A_m, B_m``; returns ``E``.
    """
    u = (x - x.mean()) / ((x[-1] - x[0]) / 2)
    env_basis = legvander(u, degree)
    mod_basis = legvander(u, mod_degree)
    k = 2 * np.pi / period
    cols = [env_basis]
    for m in range(1, harmonics + 1):
        cols += [mod_basis * np.cos(m * k * x)[:, None],
                 mod_basis * np.sin(m * k * x)[:, None]]
    coef, *_ = np.linalg.lstsq(np.hstack(cols), inten, rcond=None)
    return env_basis @ coef[: degree + 1]


def _fourier_coefficient(x: np.ndarray, q: np.ndarray, f: float) -> complex:
    return complex(np.sum(q * np.exp(-2j * np.pi * f * x)))


def _dominant_frequency(x: np.ndarray, q: np.ndarray) -> float | None:
    """Strongest non-DC spatial frequency of ``q`` sampled at uniform ``x``."""
    q = (q - q.mean()) * np.hanning(len(q))
    if not np.any(q):
        return None
    dx = x[1] - x[0]
    nfft = 8 * int(2 ** np.ceil(np.log2(len(q))))
    mag = np.abs(np.fft.rfft(q, nfft))
    freqs = np.fft.rfftfreq(nfft, dx)
    # skip the DC lobe: start after the first local minimum
    k = 1
    while k < len(mag) - 1 and mag[k + 1] <= mag[k]:
        k += 1
    if k >= len(mag) - 2:
        return None
    peak = k + int(np.argmax(mag[k:]))
    df = freqs[1]
    res = minimize_scalar(lambda f: -abs(_fourier_coefficient(x, q, f)),
                          bounds=(max(freqs[peak] - df, df / 2), freqs[peak] + df),
                          method="bounded", options={"xatol": df * 1e-6})
    return float(res.x)


def _normalized(p: Pattern, win: np.ndarray, envelope: Pattern | None,
                period: float) -> np.ndarray:
    """Envelope-normalized intensity on the window ``win``."""
    inten = p.intensity[win]
    if envelope is not None:
        if envelope.grid != p.grid:
            raise GridMismatch("envelope and pattern grids differ")
        env = envelope.intensity[win]
    else:
        env = _estimate_envelope(p.x[win], inten, period)
    env = env / env.max()
    with np.errstate(divide="ignore", invalid="ignore"):
        return inten / env


def estimate_period(p: Pattern, envelope: Pattern | None = None) -> float | None:
    """Fringe period from the dominant frequency of the bright core of ``p``.

    The core is where the envelope (or, without one, the intensity) exceeds
    10% of its peak.
    """
    ref = envelope.intensity if envelope is not None else p.intensity
    idx = np.nonzero(ref > 0.1 * ref.max())[0]
    sl = slice(idx[0], idx[-1] + 1)
    x, q = p.x[sl], p.intensity[sl]
    if envelope is not None:
        q = q / envelope.intensity[sl]
    else:
        # remove the envelope trend so it cannot masquerade as a fringe
        u = (x - x.mean()) / ((x[-1] - x[0]) / 2)
        trend = legvander(u, 8)
        q = q - trend @ np.linalg.lstsq(trend, q, rcond=None)[0]
    f = _dominant_frequency(x, q)
    return None if f is None else 1 / f


def _window(p: Pattern, period: float, n_periods: float) -> np.ndarray:
    c = p.centroid()
    half = n_periods * period / 2
    return (p.x >= c - half) & (p.x <= c + half)


def fringe_report(p: Pattern, reference: Pattern | None = None, *,
                  period: float | None = None, envelope: Pattern | None = None,
                  n_periods: float = 6) -> FringeReport:
    """Visibility, period and (relative to ``reference``) shift of the fringes.

    ``period`` is the expected fringe period used to size the analysis
    window; if omitted it is estimated from the pattern.  The shift is in
    units of one period, in ``(-1/2, 1/2]``, positive when ``p`` is displaced
    towards larger coordinates than ``reference``.
    """
    if reference is not None and reference.grid != p.grid:
        raise GridMismatch("pattern and reference grids differ")
    if period is None:
        period = estimate_period(reference if reference is not None else p, envelope)
        if period is None:
            c = p.centroid()
            return FringeReport(0.0, None, None, (c, c))
    base = reference if reference is not None else p
    win = _window(base, period, n_periods)
    window = (float(base.x[win][0]), float(base.x[win][-1]))
    x = p.x[win]
    q = _normalized(p, win, envelope, period)
    vis = float((q.max() - q.min()) / (q.max() + q.min()))
    f = _dominant_frequency(x, q)
    if vis < NOISE_FLOOR or f is None:
        return FringeReport(0.0, None, None, window)
    shift = None
    if reference is not None:
        qr = _normalized(reference, win, envelope, period)
        f_ref = _dominant_frequency(x, qr) or f
        phase = (np.angle(_fourier_coefficient(x, qr - qr.mean(), f_ref))
                 - np.angle(_fourier_coefficient(x, q - q.mean(), f_ref)))
        shift = wrap_shift(phase / (2 * np.pi))
    return FringeReport(vis, 1 / f, shift, window)


def wrap_shift(s: float) -> float:
    """Map a fractional shift into ``(-1/2, 1/2]``."""
    return float(-((0.5 - s) % 1.0 - 0.5)) + 0.0


def shift_distance(a: float, b: float) -> float:
    """Circular distance between two fractional shifts."""
    return abs(wrap_shift(a - b))


def visibility(p: Pattern, *, period: float | None = None,
               envelope: Pattern | None = None) -> float:
    return fringe_report(p, period=period, envelope=envelope).visibility
