"""Detector bases that are unbiased with respect to the which-way basis.

Every matrix here follows the convention of :func:`kicksim.qstate.change_basis`:
``U[j, k] = <b'_j | d_k>``, so column ``k`` lists the which-way state
``|d_k>`` in the new basis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension, NotUnbiased
from .qstate import UNITARY_TOL, as_unitary

UNBIASED_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class UnbiasedBasis:
    matrix: np.ndarray
    tag: str
    thetas: tuple[float, ...] | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        as_unitary(m)
        ok, dev = is_unbiased(m)
        if not ok:
            raise NotUnbiased(f"{self.tag}: entries deviate from 1/sqrt(n) by {dev:.3g}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def fourier_basis(n: int) -> UnbiasedBasis:
    """Basis built from the n-th roots of unity, ``U[j, k] = w**(j*k) / sqrt(n)``.

    Row 0 is the uniform superposition; every row has a real positive first
    entry.
    """
    if int(n) != n or n < 2:
        raise InvalidDimension(f"Fourier basis needs n >= 2, got {n}")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return UnbiasedBasis(np.exp(2j * np.pi * jk / n) / np.sqrt(n), f"fourier-{n}")


def three_slit_basis() -> UnbiasedBasis:
    """The alpha/beta/gamma basis for slits at -d, 0, d.

    Phases are referenced to the middle slit, so this differs from
    ``fourier_basis(3)`` by constant row phases.
    """
    w = np.exp(2j * np.pi / 3)
    m = np.array([[1, 1, 1],
                  [w.conjugate(), 1, w],
                  [w, 1, w.conjugate()]]) / np.sqrt(3)
    return UnbiasedBasis(m, "three-slit-centered")


def general_two_slit_basis(theta1: float, theta2: float, theta3: float) -> UnbiasedBasis:
    """Most general two-state basis unbiased w.r.t. ``|d1>, |d2>``.

    ``|d1> = (e^{i theta1}|a> + e^{i theta2}|b>)/sqrt2`` and
    ``|d2> = (e^{i theta3}|a> + e^{i theta4}|b>)/sqrt2``; orthogonality fixes
    ``theta4 = theta3 - theta1 + theta2 + pi``.  Row phases are kept as
    given, since the constant phase between the two outcomes is one of the
    quantities the kick analysis extracts.
    """
    theta4 = theta3 - theta1 + theta2 + np.pi
    m = np.array([[np.exp(1j * theta1), np.exp(1j * theta3)],
                  [np.exp(1j * theta2), np.exp(1j * theta4)]]) / np.sqrt(2)
    return UnbiasedBasis(m, "general-two-slit", (theta1, theta2, theta3, theta4))


def rotation_basis(angle: float) -> np.ndarray:
    """Real 2x2 rotation; unbiased only for odd multiples of pi/4."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def is_unbiased(U) -> tuple[bool, float]:
    """Whether every ``|U[j, k]|`` equals ``1/sqrt(n)``, and the worst deviation."""
    m, _ = as_unitary(U)
    dev = float(np.max(np.abs(np.abs(m) - 1 / np.sqrt(len(m)))))
    return dev < UNBIASED_TOL, dev


def unitarity_error(U) -> float:
    m = np.asarray(getattr(U, "matrix", U), dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(len(m)))))


__all__ = ["UnbiasedBasis", "fourier_basis", "three_slit_basis",
           "general_two_slit_basis", "rotation_basis", "is_unbiased",
           "unitarity_error", "UNITARY_TOL"]
