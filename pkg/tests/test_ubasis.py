import numpy as np
import pytest

from kicksim import ubasis
from kicksim.errors import InvalidDimension, NotUnbiased


@pytest.mark.parametrize("n", range(2, 9))
def test_fourier_basis_unitary_and_unbiased(n):
    U = ubasis.fourier_basis(n).matrix
    assert np.max(np.abs(U @ U.conj().T - np.eye(n))) < 1e-12
    assert np.allclose(np.abs(U), 1 / np.sqrt(n), atol=1e-15, rtol=0)


def test_fourier_basis_entries():
    U = ubasis.fourier_basis(3).matrix
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(U * np.sqrt(3), [[1, 1, 1], [1, w, w**2], [1, w**2, w**4]])


def test_fourier_two_is_plus_minus():
    assert np.allclose(ubasis.fourier_basis(2).matrix * np.sqrt(2), [[1, 1], [1, -1]])


def test_fourier_basis_rejects_small_n():
    with pytest.raises(InvalidDimension):
        ubasis.fourier_basis(1)


def test_three_slit_basis():
    b = ubasis.three_slit_basis()
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(b.matrix[1] * np.sqrt(3), [w.conjugate(), 1, w])
    assert np.allclose(b.matrix[2] * np.sqrt(3), [w, 1, w.conjugate()])
    assert ubasis.unitarity_error(b) < 1e-12


def test_general_two_slit_basis_fourth_angle():
    b = ubasis.general_two_slit_basis(0.3, -1.1, 2.0)
    assert b.thetas[3] == pytest.approx(2.0 - 0.3 + (-1.1) + np.pi)
    assert ubasis.unitarity_error(b) < 1e-12


def test_general_two_slit_reduces_to_fourier():
    b = ubasis.general_two_slit_basis(0, 0, 0)
    assert np.allclose(b.matrix, ubasis.fourier_basis(2).matrix)


@pytest.mark.parametrize("angle,unbiased", [(np.pi / 4, True), (np.pi / 6, False),
                                            (0.0, False), (3 * np.pi / 4, True)])
def test_rotation_bias(angle, unbiased):
    ok, _ = ubasis.is_unbiased(ubasis.rotation_basis(angle))
    assert ok is unbiased


def test_biased_matrix_rejected():
    with pytest.raises(NotUnbiased):
        ubasis.UnbiasedBasis(np.eye(2), "identity")
