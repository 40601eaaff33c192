import numpy as np
import pytest

from spectravoid.exceptions import InvalidInput, SingularInput, StructureViolation
from spectravoid.numkernel import (
    as_matrix,
    eig_selfadjoint,
    eig_unitary_angles,
    polar_unitary_factor,
    qr_decompose,
    svd,
    wrap_angle,
)

SIZES = range(2, 13)
INSTANCES = 100


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def gaussian(rng, shape, complex_field):
    if complex_field:
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return rng.standard_normal(shape)


def haar(rng, n, complex_field):
    Q, _ = qr_decompose(gaussian(rng, (n, n), complex_field))
    return Q


def test_as_matrix_rejects_vectors():
    with pytest.raises(InvalidInput):
        as_matrix(np.ones(3))


def test_as_matrix_rejects_non_finite():
    with pytest.raises(InvalidInput):
        as_matrix(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_as_matrix_keeps_field():
    assert as_matrix([[1, 2], [3, 4]]).dtype == np.float64
    assert as_matrix(np.eye(2, dtype=complex)).dtype == np.complex128


@pytest.mark.parametrize(
    "theta, expected",
    [(np.pi, np.pi), (-np.pi, np.pi), (0.0, 0.0), (np.pi + 0.5, -np.pi + 0.5)],
)
def test_wrap_angle(theta, expected):
    assert wrap_angle(theta) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("complex_field", [False, True])
def test_qr_residuals(rng, complex_field):
    for n in SIZES:
        for _ in range(INSTANCES):
            A = gaussian(rng, (n + 2, n), complex_field)
            Q, R = qr_decompose(A)
            scale = np.linalg.norm(A)
            assert np.linalg.norm(Q @ R - A) <= 1e-12 * n * scale
            assert np.linalg.norm(Q.conj().T @ Q - np.eye(n)) <= 1e-12 * n
            assert np.allclose(np.tril(R, -1), 0.0)
            assert np.all(np.diag(R).real >= 0.0)
            assert np.allclose(np.diag(R).imag, 0.0)
            assert np.iscomplexobj(Q) == complex_field


def test_qr_needs_tall_input(rng):
    with pytest.raises(InvalidInput):
        qr_decompose(rng.standard_normal((2, 3)))


@pytest.mark.parametrize("complex_field", [False, True])
def test_eig_selfadjoint_residuals(rng, complex_field):
    for n in SIZES:
        for _ in range(INSTANCES):
            G = gaussian(rng, (n, n), complex_field)
            A = G + G.conj().T
            w, V = eig_selfadjoint(A)
            assert np.all(np.diff(w) >= 0.0)
            assert np.linalg.norm(A @ V - V * w) <= 1e-12 * n * np.linalg.norm(A)
            assert np.linalg.norm(V.conj().T @ V - np.eye(n)) <= 1e-12 * n


def test_eig_selfadjoint_rejects_non_hermitian():
    with pytest.raises(StructureViolation) as error:
        eig_selfadjoint(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert error.value.violation > 0


@pytest.mark.parametrize("complex_field", [False, True])
def test_eig_unitary_angles_match_eigenvalues(rng, complex_field):
    for n in SIZES:
        for _ in range(INSTANCES // 4):
            U = haar(rng, n, complex_field)
            angles = eig_unitary_angles(U)
            assert np.all(angles > -np.pi) and np.all(angles <= np.pi)
            assert np.all(np.diff(angles) >= 0.0)
            eigenvalues = np.linalg.eigvals(U)
            distance = np.abs(np.exp(1j * angles)[:, None] - eigenvalues[None, :])
            assert distance.min(axis=1).max() <= 1e-10


def test_eig_unitary_angles_rotation():
    theta = 0.7
    R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    assert eig_unitary_angles(R) == pytest.approx([-theta, theta], abs=1e-14)


def test_eig_unitary_angles_rejects_non_unitary():
    with pytest.raises(StructureViolation):
        eig_unitary_angles(2.0 * np.eye(3))


@pytest.mark.parametrize("complex_field", [False, True])
def test_svd_residuals(rng, complex_field):
    for n in SIZES:
        for _ in range(INSTANCES // 4):
            A = gaussian(rng, (n + 1, n), complex_field)
            U, s, V = svd(A)
            assert np.all(np.diff(s) <= 0.0) and s[-1] >= 0.0
            assert np.linalg.norm((U * s) @ V.conj().T - A) <= 1e-12 * n * np.linalg.norm(A)
            assert np.linalg.norm(V.conj().T @ V - np.eye(n)) <= 1e-12 * n


@pytest.mark.parametrize("complex_field", [False, True])
def test_polar_unitary_factor(rng, complex_field):
    for n in SIZES:
        for _ in range(INSTANCES // 4):
            A = gaussian(rng, (n, n), complex_field)
            U_p = polar_unitary_factor(A)
            assert np.linalg.norm(U_p.conj().T @ U_p - np.eye(n)) <= 1e-12 * n
            P = U_p.conj().T @ A
            assert np.linalg.norm(P - P.conj().T) <= 1e-10 * np.linalg.norm(A)
            assert np.linalg.eigvalsh(0.5 * (P + P.conj().T)).min() >= -1e-10 * np.linalg.norm(A)


def test_polar_unitary_factor_of_orthogonal_is_itself(rng):
    Q = haar(rng, 5, complex_field=False)
    assert np.allclose(polar_unitary_factor(Q), Q, atol=1e-12)


def test_polar_unitary_factor_of_scaled_rotation():
    A = np.eye(2) + np.array([[0.0, 1.0], [-1.0, 0.0]])
    expected = np.array([[1.0, 1.0], [-1.0, 1.0]]) / np.sqrt(2.0)
    assert np.allclose(polar_unitary_factor(A), expected, atol=1e-14)


def test_polar_unitary_factor_is_unique(rng):
    U = haar(rng, 4, complex_field=True)
    G = gaussian(rng, (4, 4), complex_field=True)
    R = G @ G.conj().T + np.eye(4)
    assert np.allclose(polar_unitary_factor(U @ R), U, atol=1e-10)


@pytest.mark.parametrize(
    "A, expected",
    [(np.diag([2.0, -3.0]), [3.0, 2.0]), (np.zeros((2, 3)), [0.0, 0.0])],
)
def test_svd_small_cases(A, expected):
    _, s, _ = svd(A)
    assert s == pytest.approx(expected, abs=1e-15)


def test_polar_unitary_factor_rejects_singular():
    with pytest.raises(SingularInput):
        polar_unitary_factor(np.array([[1.0, 2.0], [2.0, 4.0]]))


if __name__ == "__main__":
    pytest.main()
