#!/usr/bin/env python3
"""
Tests for the complex matrix primitives.
"""

import numpy as np
import pytest

from sectorix import cmat
from sectorix.errors import (
    ConfigError,
    NonFiniteError,
    NotHermitianError,
    NotPositiveDefiniteError,
    ShapeError,
    SingularMatrixError,
)
from sectorix.sector import ginibre, haar_unitary


@pytest.fixture
def jacobi_solver():
    cmat.set_eigen_method("jacobi")
    yield
    cmat.set_eigen_method("lapack")


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (G + G.conj().T) / 2


def test_as_cmatrix_validation():
    assert cmat.as_cmatrix(3.0).shape == (1, 1)
    with pytest.raises(ShapeError):
        cmat.as_cmatrix(np.ones((2, 3)))
    with pytest.raises(NonFiniteError):
        cmat.as_cmatrix([[1.0, np.nan], [0.0, 1.0]])


def test_cartesian_decomposition():
    A = np.array([[1 + 2j, 3], [1j, 4 - 1j]])
    R = cmat.re_part(A)
    I = cmat.im_part(A)
    np.testing.assert_allclose(R + 1j * I, A)
    np.testing.assert_allclose(R, R.conj().T)
    np.testing.assert_allclose(I, I.conj().T)


def test_herm_eigen_descending_and_reconstructs():
    H = random_hermitian(5, 1)
    eig = cmat.herm_eigen(H)
    assert np.all(np.diff(eig.values) <= 0)
    U = eig.vectors
    np.testing.assert_allclose((U * eig.values) @ U.conj().T, H, atol=1e-12)


def test_herm_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        cmat.herm_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_jacobi_agrees_with_lapack(jacobi_solver):
    for seed in range(5):
        H = random_hermitian(6, seed)
        np.testing.assert_allclose(cmat.eigvals_desc(H), np.sort(np.linalg.eigvalsh(H))[::-1], atol=1e-12)
        s = cmat.singular_values(H + 1j * np.eye(6)).values
        np.testing.assert_allclose(s, np.linalg.svd(H + 1j * np.eye(6), compute_uv=False), atol=1e-10)


def test_set_eigen_method_rejects_unknown():
    with pytest.raises(ConfigError):
        cmat.set_eigen_method("qr")


def test_singular_values_and_topk():
    A = np.diag([3.0, -4j, 0.5])
    np.testing.assert_allclose(cmat.singular_values(A).values, [4.0, 3.0, 0.5])
    assert cmat.topk_sv_product(A, 2) == pytest.approx(12.0)
    with pytest.raises(ShapeError):
        cmat.topk_sv_product(A, 4)
    assert cmat.topk_eig_product(np.diag([1.0, 5.0, 2.0]), 2) == pytest.approx(10.0)
    assert cmat.op_norm(A) == pytest.approx(cmat.singular_values(A).values[0])


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_singular_values_unitarily_invariant(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        A = ginibre(n, rng)
        U, V = haar_unitary(n, rng), haar_unitary(n, rng)
        s = cmat.singular_values(A).values
        np.testing.assert_allclose(cmat.singular_values(U @ A @ V).values, s, rtol=1e-10, atol=1e-12 * s[0])
        assert cmat.topk_sv_product(A, n) == pytest.approx(abs(cmat.det(A)), rel=1e-8)


def test_det_tracks_pivot_sign():
    assert cmat.det(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1.0)
    assert cmat.det(np.diag([2.0, 3.0j])) == pytest.approx(6.0j)
    rng = np.random.default_rng(3)
    A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert cmat.det(A) == pytest.approx(np.linalg.det(A), rel=1e-10)


def test_inverse_and_singular_input():
    A = np.array([[2.0, 1j], [-1j, 3.0]])
    np.testing.assert_allclose(cmat.inverse(A) @ A, np.eye(2), atol=1e-14)
    with pytest.raises(SingularMatrixError) as info:
        cmat.inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert info.value.ratio is not None and info.value.ratio <= 1e-13


def test_hpd_power_and_functions():
    np.testing.assert_allclose(cmat.hpd_power(np.diag([4.0, 9.0]), 0.5), np.diag([2.0, 3.0]))
    np.testing.assert_allclose(cmat.hpd_function(np.diag([1.0, np.e]), np.log), np.diag([0.0, 1.0]), atol=1e-15)
    with pytest.raises(NotPositiveDefiniteError):
        cmat.hpd_power(np.diag([1.0, 0.0]), 0.5)
    with pytest.raises(NotPositiveDefiniteError):
        cmat.psd_function(np.diag([1.0, -1.0]), np.sqrt)
    np.testing.assert_allclose(cmat.psd_function(np.diag([4.0, 0.0]), np.sqrt), np.diag([2.0, 0.0]))


def test_abs_matrix():
    X = np.array([[0.0, 2.0], [0.0, 0.0]])
    np.testing.assert_allclose(cmat.abs_matrix(X), np.diag([0.0, 2.0]), atol=1e-15)
    np.testing.assert_allclose(cmat.abs_power(X, 2.0), X.conj().T @ X, atol=1e-14)


def test_loewner_order():
    check = cmat.loewner_leq(np.eye(2), 2 * np.eye(2))
    assert check.holds and check.margin == pytest.approx(1.0)
    assert not cmat.loewner_leq(np.diag([1.0, 3.0]), np.diag([2.0, 2.0])).holds
    assert cmat.is_psd(np.diag([1.0, 0.0]))
    assert not cmat.is_psd(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_matrix_json_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    path = tmp_path / "A.json"
    cmat.write_matrix(A, path)
    assert np.array_equal(cmat.read_matrix(path), A)


def test_matrix_json_errors(tmp_path):
    with pytest.raises(ConfigError, match="'re'"):
        cmat.from_json_dict({"n": 2, "re": [[1, 2, 3]]})
    with pytest.raises(ConfigError, match="not found"):
        cmat.read_matrix(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        cmat.read_matrix(bad)


if __name__ == "__main__":
    pytest.main([__file__])
