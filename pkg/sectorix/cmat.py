"""
Dense complex linear algebra for small square matrices.

Cartesian decomposition, Hermitian spectra, singular values, determinants,
Loewner-order comparison and spectral functions of positive matrices.
A CMatrix is a square complex128 numpy array with finite entries.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple, Union

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .errors import (
    NonFiniteError,
    NotHermitianError,
    NotPositiveDefiniteError,
    ConfigError,
    ShapeError,
    SingularMatrixError,
)
from .jacobi import jacobi_eigh

logger = logging.getLogger(__name__)

CMatrix = npt.NDArray[np.complex128]

EIGEN_METHODS = ("lapack", "jacobi")
HERMITIAN_RTOL = 1e-12
SINGULAR_RTOL = 1e-13
HPD_RTOL = 1e-12

_eigen_method = "lapack"


def set_eigen_method(method: str) -> None:
    """Select the Hermitian eigensolver used by every spectral routine."""
    global _eigen_method
    if method not in EIGEN_METHODS:
        raise ConfigError(f"unknown eigen method {method!r}; expected one of {EIGEN_METHODS}")
    _eigen_method = method


@dataclass(frozen=True)
class HermEigen:
    """Eigenvalues sorted descending and the matching unitary eigenvector matrix."""
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values sorted descending."""
    values: np.ndarray

    def __getitem__(self, j: int) -> float:
        return float(self.values[j])

    def __len__(self) -> int:
        return len(self.values)


class Comparison(NamedTuple):
    holds: bool
    margin: float


def as_cmatrix(x: Union[npt.ArrayLike, CMatrix]) -> CMatrix:
    """Validate and convert to a square, finite complex128 array."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ShapeError("matrix dimension must be positive")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix has NaN or Inf entries")
    return arr


def identity(n: int) -> CMatrix:
    return np.eye(n, dtype=np.complex128)


def symmetrize(H: CMatrix) -> CMatrix:
    """(H + H*)/2, exactly Hermitian."""
    return 0.5 * (H + H.conj().T)


# ---------------------------------------------------------------------------
# Cartesian decomposition
# ---------------------------------------------------------------------------

def re_part(A: CMatrix) -> CMatrix:
    """Real part (A + A*)/2."""
    A = as_cmatrix(A)
    return symmetrize(A)


def im_part(A: CMatrix) -> CMatrix:
    """Imaginary part (A - A*)/2i."""
    A = as_cmatrix(A)
    return symmetrize((A - A.conj().T) / 2j)


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------

def _check_hermitian(H: CMatrix) -> CMatrix:
    H = as_cmatrix(H)
    norm = np.linalg.norm(H)
    skew = np.linalg.norm(H - H.conj().T)
    if skew > HERMITIAN_RTOL * H.shape[0] * max(1.0, norm):
        raise NotHermitianError(f"matrix is not Hermitian (||H - H*|| = {skew:.3e})")
    return symmetrize(H)


def _eigh(H: CMatrix):
    if _eigen_method == "jacobi":
        values, vectors = jacobi_eigh(H)
    else:
        values, vectors = np.linalg.eigh(H)
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


def herm_eigen(H: CMatrix) -> HermEigen:
    """Eigen-decomposition of a Hermitian matrix, values descending."""
    H = _check_hermitian(H)
    values, vectors = _eigh(H)
    return HermEigen(values=values, vectors=vectors)


def top_eigenvectors(stack: np.ndarray) -> np.ndarray:
    """Top eigenvector of each Hermitian matrix in a (k, n, n) stack, one per row."""
    if _eigen_method == "jacobi":
        return np.stack([_eigh(H)[1][:, 0] for H in stack])
    _, vectors = np.linalg.eigh(stack)
    return vectors[:, :, -1]


def eigvals_desc(H: CMatrix) -> np.ndarray:
    """Eigenvalues of the symmetrized matrix, descending (no Hermitian check)."""
    H = symmetrize(as_cmatrix(H))
    if _eigen_method == "jacobi":
        values, _ = jacobi_eigh(H)
    else:
        values = np.linalg.eigvalsh(H)
    return np.sort(values)[::-1]


def lambda_min(H: CMatrix) -> float:
    return float(eigvals_desc(H)[-1])


def lambda_max(H: CMatrix) -> float:
    return float(eigvals_desc(H)[0])


def singular_values(A: CMatrix) -> SingularSpectrum:
    """
    Singular values, descending.

    LAPACK path uses the SVD directly; the Jacobi path takes square roots of
    the eigenvalues of A*A with tiny negatives clamped to 0.
    """
    A = as_cmatrix(A)
    if _eigen_method == "jacobi":
        gram = symmetrize(A.conj().T @ A)
        values, _ = jacobi_eigh(gram)
        values = np.sqrt(np.clip(np.sort(values)[::-1], 0.0, None))
    else:
        values = np.linalg.svd(A, compute_uv=False)
    return SingularSpectrum(values=np.asarray(values, dtype=float))


def topk_sv_product(A: CMatrix, k: int) -> float:
    """Product of the k largest singular values."""
    A = as_cmatrix(A)
    n = A.shape[0]
    if not 1 <= k <= n:
        raise ShapeError(f"k={k} outside 1..{n}")
    return float(np.prod(singular_values(A).values[:k]))


def topk_eig_product(H: CMatrix, k: int) -> float:
    """Product of the k largest eigenvalues of a Hermitian matrix."""
    values = eigvals_desc(H)
    if not 1 <= k <= len(values):
        raise ShapeError(f"k={k} outside 1..{len(values)}")
    return float(np.prod(values[:k]))


def op_norm(A: CMatrix) -> float:
    """Spectral norm s_1(A)."""
    A = np.asarray(A, dtype=np.complex128)
    return float(np.linalg.norm(A, 2))


# ---------------------------------------------------------------------------
# Determinant and inverse
# ---------------------------------------------------------------------------

def det(A: CMatrix) -> complex:
    """Determinant via partially pivoted LU; the permutation sign is tracked from the pivots."""
    A = as_cmatrix(A)
    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


def _check_invertible(A: CMatrix) -> None:
    s = singular_values(A).values
    ratio = s[-1] / s[0] if s[0] > 0 else 0.0
    if ratio <= SINGULAR_RTOL:
        raise SingularMatrixError(
            f"matrix is numerically singular (s_min/s_max = {ratio:.3e})", ratio=ratio
        )


def inverse(A: CMatrix) -> CMatrix:
    """Inverse through an LU factorization; rejects numerically singular input."""
    A = as_cmatrix(A)
    _check_invertible(A)
    factors = scipy.linalg.lu_factor(A, check_finite=False)
    return scipy.linalg.lu_solve(factors, identity(A.shape[0]), check_finite=False)


def solve(A: CMatrix, B: CMatrix) -> CMatrix:
    A = as_cmatrix(A)
    _check_invertible(A)
    return scipy.linalg.solve(A, B, check_finite=False)


# ---------------------------------------------------------------------------
# Spectral functions
# ---------------------------------------------------------------------------

def _hpd_eigen(H: CMatrix) -> HermEigen:
    eig = herm_eigen(H)
    top = eig.values[0]
    if top <= 0 or eig.values[-1] <= HPD_RTOL * top:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite (lambda_min={eig.values[-1]:.3e}, lambda_max={top:.3e})"
        )
    return eig


def require_hpd(H: CMatrix) -> CMatrix:
    """Symmetrized H; raises unless H is Hermitian positive definite."""
    _hpd_eigen(H)
    return symmetrize(as_cmatrix(H))


def hpd_power(H: CMatrix, p: float) -> CMatrix:
    """H^p for Hermitian positive definite H."""
    eig = _hpd_eigen(H)
    U = eig.vectors
    return symmetrize((U * eig.values ** p) @ U.conj().T)


def hpd_function(H: CMatrix, f: Callable[[np.ndarray], np.ndarray]) -> CMatrix:
    """f(H) through the eigen-decomposition of an HPD matrix."""
    eig = _hpd_eigen(H)
    U = eig.vectors
    return symmetrize((U * f(eig.values)) @ U.conj().T)


def psd_function(H: CMatrix, f: Callable[[np.ndarray], np.ndarray], tol: float = 1e-10) -> CMatrix:
    """f(H) for positive semidefinite H; eigenvalues above -tol*scale are clamped to 0."""
    eig = herm_eigen(H)
    floor = -tol * max(1.0, abs(eig.values[0]))
    if eig.values[-1] < floor:
        raise NotPositiveDefiniteError(f"matrix is not positive semidefinite (lambda_min={eig.values[-1]:.3e})")
    values = np.clip(eig.values, 0.0, None)
    U = eig.vectors
    return symmetrize((U * f(values)) @ U.conj().T)


def abs_matrix(A: CMatrix) -> CMatrix:
    """|A| = (A*A)^{1/2}."""
    A = as_cmatrix(A)
    return psd_function(symmetrize(A.conj().T @ A), np.sqrt)


def abs_power(A: CMatrix, r: float) -> CMatrix:
    """|A|^r = (A*A)^{r/2}."""
    A = as_cmatrix(A)
    return psd_function(symmetrize(A.conj().T @ A), lambda x: x ** (r / 2.0))


# ---------------------------------------------------------------------------
# Loewner order
# ---------------------------------------------------------------------------

def loewner_leq(A: CMatrix, B: CMatrix, tol: float = 1e-10) -> Comparison:
    """A <= B in the Loewner order; margin = lambda_min(B - A)."""
    A = symmetrize(as_cmatrix(A))
    B = symmetrize(as_cmatrix(B))
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch {A.shape} vs {B.shape}")
    margin = lambda_min(B - A)
    threshold = -tol * max(1.0, op_norm(A), op_norm(B))
    return Comparison(holds=bool(margin >= threshold), margin=margin)


def is_psd(H: CMatrix, tol: float = 1e-10) -> bool:
    H = as_cmatrix(H)
    if np.linalg.norm(H - H.conj().T) > tol * max(1.0, np.linalg.norm(H)):
        return False
    return lambda_min(H) >= -tol * max(1.0, op_norm(H))


# ---------------------------------------------------------------------------
# Matrix JSON
# ---------------------------------------------------------------------------

def to_json_dict(A: CMatrix) -> dict:
    """{"n", "re", "im"} row-major; "im" omitted for real matrices."""
    A = as_cmatrix(A)
    payload = {"n": int(A.shape[0]), "re": A.real.tolist()}
    if np.any(A.imag != 0):
        payload["im"] = A.imag.tolist()
    return payload


def from_json_dict(payload: dict, source: str = "<matrix>") -> CMatrix:
    if not isinstance(payload, dict):
        raise ConfigError(f"{source}: matrix JSON must be an object")
    if "n" not in payload or "re" not in payload:
        raise ConfigError(f"{source}: matrix JSON needs fields 'n' and 're'")
    n = payload["n"]
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"{source}: field 'n' must be a positive integer")
    try:
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload.get("im", np.zeros((n, n))), dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: fields 're'/'im' must be numeric arrays") from exc
    for name, arr in (("re", re), ("im", im)):
        if arr.shape != (n, n):
            raise ConfigError(f"{source}: field '{name}' has shape {arr.shape}, expected ({n}, {n})")
    try:
        return as_cmatrix(re + 1j * im)
    except NonFiniteError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def read_matrix(path: Union[str, Path]) -> CMatrix:
    path = Path(path)
    try:
        with open(path, "r") as f:
            payload = json.load(f)
    except FileNotFoundError as exc:
        raise ConfigError(f"{path}: file not found") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from exc
    return from_json_dict(payload, source=str(path))


def write_matrix(A: CMatrix, path: Union[str, Path]) -> None:
    with open(path, "w") as f:
        json.dump(to_json_dict(A), f)
        f.write("\n")
    logger.info(f"Wrote {A.shape[0]}x{A.shape[0]} matrix to {path}")
