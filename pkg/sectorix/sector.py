"""
Sector matrices: accretivity tests, sector-angle certification, numerical range
sampling and seeded random instance generators.

A matrix is a sector matrix with angle alpha when its numerical range lies in
the closed cone |Im z| <= tan(alpha) Re z. The certified angle is the smallest
such alpha, found by bisection on two half-plane conditions.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .cmat import (
    CMatrix,
    Comparison,
    as_cmatrix,
    eigvals_desc,
    im_part,
    lambda_min,
    op_norm,
    re_part,
    symmetrize,
    top_eigenvectors,
)
from .errors import BracketError, ConfigError, GenerationError, NotAccretiveError

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]

ANGLE_TOL = 1e-10
MAX_RESAMPLES = 8
HALF_PI = math.pi / 2


@dataclass(frozen=True)
class SectorCertificate:
    """A sector matrix with its certified angle and real-part spectral bounds."""
    A: np.ndarray
    alpha: float
    m: float
    M: float
    h: float


class SectorGenSpec(BaseModel):
    """Parameters of the A = X diag(e^{i theta}) X* generator."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    alpha_max: float
    cond_x: float = 10.0
    seed: int = 0
    force_extremal: bool = True

    @field_validator("alpha_max")
    @classmethod
    def _alpha_range(cls, value: float) -> float:
        if not 0.0 <= value < HALF_PI:
            raise ValueError(f"alpha_max {value} outside [0, pi/2)")
        return value

    @field_validator("cond_x")
    @classmethod
    def _cond_range(cls, value: float) -> float:
        if value < 1.0:
            raise ValueError("cond_x must be >= 1")
        return value


def _rng(seed: SeedLike) -> np.random.Generator:
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def is_accretive(A: CMatrix, tol: float = 0.0) -> Comparison:
    """Re A positive definite; margin = lambda_min(Re A)."""
    margin = lambda_min(re_part(A))
    return Comparison(holds=bool(margin > tol), margin=margin)


def is_accretive_dissipative(A: CMatrix, tol: float = 0.0) -> Comparison:
    """Both Re A and Im A positive definite; margin = the smaller of their lambda_min."""
    margin = min(lambda_min(re_part(A)), lambda_min(im_part(A)))
    return Comparison(holds=bool(margin > tol), margin=margin)


def half_plane_margins(A: CMatrix, alpha: float) -> Tuple[float, float]:
    """
    lambda_min of Re(e^{i(pi/2-alpha)}A) and Re(e^{-i(pi/2-alpha)}A).

    Both are nonnegative exactly when W(A) lies in the closed sector of angle alpha.
    """
    R = re_part(A)
    I = im_part(A)
    s, c = math.sin(alpha), math.cos(alpha)
    return lambda_min(s * R - c * I), lambda_min(s * R + c * I)


def sector_angle(A: CMatrix, tol: float = ANGLE_TOL) -> float:
    """
    Minimal alpha in [0, pi/2) with W(A) inside the closed sector S_alpha.

    Bisection on the smaller half-plane margin, which is nondecreasing in alpha.
    The upper end of the final bracket is returned so the margins at the result
    are nonnegative.

    Raises:
        NotAccretiveError: Re A is not positive definite
        BracketError: the margin is not positive at pi/2
    """
    A = as_cmatrix(A)
    accretive = is_accretive(A)
    if not accretive.holds:
        raise NotAccretiveError(f"matrix is not accretive (lambda_min(Re A) = {accretive.margin:.3e})")

    R = re_part(A)
    I = im_part(A)
    scale = max(1.0, op_norm(A))

    def margin(alpha: float) -> float:
        s, c = math.sin(alpha), math.cos(alpha)
        return min(lambda_min(s * R - c * I), lambda_min(s * R + c * I))

    if margin(0.0) >= -1e-12 * scale:
        return 0.0
    if margin(HALF_PI) <= 0.0:
        raise BracketError("sector margin is not positive at pi/2; cannot bracket the angle")

    lo, hi = 0.0, HALF_PI
    steps = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if margin(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
        steps += 1
    logger.debug(f"sector_angle bisection: {steps} steps, alpha={hi:.12f}")
    return hi


def nr_boundary(A: CMatrix, num_angles: int = 360) -> np.ndarray:
    """
    Support points of the numerical range on a uniform grid of directions.

    For each theta the point x* A x is returned, with x a top eigenvector of
    Re(e^{-i theta} A) = cos(theta) Re A + sin(theta) Im A.
    """
    if num_angles < 3:
        raise ConfigError("num_angles must be >= 3")
    A = as_cmatrix(A)
    R = re_part(A)
    I = im_part(A)
    thetas = 2.0 * math.pi * np.arange(num_angles) / num_angles
    stack = np.cos(thetas)[:, None, None] * R + np.sin(thetas)[:, None, None] * I
    x = top_eigenvectors(stack)
    return np.einsum("ki,ij,kj->k", x.conj(), A, x)


def sector_angle_grid(A: CMatrix, num_angles: int = 10_000) -> float:
    """Angular extent max |arg z| of the sampled numerical range (grid cross-check)."""
    points = nr_boundary(A, num_angles)
    if np.any(points.real <= 0.0):
        return HALF_PI
    return float(np.max(np.abs(np.angle(points))))


def certify(A: CMatrix) -> SectorCertificate:
    """Certified angle and Re A spectral bounds of an accretive matrix."""
    A = as_cmatrix(A)
    alpha = sector_angle(A)
    values = eigvals_desc(re_part(A))
    m, M = float(values[-1]), float(values[0])
    return SectorCertificate(A=A, alpha=alpha, m=m, M=M, h=M / m)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Ginibre sample with unit-variance entries."""
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from QR of a Ginibre sample."""
    Q, R = np.linalg.qr(ginibre(n, rng))
    # QR is unique only up to phases; fix diag(R) positive
    L = np.diagonal(R)
    Q = Q * (L / np.abs(L))
    return Q


def conditioned_factor(n: int, cond_x: float, rng: np.random.Generator) -> np.ndarray:
    """
    Invertible X with cond(X) <= cond_x.

    Singular vectors come from a Ginibre sample; its log singular values are
    compressed affinely into a window of width log(cond_x).
    """
    G = ginibre(n, rng)
    U, s, Vh = np.linalg.svd(G)
    logs = np.log(s)
    spread = logs.max() - logs.min()
    window = math.log(cond_x)
    if spread > window:
        logs = logs.min() + (logs - logs.min()) * (window / spread)
    logs = logs - logs.mean()
    return (U * np.exp(logs)) @ Vh


def sector_from_factors(X: CMatrix, thetas: Sequence[float]) -> CMatrix:
    """X diag(e^{i theta_j}) X*."""
    X = as_cmatrix(X)
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (X.shape[0],):
        raise ConfigError(f"need {X.shape[0]} angles, got {thetas.shape}")
    A = (X * np.exp(1j * thetas)) @ X.conj().T
    if not np.any(thetas):
        A = symmetrize(A)
    return A


def sector_sample(n: int, alpha_max: float, cond_x: float, force_extremal: bool,
                  rng: np.random.Generator) -> SectorCertificate:
    """Draw one sector matrix from an existing generator stream."""
    if not 0.0 <= alpha_max < HALF_PI:
        raise ConfigError(f"alpha_max {alpha_max} outside [0, pi/2)")
    if cond_x < 1.0:
        raise ConfigError("cond_x must be >= 1")

    for attempt in range(1, MAX_RESAMPLES + 1):
        X = conditioned_factor(n, cond_x, rng)
        thetas = rng.uniform(-alpha_max, alpha_max, size=n) if alpha_max > 0 else np.zeros(n)
        if force_extremal and alpha_max > 0:
            j = int(rng.integers(n))
            thetas[j] = alpha_max if rng.random() < 0.5 else -alpha_max

        s = np.linalg.svd(X, compute_uv=False)
        if s[0] / s[-1] > cond_x * (1.0 + 1e-9):
            logger.debug(f"resampling X: cond {s[0] / s[-1]:.3e} > {cond_x} (attempt {attempt})")
            continue

        A = sector_from_factors(X, thetas)
        try:
            cert = certify(A)
        except (NotAccretiveError, BracketError) as exc:
            logger.debug(f"resampling sector instance: {exc} (attempt {attempt})")
            continue
        if cert.alpha > alpha_max + 1e-8:
            logger.debug(f"resampling: certified {cert.alpha:.3e} > {alpha_max:.3e} (attempt {attempt})")
            continue
        return cert

    raise GenerationError(f"gen_sector gave up after {MAX_RESAMPLES} resamples (n={n}, cond_x={cond_x})")


def gen_sector(spec: SectorGenSpec) -> SectorCertificate:
    """
    Random sector matrix A = X diag(e^{i theta_j}) X*, reproducible from spec.seed.

    theta_j is uniform in [-alpha_max, alpha_max]; with force_extremal one entry is
    set to +/-alpha_max. The certificate's alpha is recomputed by sector_angle.
    """
    return sector_sample(spec.n, spec.alpha_max, spec.cond_x, spec.force_extremal, _rng(spec.seed))


def hpd_sample(n: int, m: float, M: float, rng: np.random.Generator) -> np.ndarray:
    """U diag(lambda) U* with lambda in [m, M]; M is always attained, m only when n > 1."""
    if not 0.0 < m <= M:
        raise ConfigError(f"invalid spectral bounds m={m}, M={M}; need 0 < m <= M")
    values = rng.uniform(m, M, size=n)
    values[0] = M
    if n > 1:
        values[-1] = m
    U = haar_unitary(n, rng)
    return symmetrize((U * values) @ U.conj().T)


def gen_hpd(n: int, m: float, M: float, seed: SeedLike = None) -> np.ndarray:
    """Hermitian positive definite matrix with spectrum in [m, M] and Haar eigenvectors."""
    return hpd_sample(n, m, M, _rng(seed))


def joint_bounds(mats: Sequence[CMatrix]) -> Tuple[float, float]:
    """Smallest lambda_min and largest lambda_max over Hermitian matrices."""
    lows, highs = [], []
    for H in mats:
        values = eigvals_desc(H)
        lows.append(values[-1])
        highs.append(values[0])
    return float(min(lows)), float(max(highs))


def max_angle(mats: Sequence[CMatrix], nominal: Optional[float] = None) -> float:
    """Certified common angle of several sector matrices (or a nominal override)."""
    if nominal is not None:
        return nominal
    return max(sector_angle(A) for A in mats)
