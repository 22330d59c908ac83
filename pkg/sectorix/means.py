"""
Weighted means of accretive matrices and the Kantorovich constant.

The geometric mean of accretive A, B is defined by

    A #_v B = (sin(v pi) / pi) * int_0^inf t^(v-1) (A^-1 + t B^-1)^-1 dt

and evaluated by a trapezoidal rule after substituting t = e^s (scheme "exp")
or t = e^(sinh u) (scheme "sinh", the default).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .cmat import CMatrix, as_cmatrix, hpd_power, inverse, require_hpd, symmetrize
from .errors import ConfigError, ConvergenceError, NotAccretiveError, ShapeError
from .sector import is_accretive

logger = logging.getLogger(__name__)

ENDPOINT_TOL = 1e-6
BLOCK = 16


class MeanKind(str, Enum):
    HARMONIC = "harmonic"
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"


class QuadControls(BaseModel):
    """Trapezoid controls; step and range refer to the active integration variable."""

    model_config = ConfigDict(frozen=True)

    h_s: float = 0.25
    eps_q: float = 1e-12
    s_max: float = 60.0
    rtol: float = 1e-10
    max_halvings: int = 10
    scheme: Literal["sinh", "exp"] = "sinh"

    @field_validator("h_s")
    @classmethod
    def _step_range(cls, value: float) -> float:
        if not 0.0 < value <= 1.0:
            raise ValueError("h_s must be in (0, 1]")
        return value

    @field_validator("eps_q")
    @classmethod
    def _eps_range(cls, value: float) -> float:
        if not 0.0 < value <= 1e-6:
            raise ValueError("eps_q must be in (0, 1e-6]")
        return value

    @field_validator("s_max")
    @classmethod
    def _range_cap(cls, value: float) -> float:
        if value <= 0.0:
            raise ValueError("s_max must be positive")
        return value


DEFAULT_QUAD = QuadControls()


class MeanSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    v: float = Field(ge=0.0, le=1.0)
    kind: MeanKind = MeanKind.GEOMETRIC
    quad: QuadControls = DEFAULT_QUAD


@dataclass(frozen=True)
class KConstant:
    """Kantorovich constant K(h) = (h+1)^2 / 4h."""
    h: float
    value: float

    @classmethod
    def of(cls, h: float) -> "KConstant":
        return cls(h=h, value=kantorovich(h))


class ScalarMeans(NamedTuple):
    harmonic: float
    geometric: float
    arithmetic: float


def kantorovich(h: float) -> float:
    if not h > 0:
        raise ConfigError(f"Kantorovich constant needs h > 0, got {h}")
    return (h + 1.0) ** 2 / (4.0 * h)


def kappa(m: float, M: float) -> float:
    """max(K(m)^2, K(M)^2)."""
    if not 0.0 < m <= M:
        raise ConfigError(f"invalid bounds m={m}, M={M}; need 0 < m <= M")
    return max(kantorovich(m) ** 2, kantorovich(M) ** 2)


def scalar_means(a: float, b: float, v: float = 0.5) -> ScalarMeans:
    """Weighted harmonic, geometric and arithmetic means of positive scalars."""
    if a <= 0 or b <= 0:
        raise ConfigError(f"scalar means need positive arguments, got {a}, {b}")
    return ScalarMeans(
        harmonic=1.0 / ((1.0 - v) / a + v / b),
        geometric=a ** (1.0 - v) * b ** v,
        arithmetic=(1.0 - v) * a + v * b,
    )


def _check_pair(A: CMatrix, B: CMatrix, accretive: bool):
    A = as_cmatrix(A)
    B = as_cmatrix(B)
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch {A.shape} vs {B.shape}")
    if accretive:
        for name, X in (("A", A), ("B", B)):
            check = is_accretive(X)
            if not check.holds:
                raise NotAccretiveError(f"operand {name} is not accretive (lambda_min(Re) = {check.margin:.3e})")
    return A, B


def _check_weight(v: float) -> None:
    if not 0.0 <= v <= 1.0:
        raise ConfigError(f"weight v={v} outside [0, 1]")


def arithmetic_mean(A: CMatrix, B: CMatrix, v: float = 0.5) -> CMatrix:
    _check_weight(v)
    A, B = _check_pair(A, B, accretive=False)
    return (1.0 - v) * A + v * B


def harmonic_mean(A: CMatrix, B: CMatrix, v: float = 0.5) -> CMatrix:
    """((1-v)A^-1 + vB^-1)^-1."""
    _check_weight(v)
    A, B = _check_pair(A, B, accretive=True)
    if v == 0.0:
        return A.copy()
    if v == 1.0:
        return B.copy()
    return inverse((1.0 - v) * inverse(A) + v * inverse(B))


def geometric_mean_hpd(A: CMatrix, B: CMatrix, v: float = 0.5) -> CMatrix:
    """A^1/2 (A^-1/2 B A^-1/2)^v A^1/2 for HPD A, B."""
    _check_weight(v)
    A, B = _check_pair(A, B, accretive=False)
    A, B = require_hpd(A), require_hpd(B)
    if v == 0.0:
        return A
    A_half = hpd_power(A, 0.5)
    A_mhalf = hpd_power(A, -0.5)
    inner = hpd_power(symmetrize(A_mhalf @ B @ A_mhalf), v)
    return symmetrize(A_half @ inner @ A_half)


def pairwise_sum(stack: np.ndarray) -> np.ndarray:
    """Sum along axis 0 by a fixed binary tree."""
    while stack.shape[0] > 1:
        if stack.shape[0] % 2:
            stack = np.concatenate([stack, np.zeros_like(stack[:1])])
        stack = stack[0::2] + stack[1::2]
    return stack[0]


def _resolvent_terms(Ai: np.ndarray, Bi: np.ndarray, v: float, s: np.ndarray) -> np.ndarray:
    """e^{vs}(A^-1 + e^s B^-1)^-1 for each node s, rescaled for s > 0 to avoid overflow."""
    n = Ai.shape[0]
    out = np.empty((len(s), n, n), dtype=np.complex128)
    neg = s <= 0.0
    if np.any(neg):
        sn = s[neg]
        stack = Ai[None, :, :] + np.exp(sn)[:, None, None] * Bi[None, :, :]
        out[neg] = np.exp(v * sn)[:, None, None] * np.linalg.inv(stack)
    pos = ~neg
    if np.any(pos):
        sp = s[pos]
        stack = np.exp(-sp)[:, None, None] * Ai[None, :, :] + Bi[None, :, :]
        out[pos] = np.exp((v - 1.0) * sp)[:, None, None] * np.linalg.inv(stack)
    return out


def _weighted_terms(Ai, Bi, v, u, scheme):
    if scheme == "sinh":
        return np.cosh(u)[:, None, None] * _resolvent_terms(Ai, Bi, v, np.sinh(u))
    return _resolvent_terms(Ai, Bi, v, u)


def _trapezoid(Ai: np.ndarray, Bi: np.ndarray, v: float, step: float, quad: QuadControls) -> np.ndarray:
    """Trapezoid sum over a symmetric grid, widened until both tails drop below eps_q."""
    center = _weighted_terms(Ai, Bi, v, np.zeros(1), quad.scheme)
    left, right = [], []
    running = center[0].copy()
    left_open = right_open = True
    j = 1
    while left_open or right_open:
        if j * step > quad.s_max:
            raise ConvergenceError(
                f"quadrature tail above eps_q={quad.eps_q:g} at half-range {quad.s_max} (v={v}, scheme={quad.scheme})"
            )
        idx = np.arange(j, j + BLOCK, dtype=float)
        ref = np.linalg.norm(running)
        if left_open:
            block = _weighted_terms(Ai, Bi, v, -idx * step, quad.scheme)
            left.append(block)
            running += block.sum(axis=0)
            left_open = np.linalg.norm(block[-1]) > quad.eps_q * ref
        if right_open:
            block = _weighted_terms(Ai, Bi, v, idx * step, quad.scheme)
            right.append(block)
            running += block.sum(axis=0)
            right_open = np.linalg.norm(block[-1]) > quad.eps_q * ref
        j += BLOCK

    # nodes in ascending order so the tree sum does not depend on block sizes
    left_nodes = np.concatenate(left)[::-1]
    right_nodes = np.concatenate(right)
    nodes = np.concatenate([left_nodes, center, right_nodes])
    return step * pairwise_sum(nodes)


def geometric_mean_accretive(A: CMatrix, B: CMatrix, v: float = 0.5,
                             quad: Optional[QuadControls] = None) -> CMatrix:
    """
    Weighted geometric mean of accretive matrices by its integral representation.

    Args:
        A, B: accretive matrices of equal size
        v: weight in [0, 1]; within 1e-6 of an end the end operand is returned
        quad: quadrature controls (defaults: sinh scheme, h_s=0.25, eps_q=1e-12, s_max=60)

    Returns:
        A #_v B

    Raises:
        NotAccretiveError: an operand has Re not positive definite
        ConvergenceError: tail or step refinement hit its cap
    """
    _check_weight(v)
    A, B = _check_pair(A, B, accretive=True)
    quad = quad or DEFAULT_QUAD
    if v <= ENDPOINT_TOL:
        return A.copy()
    if v >= 1.0 - ENDPOINT_TOL:
        return B.copy()

    Ai = inverse(A)
    Bi = inverse(B)
    prefactor = math.sin(v * math.pi) / math.pi

    step = quad.h_s
    previous = prefactor * _trapezoid(Ai, Bi, v, step, quad)
    for level in range(1, quad.max_halvings + 1):
        step *= 0.5
        current = prefactor * _trapezoid(Ai, Bi, v, step, quad)
        change = np.linalg.norm(current - previous) / max(np.linalg.norm(current), np.finfo(float).tiny)
        logger.debug(f"geometric mean v={v}: step={step:.4g} relative change={change:.3e}")
        if change < quad.rtol:
            return current
        previous = current

    raise ConvergenceError(
        f"quadrature did not settle to rtol={quad.rtol:g} after {quad.max_halvings} step halvings (v={v})"
    )


def mean(kind: MeanKind, A: CMatrix, B: CMatrix, v: float = 0.5,
         quad: Optional[QuadControls] = None) -> CMatrix:
    """Dispatch on the mean kind."""
    kind = MeanKind(kind)
    if kind is MeanKind.HARMONIC:
        return harmonic_mean(A, B, v)
    if kind is MeanKind.ARITHMETIC:
        return arithmetic_mean(A, B, v)
    return geometric_mean_accretive(A, B, v, quad)


def compute(spec: MeanSpec, A: CMatrix, B: CMatrix) -> CMatrix:
    return mean(spec.kind, A, B, spec.v, spec.quad)
