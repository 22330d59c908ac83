"""
Positive linear and multilinear maps built from isometries.

All families are completely positive and unital by construction:
compression V*AV, Kraus sums sum_i V_i* A V_i, the normalized trace map and
tensor compressions V*(A_1 (x) ... (x) A_k)V.
"""

import json
import logging
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .cmat import CMatrix, as_cmatrix, identity, symmetrize
from .errors import ConfigError, MapSpecError
from .sector import ginibre

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-10
DEFAULT_KRAUS_BLOCKS = 3


class MapKind(str, Enum):
    COMPRESSION = "compression"
    KRAUS = "kraus"
    TRACE = "trace"
    TENSOR_COMPRESSION = "tensor_compression"


@dataclass(frozen=True)
class MapSpec:
    """
    A positive (multi)linear map M_n^k -> M_l.

    blocks holds the isometry data: one n x l block (compression), r blocks of
    n x l (kraus), one n^k x l block (tensor_compression), nothing (trace).
    """
    kind: MapKind
    n: int
    l: int
    k: int
    blocks: Tuple[np.ndarray, ...]
    normalized: bool = True
    seed: Optional[int] = None

    @property
    def arity(self) -> int:
        return self.k


class MapDescriptor(BaseModel):
    """JSON form of a map; isometries are regenerated from the seed."""

    model_config = ConfigDict(extra="forbid")

    kind: MapKind
    n: int = Field(ge=1)
    l: int = Field(ge=1)
    k: int = Field(default=1, ge=1)
    seed: int = 0
    num_kraus: int = Field(default=DEFAULT_KRAUS_BLOCKS, ge=1)

    def build(self) -> MapSpec:
        return gen_map(self.kind, self.n, self.l, self.k, self.seed, self.num_kraus)


def _isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """rows x cols matrix with orthonormal columns, from QR of a Ginibre sample."""
    G = ginibre(max(rows, cols), rng)[:rows, :cols]
    Q, R = np.linalg.qr(G)
    L = np.diagonal(R)
    return Q * (L / np.abs(L))


def gen_map(kind: Union[MapKind, str], n: int, l: int, k: int = 1,
            seed: Union[int, np.random.Generator, None] = None,
            num_kraus: int = DEFAULT_KRAUS_BLOCKS) -> MapSpec:
    """
    Random unital map of the given family.

    Raises:
        MapSpecError: arity or output dimension impossible for the family
    """
    try:
        kind = MapKind(kind)
    except ValueError as exc:
        raise MapSpecError(f"unknown map kind {kind!r}") from exc
    if n < 1 or l < 1 or k < 1:
        raise MapSpecError(f"dimensions must be positive (n={n}, l={l}, k={k})")
    if k != 1 and kind is not MapKind.TENSOR_COMPRESSION:
        raise MapSpecError(f"{kind.value} maps are linear; arity {k} needs tensor_compression")

    rng = np.random.default_rng(seed)
    seed_value = seed if isinstance(seed, int) else None

    if kind is MapKind.COMPRESSION:
        if l > n:
            raise MapSpecError(f"compression needs l <= n (l={l}, n={n})")
        blocks = (_isometry(n, l, rng),)
    elif kind is MapKind.KRAUS:
        if l > num_kraus * n:
            raise MapSpecError(f"kraus family of {num_kraus} blocks needs l <= {num_kraus * n}")
        W = _isometry(num_kraus * n, l, rng)
        blocks = tuple(W[i * n:(i + 1) * n, :] for i in range(num_kraus))
    elif kind is MapKind.TENSOR_COMPRESSION:
        if l > n ** k:
            raise MapSpecError(f"tensor compression needs l <= n^k = {n ** k} (l={l})")
        blocks = (_isometry(n ** k, l, rng),)
    else:
        blocks = ()

    return MapSpec(kind=kind, n=n, l=l, k=k, blocks=blocks, normalized=True, seed=seed_value)


def identity_map(n: int) -> MapSpec:
    """Compression by V = I_n."""
    return MapSpec(kind=MapKind.COMPRESSION, n=n, l=n, k=1, blocks=(identity(n),), normalized=True)


def apply(phi: MapSpec, args: Sequence[CMatrix]) -> CMatrix:
    """Evaluate phi(A_1, ..., A_k)."""
    if len(args) != phi.k:
        raise MapSpecError(f"map has arity {phi.k}, got {len(args)} arguments")
    mats = [as_cmatrix(A) for A in args]
    for A in mats:
        if A.shape != (phi.n, phi.n):
            raise MapSpecError(f"map acts on {phi.n}x{phi.n} matrices, got {A.shape}")

    if phi.kind is MapKind.TRACE:
        return (np.trace(mats[0]) / phi.n) * identity(phi.l)
    if phi.kind is MapKind.KRAUS:
        A = mats[0]
        return sum(V.conj().T @ A @ V for V in phi.blocks)
    if phi.kind is MapKind.TENSOR_COMPRESSION:
        V = phi.blocks[0]
        big = reduce(np.kron, mats)
        return V.conj().T @ big @ V
    V = phi.blocks[0]
    return V.conj().T @ mats[0] @ V


def apply_hermitian(phi: MapSpec, args: Sequence[CMatrix]) -> CMatrix:
    """apply() followed by symmetrization, for Hermitian arguments."""
    return symmetrize(apply(phi, args))


def normalization_defect(phi: MapSpec) -> float:
    """|| phi(I, ..., I) - I_l ||."""
    out = apply(phi, [identity(phi.n)] * phi.k)
    return float(np.linalg.norm(out - identity(phi.l), 2))


def require_normalized(phi: MapSpec, tol: float = NORMALIZATION_TOL) -> None:
    if not phi.normalized or normalization_defect(phi) > tol:
        raise MapSpecError(f"{phi.kind.value} map is not normalized (phi(I) != I)")


def read_map(path: Union[str, Path]) -> MapSpec:
    path = Path(path)
    try:
        with open(path, "r") as f:
            payload = json.load(f)
    except FileNotFoundError as exc:
        raise ConfigError(f"{path}: file not found") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from exc
    try:
        descriptor = MapDescriptor.model_validate(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(p) for p in first.get("loc", ()))
        raise ConfigError(f"{path}: invalid map field '{field}': {first.get('msg')}") from exc
    return descriptor.build()
