"""
Instances for catalogue checks.

An Instance bundles the operand matrices, an optional positive map, the
sector angle the checks use and the joint real-part bounds m, M. Derived
matrices (real parts, inverses, means) are computed once and cached, since
many checks of one sweep trial share them.
"""

import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .cmat import (
    CMatrix,
    as_cmatrix,
    inverse,
    re_part,
    symmetrize,
)
from .config import SweepConfig
from .errors import ConfigError
from .means import (
    QuadControls,
    arithmetic_mean,
    geometric_mean_accretive,
    geometric_mean_hpd,
    harmonic_mean,
)
from .posmap import MapSpec, apply_hermitian, gen_map
from .sector import (
    ginibre,
    hpd_sample,
    is_accretive,
    joint_bounds,
    sector_angle,
    sector_sample,
)

logger = logging.getLogger(__name__)

PSD_RANGE = (0.1, 10.0)


class Instance:
    """Operands of one check evaluation plus cached derived quantities."""

    def __init__(self, family: str, mats: Sequence[CMatrix], alpha: Optional[float] = None,
                 phi: Optional[MapSpec] = None, witness: str = "",
                 angles: Optional[List[Optional[float]]] = None,
                 quad: Optional[QuadControls] = None):
        self.family = family
        self.mats = [as_cmatrix(A) for A in mats]
        self.phi = phi
        self.witness = witness
        self.quad = quad
        self.angles = angles if angles is not None else [_angle_or_none(A) for A in self.mats]
        if alpha is None and all(a is not None for a in self.angles):
            alpha = max(self.angles)
        self.alpha = alpha
        self._cache: Dict[Any, Any] = {}

        self.m, self.M = joint_bounds([self.re(i) for i in range(len(self.mats))])

    @classmethod
    def from_matrices(cls, mats: Sequence[CMatrix], phi: Optional[MapSpec] = None,
                      alpha: Optional[float] = None, witness: str = "input") -> "Instance":
        return cls("input", mats, alpha=alpha, phi=phi, witness=witness)

    def with_alpha(self, alpha: float) -> "Instance":
        """Same operands, checks evaluated at a different (larger) angle."""
        return Instance(self.family, self.mats, alpha=alpha, phi=self.phi,
                        witness=self.witness, angles=self.angles, quad=self.quad)

    # -- basic accessors --------------------------------------------------

    @property
    def n(self) -> int:
        return self.mats[0].shape[0]

    @property
    def A(self) -> np.ndarray:
        return self.mats[0]

    @property
    def B(self) -> np.ndarray:
        return self.mats[1]

    @property
    def h(self) -> float:
        return self.M / self.m if self.m > 0 else math.inf

    def sec2(self) -> float:
        return 1.0 / math.cos(self.alpha) ** 2

    def _cached(self, key: Any, compute: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    # -- derived matrices -------------------------------------------------

    def re(self, i: int = 0) -> np.ndarray:
        return self._cached(("re", i), lambda: re_part(self.mats[i]))

    def inv(self, i: int = 0) -> np.ndarray:
        return self._cached(("inv", i), lambda: inverse(self.mats[i]))

    def re_inv(self, i: int = 0) -> np.ndarray:
        """Re(A_i^-1)."""
        return self._cached(("re_inv", i), lambda: re_part(self.inv(i)))

    def inv_re(self, i: int = 0) -> np.ndarray:
        """(Re A_i)^-1."""
        return self._cached(("inv_re", i), lambda: symmetrize(inverse(self.re(i))))

    def gmean(self, v: float) -> np.ndarray:
        """A #_v B by the integral representation."""
        return self._cached(("gmean", v), lambda: geometric_mean_accretive(self.A, self.B, v, self.quad))

    def re_gmean(self, v: float) -> np.ndarray:
        """Re A #_v Re B (closed form for positive definite operands)."""
        return self._cached(("re_gmean", v), lambda: geometric_mean_hpd(self.re(0), self.re(1), v))

    def hmean(self, v: float) -> np.ndarray:
        return self._cached(("hmean", v), lambda: harmonic_mean(self.A, self.B, v))

    def amean(self, v: float) -> np.ndarray:
        return self._cached(("amean", v), lambda: arithmetic_mean(self.A, self.B, v))

    def map_of(self, key: str, args: Sequence[CMatrix]) -> np.ndarray:
        """phi(args), cached under key."""
        if self.phi is None:
            raise ConfigError("instance has no positive map")
        return self._cached(("map", key), lambda: apply_hermitian(self.phi, args))


def _angle_or_none(A: CMatrix) -> Optional[float]:
    if not is_accretive(A).holds:
        return None
    return sector_angle(A)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _random_bounds(rng: np.random.Generator):
    lo, hi = PSD_RANGE
    m = float(10 ** rng.uniform(math.log10(lo), 0.0))
    M = float(10 ** rng.uniform(0.0, math.log10(hi)))
    return m, M


def _linear_map(n: int, trial: int, rng: np.random.Generator, config: SweepConfig) -> MapSpec:
    kinds = config.linear_map_kinds
    kind = kinds[trial % len(kinds)]
    if kind == "trace":
        l = config.map_out_dim or n
    else:
        l = min(config.map_out_dim, n) if config.map_out_dim else int(rng.integers(1, n + 1))
    return gen_map(kind, n, l, 1, rng)


def _multilinear_map(n: int, arity: int, rng: np.random.Generator, config: SweepConfig) -> MapSpec:
    top = min(n ** arity, config.max_tensor_dim)
    l = min(config.map_out_dim, top) if config.map_out_dim else int(rng.integers(1, top + 1))
    if config.multilinear_map_kind == "tensor_compression" or arity > 1:
        return gen_map("tensor_compression", n, l, arity, rng)
    return gen_map(config.multilinear_map_kind, n, min(l, n), 1, rng)


def build_instance(family: str, n: int, alpha: float, rng: np.random.Generator,
                   config: SweepConfig, trial: int = 0, witness: str = "",
                   arity: int = 1, quad: Optional[QuadControls] = None) -> Instance:
    """
    Draw an instance of the given family.

    Sector families use the certified minimal angle of the drawn operands
    unless config.nominal_alpha is set.
    """
    nominal = alpha if config.nominal_alpha else None

    if family in ("any_pair", "any_single"):
        count = 2 if family == "any_pair" else 1
        scale = 1.0 / math.sqrt(n) if family == "any_pair" else 1.0
        mats = [scale * ginibre(n, rng) for _ in range(count)]
        return Instance(family, mats, alpha=None, witness=witness, angles=[None] * count, quad=quad)

    if family == "psd_pair":
        m, M = _random_bounds(rng)
        mats = [hpd_sample(n, m, M, rng) for _ in range(2)]
        return Instance(family, mats, alpha=0.0, witness=witness, angles=[0.0, 0.0], quad=quad)

    if family == "hpd_ordered":
        m, M = _random_bounds(rng)
        A = hpd_sample(n, m, M, rng)
        G = ginibre(n, rng)
        B = symmetrize(A + G @ G.conj().T / n)
        return Instance(family, [A, B], alpha=0.0, witness=witness, angles=[0.0, 0.0], quad=quad)

    if family == "hpd_tuple":
        m, M = _random_bounds(rng)
        mats = [hpd_sample(n, m, M, rng) for _ in range(arity)]
        phi = _multilinear_map(n, arity, rng, config)
        return Instance(family, mats, alpha=0.0, phi=phi, witness=witness, angles=[0.0] * arity, quad=quad)

    if family in ("sector_single", "sector_pair", "scalar", "accretive_tuple"):
        count = {"sector_single": 1, "sector_pair": 2, "scalar": 2}.get(family, arity)
        certs = [sector_sample(n, alpha, config.cond_x, True, rng) for _ in range(count)]
        angles = [c.alpha for c in certs]
        phi = None
        if family == "sector_single":
            phi = _linear_map(n, trial, rng, config)
        elif family == "accretive_tuple":
            phi = _multilinear_map(n, arity, rng, config)
        chosen = nominal if nominal is not None else max(angles)
        return Instance(family, [c.A for c in certs], alpha=chosen, phi=phi,
                        witness=witness, angles=angles, quad=quad)

    raise ConfigError(f"unknown instance family {family!r}")
