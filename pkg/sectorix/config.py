"""
Configuration for sectorix.

Environment variables are read through python-dotenv, sweep presets are YAML
files validated by pydantic models.
"""

import math
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError

load_dotenv()

PACKAGE_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_SEED = 20240717
DEFAULT_TOL = 1e-8

_PI_EXPR = re.compile(r"^\s*(?:(?P<num>[0-9.]+)\s*\*?\s*)?pi\s*(?:/\s*(?P<den>[0-9.]+))?\s*$")


def worker_count() -> int:
    """Sweep worker processes from SECTORIX_THREADS (0 or unset means one per CPU)."""
    raw = os.getenv("SECTORIX_THREADS", "0").strip() or "0"
    try:
        requested = int(raw)
    except ValueError as exc:
        raise ConfigError(f"SECTORIX_THREADS must be an integer, got {raw!r}") from exc
    if requested < 0:
        raise ConfigError("SECTORIX_THREADS must be >= 0")
    if requested == 0:
        return os.cpu_count() or 1
    return requested


def log_level() -> str:
    return os.getenv("SECTORIX_LOG_LEVEL", "INFO").upper()


def eigen_method() -> str:
    return os.getenv("SECTORIX_EIGEN", "lapack").strip().lower()


def catalogue_dir() -> Path:
    override = os.getenv("SECTORIX_CATALOGUE_DIR")
    if override:
        return Path(override)
    return PACKAGE_ROOT / "catalogue"


def presets_dir() -> Path:
    return PACKAGE_ROOT / "config"


def parse_angle(value: Union[str, float, int]) -> float:
    """Accept plain numbers or expressions such as 'pi/6', '2pi/5'."""
    if isinstance(value, (int, float)):
        return float(value)
    match = _PI_EXPR.match(value)
    if match:
        num = float(match.group("num") or 1.0)
        den = float(match.group("den") or 1.0)
        return num * math.pi / den
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"cannot parse angle {value!r}") from exc


def parse_int_range(value: Union[str, int, List[int]]) -> List[int]:
    """'2..6' -> [2, 3, 4, 5, 6]; '2,4' -> [2, 4]; 3 -> [3]."""
    if isinstance(value, int):
        return [value]
    if isinstance(value, list):
        return [int(v) for v in value]
    text = value.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo_i, hi_i = int(lo), int(hi)
        if hi_i < lo_i:
            raise ConfigError(f"empty range {value!r}")
        return list(range(lo_i, hi_i + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


class SweepConfig(BaseModel):
    """Everything a sweep needs; identical configs give byte-identical reports."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    ids: List[str] = Field(default_factory=lambda: ["all"])
    n_values: List[int] = Field(default_factory=lambda: [2, 3, 4, 5, 6])
    alphas: List[float] = Field(default_factory=lambda: [0.0, math.pi / 6, math.pi / 4, math.pi / 3])
    v_grid: List[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    k_policy: Literal["all", "max"] = "all"
    r_grid: List[float] = Field(default_factory=lambda: [1.0, 1.5, 2.0])
    p_grid: List[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0, 3.0])
    concave: List[str] = Field(default_factory=lambda: ["t", "sqrt", "t/(1+t)", "log1p"])
    trials: int = 500
    seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL
    cond_x: float = 10.0
    nominal_alpha: bool = False
    linear_map_kinds: List[str] = Field(default_factory=lambda: ["compression", "kraus", "trace"])
    multilinear_map_kind: str = "tensor_compression"
    arities: List[int] = Field(default_factory=lambda: [1, 2, 3])
    map_out_dim: Optional[int] = None
    max_tensor_dim: int = 64
    workers: Optional[int] = None

    @field_validator("ids", "linear_map_kinds", "concave", mode="before")
    @classmethod
    def _coerce_list(cls, value: Any) -> Any:
        return _split_list(value)

    @field_validator("n_values", "arities", mode="before")
    @classmethod
    def _coerce_ints(cls, value: Any) -> Any:
        return parse_int_range(value)

    @field_validator("alphas", mode="before")
    @classmethod
    def _coerce_angles(cls, value: Any) -> Any:
        return [parse_angle(v) for v in _split_list(value)]

    @field_validator("v_grid", "r_grid", "p_grid", mode="before")
    @classmethod
    def _coerce_floats(cls, value: Any) -> Any:
        return [float(v) for v in _split_list(value)]

    @field_validator("trials")
    @classmethod
    def _positive_trials(cls, value: int) -> int:
        if value < 1:
            raise ValueError("trials must be >= 1")
        return value

    @field_validator("tol")
    @classmethod
    def _positive_tol(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("tol must be > 0")
        return value

    @field_validator("alphas")
    @classmethod
    def _alpha_range(cls, value: List[float]) -> List[float]:
        for alpha in value:
            if not 0.0 <= alpha < math.pi / 2:
                raise ValueError(f"alpha {alpha} outside [0, pi/2)")
        return value

    @field_validator("v_grid")
    @classmethod
    def _v_range(cls, value: List[float]) -> List[float]:
        for v in value:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"v {v} outside [0, 1]")
        return value

    @field_validator("n_values")
    @classmethod
    def _n_range(cls, value: List[int]) -> List[int]:
        if not value or min(value) < 1:
            raise ValueError("n values must be positive")
        return value

    @field_validator("cond_x")
    @classmethod
    def _cond_range(cls, value: float) -> float:
        if value < 1.0:
            raise ValueError("cond_x must be >= 1")
        return value


def load_sweep_config(path: Optional[Union[str, Path]] = None,
                      overrides: Optional[Dict[str, Any]] = None) -> SweepConfig:
    """Load a YAML preset (by path or by preset name) and apply overrides."""
    data: Dict[str, Any] = {}
    if path is not None:
        preset = Path(path)
        if not preset.exists():
            preset = presets_dir() / f"{path}.yaml"
        if not preset.exists():
            raise ConfigError(f"sweep config {path} not found")
        with open(preset, "r") as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{preset}: top level must be a mapping")
        data.update(loaded)
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    try:
        return SweepConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(p) for p in first.get("loc", ()))
        raise ConfigError(f"invalid sweep config field '{field}': {first.get('msg')}") from exc
