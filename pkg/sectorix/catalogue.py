"""
Inequality catalogue metadata.

Each catalogue/*.yaml file lists entries with the fields below. The predicates
themselves are registered in sectorix.checks; verify_registry() cross-checks
the two so that every entry has an implementation and vice versa.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union, get_args

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .config import catalogue_dir
from .errors import ConfigError, UnknownCheckError

logger = logging.getLogger(__name__)

Family = Literal[
    "any_pair",
    "psd_pair",
    "any_single",
    "sector_single",
    "sector_pair",
    "hpd_ordered",
    "accretive_tuple",
    "hpd_tuple",
    "scalar",
]

# order is part of the sweep seed; append new families at the end
FAMILIES = get_args(Family)


class CatalogueEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str
    title: str
    statement: str
    form: Literal["loewner", "scalar", "spectrum", "iff"]
    family: Family
    hypotheses: List[str] = Field(default_factory=list)
    axes: List[Literal["k", "r", "v", "f", "p", "arity"]] = Field(default_factory=list)
    links: List[str] = Field(default_factory=list)
    conjectural: Union[bool, Literal["partial"]] = False
    section: Optional[str] = None

    def result_ids(self) -> List[str]:
        """Identifiers the evaluation emits (one per chain link)."""
        if not self.links:
            return [self.id]
        return [f"{self.id}.{i}" for i in range(1, len(self.links) + 1)]


def _load_file(path: Path) -> List[CatalogueEntry]:
    with open(path, "r") as f:
        raw = yaml.safe_load(f) or {}
    if not isinstance(raw, dict) or "entries" not in raw:
        raise ConfigError(f"{path}: catalogue file needs a top-level 'entries' list")
    section = raw.get("section", path.stem)
    entries = []
    for position, item in enumerate(raw["entries"]):
        if not isinstance(item, dict):
            raise ConfigError(f"{path}: entry {position} is not a mapping")
        item = dict(item)
        item.setdefault("section", section)
        try:
            entries.append(CatalogueEntry.model_validate(item))
        except ValidationError as exc:
            first = exc.errors()[0]
            field = ".".join(str(p) for p in first.get("loc", ()))
            raise ConfigError(f"{path}: entry {item.get('id', position)} field '{field}': {first.get('msg')}") from exc
    return entries


@lru_cache(maxsize=4)
def _load(directory: str) -> Dict[str, CatalogueEntry]:
    folder = Path(directory)
    files = sorted(folder.glob("*.yaml"))
    if not files:
        raise ConfigError(f"no catalogue files found in {folder}")
    catalogue: Dict[str, CatalogueEntry] = {}
    for path in files:
        for entry in _load_file(path):
            if entry.id in catalogue:
                raise ConfigError(f"{path}: duplicate catalogue id {entry.id}")
            catalogue[entry.id] = entry
    logger.debug(f"Loaded {len(catalogue)} catalogue entries from {folder}")
    return catalogue


def load_catalogue(directory: Optional[Path] = None) -> Dict[str, CatalogueEntry]:
    """All entries keyed by id, in file order."""
    return _load(str(directory or catalogue_dir()))


def get_entry(check_id: str) -> CatalogueEntry:
    catalogue = load_catalogue()
    if check_id not in catalogue:
        raise UnknownCheckError(f"unknown check id {check_id!r}")
    return catalogue[check_id]


def resolve_ids(ids: List[str]) -> List[str]:
    """Expand 'all' and validate explicit ids; keeps catalogue order."""
    catalogue = load_catalogue()
    if not ids or "all" in ids:
        return list(catalogue)
    unknown = [i for i in ids if i not in catalogue]
    if unknown:
        raise UnknownCheckError(f"unknown check id(s): {', '.join(unknown)}")
    wanted = set(ids)
    return [i for i in catalogue if i in wanted]


def verify_registry(registered: List[str]) -> None:
    """Every catalogue entry has a predicate and every predicate has an entry."""
    catalogue = load_catalogue()
    missing = sorted(set(catalogue) - set(registered))
    extra = sorted(set(registered) - set(catalogue))
    if missing or extra:
        raise ConfigError(
            f"catalogue and predicates disagree (no predicate: {missing or '-'}; no catalogue entry: {extra or '-'})"
        )
