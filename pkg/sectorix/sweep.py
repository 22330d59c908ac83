"""
Property sweeps over the inequality catalogue.

A sweep is split into work units (n, alpha index, trial). Every unit draws its
instances from a SeedSequence keyed by (seed, n, alpha index, trial, family,
arity), so the drawn matrices do not depend on which ids were requested, on
the worker count or on scheduling order. Results are reduced in unit order.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from .catalogue import FAMILIES, CatalogueEntry, load_catalogue, resolve_ids
from .checks import CheckResult, evaluate
from .config import SweepConfig, worker_count
from .errors import SectorixError
from .instances import Instance, build_instance

logger = logging.getLogger(__name__)

# families whose instances do not depend on the sector angle
ALPHA_FREE = ("any_pair", "psd_pair", "any_single", "hpd_ordered", "hpd_tuple")
MAX_FINDINGS_PER_ID = 20


@dataclass
class IdStats:
    """Aggregate of one result id across a sweep."""
    id: str
    section: str
    conjectural: bool
    trials: int = 0
    passes: int = 0
    vacuous: int = 0
    failures: int = 0
    findings: int = 0
    min_slack: Optional[float] = None
    worst_seed: Optional[str] = None

    def add(self, result: CheckResult) -> None:
        self.trials += 1
        if result.status == "vacuous":
            self.vacuous += 1
            return
        if result.status == "pass":
            self.passes += 1
        elif result.status == "finding":
            self.findings += 1
        else:
            self.failures += 1
        if self.min_slack is None or result.slack < self.min_slack:
            self.min_slack = result.slack
            self.worst_seed = result.witness

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "section": self.section,
            "conjectural": self.conjectural,
            "trials": self.trials,
            "passes": self.passes,
            "vacuous": self.vacuous,
            "failures": self.failures,
            "findings": self.findings,
            "min_slack": self.min_slack,
            "worst_seed": self.worst_seed,
        }


@dataclass
class Report:
    config: SweepConfig
    results: List[IdStats]
    failures: List[Dict[str, Any]] = field(default_factory=list)
    findings: List[Dict[str, Any]] = field(default_factory=list)
    errors: List[Dict[str, Any]] = field(default_factory=list)
    counterexamples: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def has_failures(self) -> bool:
        return bool(self.failures) or any(not c["violated"] for c in self.counterexamples)


def witness_of(seed: int, n: int, alpha_idx: int, trial: int) -> str:
    return f"{seed}:{n}:{alpha_idx}:{trial}"


def parse_witness(witness: str) -> Tuple[int, int, int, int]:
    seed, n, alpha_idx, trial = (int(part) for part in witness.split(":"))
    return seed, n, alpha_idx, trial


def instance_rng(seed: int, n: int, alpha_idx: int, trial: int, family: str, arity: int) -> np.random.Generator:
    sequence = np.random.SeedSequence([seed, n, alpha_idx, trial, FAMILIES.index(family), arity])
    return np.random.default_rng(sequence)


def parameter_grid(entry: CatalogueEntry, n: int, config: SweepConfig) -> List[Dict[str, Any]]:
    """Cartesian product of the entry's parameter axes (arity is handled per instance)."""
    axes: List[Tuple[str, List[Any]]] = []
    for axis in entry.axes:
        if axis == "k":
            axes.append(("k", [n] if config.k_policy == "max" else list(range(1, n + 1))))
        elif axis == "v":
            axes.append(("v", list(config.v_grid)))
        elif axis == "r":
            axes.append(("r", list(config.r_grid)))
        elif axis == "p":
            axes.append(("p", list(config.p_grid)))
        elif axis == "f":
            axes.append(("f", list(config.concave)))
    names = [name for name, _ in axes]
    return [dict(zip(names, values)) for values in itertools.product(*(vals for _, vals in axes))]


def _arities(entry: CatalogueEntry, n: int, config: SweepConfig) -> List[int]:
    if "arity" not in entry.axes:
        return [1]
    return [k for k in config.arities if n ** k <= config.max_tensor_dim]


def _error_record(check_id: str, witness: str, params: Dict[str, Any], exc: Exception) -> Dict[str, Any]:
    return {"id": check_id, "witness": witness, "params": params, "error": f"{type(exc).__name__}: {exc}"}


def run_unit(config: SweepConfig, check_ids: List[str], n: int, alpha_idx: int,
             trial: int) -> Tuple[List[CheckResult], List[Dict[str, Any]]]:
    """Evaluate the requested ids on the instances of one work unit."""
    catalogue = load_catalogue()
    alpha = config.alphas[alpha_idx]
    witness = witness_of(config.seed, n, alpha_idx, trial)
    instances: Dict[Tuple[str, int], Optional[Instance]] = {}
    results: List[CheckResult] = []
    errors: List[Dict[str, Any]] = []

    for check_id in check_ids:
        entry = catalogue[check_id]
        if entry.family in ALPHA_FREE and alpha_idx > 0:
            continue
        for arity in _arities(entry, n, config):
            key = (entry.family, arity)
            if key not in instances:
                rng = instance_rng(config.seed, n, alpha_idx, trial, entry.family, arity)
                try:
                    instances[key] = build_instance(entry.family, n, alpha, rng, config, trial=trial,
                                                    witness=witness, arity=arity)
                except (SectorixError, np.linalg.LinAlgError) as exc:
                    instances[key] = None
                    errors.append(_error_record(check_id, witness, {"arity": arity}, exc))
            inst = instances[key]
            if inst is None:
                continue
            for params in parameter_grid(entry, n, config):
                if "arity" in entry.axes:
                    params["arity"] = arity
                try:
                    results.extend(evaluate(check_id, inst, params, config.tol))
                except (SectorixError, np.linalg.LinAlgError) as exc:
                    errors.append(_error_record(check_id, witness, params, exc))
    return results, errors


def _units(config: SweepConfig) -> Iterator[Tuple[int, int, int]]:
    for n in config.n_values:
        for alpha_idx in range(len(config.alphas)):
            for trial in range(config.trials):
                yield n, alpha_idx, trial


def _run_unit_args(args: Tuple[SweepConfig, List[str], int, int, int]):
    return run_unit(*args)


def sweep(config: SweepConfig) -> Report:
    """
    Run a sweep and aggregate per result id.

    Args:
        config: validated sweep configuration

    Returns:
        Report with per-id statistics, failures (met hypotheses, slack below -tol),
        findings (conjectural entries only) and per-instance numerical errors
    """
    check_ids = resolve_ids(config.ids)
    catalogue = load_catalogue()
    workers = config.workers or worker_count()
    units = list(_units(config))
    logger.info(f"Sweep: {len(check_ids)} ids, {len(units)} work units, {workers} worker(s)")

    stats: Dict[str, IdStats] = {}
    for check_id in check_ids:
        entry = catalogue[check_id]
        for rid in entry.result_ids():
            stats[rid] = IdStats(id=rid, section=entry.section or "", conjectural=entry.conjectural is True)

    report = Report(config=config, results=list(stats.values()))
    tasks = [(config, check_ids, n, alpha_idx, trial) for n, alpha_idx, trial in units]
    if workers > 1 and len(tasks) > 1:
        chunk = max(1, math.ceil(len(tasks) / (4 * workers)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = pool.map(_run_unit_args, tasks, chunksize=chunk)
            _reduce(report, stats, outcomes)
    else:
        _reduce(report, stats, map(_run_unit_args, tasks))

    for item in report.results:
        if item.findings and not item.conjectural:
            item.conjectural = True
    logger.info(
        f"Sweep done: {len(report.failures)} failure(s), {len(report.findings)} finding(s) recorded, "
        f"{len(report.errors)} error(s)"
    )
    return report


def _reduce(report: Report, stats: Dict[str, IdStats], outcomes) -> None:
    findings_per_id: Dict[str, int] = {}
    for results, errors in outcomes:
        for result in results:
            stats[result.id].add(result)
            if result.status == "fail":
                logger.error(f"{result.id} violated at {result.witness} (slack {result.slack:.3e})")
                report.failures.append(result.to_dict())
            elif result.status == "finding":
                count = findings_per_id.get(result.id, 0)
                if count < MAX_FINDINGS_PER_ID:
                    report.findings.append(result.to_dict())
                    if count == 0:
                        logger.warning(f"conjectural {result.id} fails at {result.witness} (slack {result.slack:.3e})")
                findings_per_id[result.id] = count + 1
        for error in errors:
            logger.warning(f"{error['id']} errored at {error['witness']}: {error['error']}")
            report.errors.append(error)


def replay(witness: str, check_id: str, config: SweepConfig) -> List[CheckResult]:
    """Re-run one id on the instance behind a witness string."""
    seed, n, alpha_idx, trial = parse_witness(witness)
    replay_config = config.model_copy(update={"seed": seed})
    results, errors = run_unit(replay_config, [check_id], n, alpha_idx, trial)
    if errors:
        raise SectorixError(errors[0]["error"])
    return results
