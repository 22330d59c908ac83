"""
Catalogue predicates.

Every inequality is written as lhs <= rhs and reported with a signed slack:

    Loewner form:  lambda_min(rhs - lhs) / max(1, ||rhs||)
    scalar form:   (rhs - lhs) / max(1, |rhs|)

A result holds when slack >= -tol. Hypotheses are verified before the
predicate runs; an instance that violates them yields a vacuous result.
Chains report one result per link, with ids such as "R7.1".
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .catalogue import get_entry, verify_registry
from .cmat import (
    abs_power,
    det,
    eigvals_desc,
    hpd_power,
    identity,
    inverse,
    is_psd,
    lambda_max,
    lambda_min,
    loewner_leq,
    op_norm,
    psd_function,
    re_part,
    singular_values,
    symmetrize,
)
from .config import DEFAULT_TOL
from .errors import ConfigError, SectorixError, UnknownCheckError
from .instances import Instance
from .means import harmonic_mean, kantorovich, kappa, scalar_means
from .posmap import normalization_defect

logger = logging.getLogger(__name__)

IFF_DELTA = 1e-6
SECTOR_TOL = 1e-8

Number = Union[float, List[float], None]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one inequality (or one chain link) on one instance."""
    id: str
    hypotheses_met: bool
    reason: str
    lhs: Number
    rhs: Number
    slack: Optional[float]
    holds: Optional[bool]
    params: Dict[str, Any] = field(default_factory=dict)
    witness: str = ""
    conjectural: bool = False
    status: str = "vacuous"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class Link(NamedTuple):
    lhs: Number
    rhs: Number
    slack: float
    conjectural: bool = False


class Vacuous(Exception):
    """Raised by a predicate when its parameter-level hypothesis fails."""


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

Predicate = Callable[[Instance, Dict[str, Any]], List[Link]]
_REGISTRY: Dict[str, Predicate] = {}


def register(check_id: str):
    def wrap(fn: Predicate) -> Predicate:
        if check_id in _REGISTRY:
            raise ConfigError(f"predicate {check_id} registered twice")
        _REGISTRY[check_id] = fn
        return fn
    return wrap


def registered_ids() -> List[str]:
    return list(_REGISTRY)


# ---------------------------------------------------------------------------
# Slack helpers
# ---------------------------------------------------------------------------

def scalar_link(lhs: float, rhs: float, conjectural: bool = False) -> Link:
    lhs, rhs = float(lhs), float(rhs)
    return Link(lhs, rhs, (rhs - lhs) / max(1.0, abs(rhs)), conjectural)


def loewner_link(lhs: np.ndarray, rhs: np.ndarray, conjectural: bool = False) -> Link:
    scale = op_norm(rhs)
    margin = lambda_min(symmetrize(rhs - lhs))
    return Link(op_norm(lhs), scale, margin / max(1.0, scale), conjectural)


def spectrum_link(lhs: Sequence[float], rhs: Sequence[float]) -> Link:
    lhs = [float(x) for x in lhs]
    rhs = [float(x) for x in rhs]
    slack = min((r - l) / max(1.0, abs(r)) for l, r in zip(lhs, rhs))
    return Link(lhs, rhs, slack)


def iff_link(margins: Sequence[float], r_star: float, r: float) -> Link:
    """All conditions agree -> slack 0; otherwise minus the largest margin magnitude."""
    verdicts = {m >= 0.0 for m in margins}
    slack = 0.0 if len(verdicts) == 1 else -max(abs(m) for m in margins)
    return Link(float(r_star), float(r), slack)


def _sv(X: np.ndarray) -> np.ndarray:
    return singular_values(X).values


def _prod(values: np.ndarray, k: int) -> float:
    return float(np.prod(values[:k]))


def _k(inst: Instance, params: Dict[str, Any]) -> int:
    k = int(params.get("k", inst.n))
    if not 1 <= k <= inst.n:
        raise Vacuous(f"k={k} outside 1..{inst.n}")
    return k


def _v(params: Dict[str, Any]) -> float:
    v = float(params.get("v", 0.5))
    if not 0.0 <= v <= 1.0:
        raise Vacuous(f"v={v} outside [0, 1]")
    return v


def _absdet(X: np.ndarray) -> float:
    return abs(det(X))


def _redet(X: np.ndarray) -> float:
    return det(X).real


def _sq(X: np.ndarray) -> np.ndarray:
    return symmetrize(X @ X)


# ---------------------------------------------------------------------------
# Concave functions
# ---------------------------------------------------------------------------

_CONCAVE: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "t": lambda x: x,
    "sqrt": np.sqrt,
    "t/(1+t)": lambda x: x / (1.0 + x),
    "log1p": np.log1p,
}


def concave_catalogue(name: str) -> Callable[[np.ndarray], np.ndarray]:
    """Scalar operator concave function on [0, inf), applied to spectra."""
    if name not in _CONCAVE:
        raise ConfigError(f"unknown concave function {name!r}; expected one of {list(_CONCAVE)}")
    return _CONCAVE[name]


def concave_of_modulus(X: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """f(|X|) through the spectrum of X*X."""
    return psd_function(symmetrize(X.conj().T @ X), lambda x: f(np.sqrt(x)))


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------

def _hermitian(X: np.ndarray) -> bool:
    return np.linalg.norm(X - X.conj().T) <= 1e-12 * X.shape[0] * max(1.0, np.linalg.norm(X))


def verify_hypotheses(inst: Instance, hypotheses: Sequence[str]) -> Tuple[bool, str]:
    """(met, reason) for the hypothesis tokens of a catalogue entry."""
    for token in hypotheses:
        if token in ("accretive", "sector", "sandwich"):
            for i, angle in enumerate(inst.angles):
                if angle is None:
                    return False, f"operand {i + 1} is not accretive"
        if token == "sector":
            if inst.alpha is None or not 0.0 <= inst.alpha < math.pi / 2:
                return False, "no sector angle in [0, pi/2)"
            worst = max(inst.angles)
            if worst > inst.alpha + SECTOR_TOL:
                return False, f"certified angle {worst:.3e} exceeds alpha {inst.alpha:.3e}"
        elif token == "psd":
            for i, X in enumerate(inst.mats):
                if not is_psd(X):
                    return False, f"operand {i + 1} is not positive semidefinite"
        elif token == "hpd":
            for i, X in enumerate(inst.mats):
                if not _hermitian(X) or lambda_min(X) <= 0.0:
                    return False, f"operand {i + 1} is not positive definite"
        elif token == "bounds":
            if not inst.m > 0.0:
                return False, "real parts are not bounded below by a positive m"
        elif token == "ordered":
            A, B = inst.A, inst.B
            if not (_hermitian(A) and _hermitian(B) and is_psd(A)):
                return False, "operands are not positive semidefinite"
            if not loewner_leq(A, B).holds:
                return False, "A <= B fails"
            if lambda_min(A) <= 0.0:
                return False, "A is not positive definite"
        elif token == "normalized":
            if inst.phi is None:
                return False, "no positive map supplied"
            if normalization_defect(inst.phi) > 1e-10:
                return False, "map is not normalized"
        elif token not in ("accretive", "sandwich"):
            raise ConfigError(f"unknown hypothesis token {token!r}")
    return True, ""


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _recorded_params(inst: Instance, params: Dict[str, Any]) -> Dict[str, Any]:
    recorded = dict(params)
    recorded["alpha"] = inst.alpha
    recorded["m"] = inst.m
    recorded["M"] = inst.M
    recorded["h"] = inst.h
    return recorded


def evaluate(check_id: str, inst: Instance, params: Optional[Dict[str, Any]] = None,
             tol: float = DEFAULT_TOL) -> List[CheckResult]:
    """
    Evaluate one catalogue entry on an instance.

    Returns one CheckResult per chain link (a single result for plain entries).

    Raises:
        UnknownCheckError: check_id is not in the catalogue
    """
    entry = get_entry(check_id)
    predicate = _REGISTRY.get(check_id)
    if predicate is None:
        raise UnknownCheckError(f"no predicate registered for {check_id}")
    params = dict(params or {})
    ids = entry.result_ids()

    met, reason = verify_hypotheses(inst, entry.hypotheses)
    links: List[Link] = []
    if met:
        try:
            links = predicate(inst, params)
        except Vacuous as exc:
            met, reason = False, str(exc)

    recorded = _recorded_params(inst, params)
    if not met:
        return [CheckResult(id=rid, hypotheses_met=False, reason=reason, lhs=None, rhs=None,
                            slack=None, holds=None, params=recorded, witness=inst.witness,
                            conjectural=entry.conjectural is True, status="vacuous")
                for rid in ids]

    if len(links) != len(ids):
        raise SectorixError(f"{check_id} produced {len(links)} links, catalogue lists {len(ids)}")

    results = []
    for rid, link in zip(ids, links):
        conjectural = entry.conjectural is True or link.conjectural
        holds = bool(link.slack >= -tol)
        status = "pass" if holds else ("finding" if conjectural else "fail")
        results.append(CheckResult(id=rid, hypotheses_met=True, reason="", lhs=link.lhs, rhs=link.rhs,
                                   slack=float(link.slack), holds=holds, params=recorded,
                                   witness=inst.witness, conjectural=conjectural, status=status))
    return results


def check_catalogue_consistency() -> None:
    verify_registry(registered_ids())


# ---------------------------------------------------------------------------
# Preliminaries
# ---------------------------------------------------------------------------

@register("GA1")
def _ga1(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    r = float(params.get("r", 1.0))
    if not 1.0 <= r <= 2.0:
        raise Vacuous(f"r={r} outside [1, 2]")
    A, B, I = inst.A, inst.B, identity(inst.n)
    lhs = _prod(_sv(abs_power(A + B, r)), k)
    rhs = _prod(_sv(I + abs_power(A, r)), k) * _prod(_sv(I + abs_power(B, r)), k)
    return [scalar_link(lhs, rhs)]


@register("GA2")
def _ga2(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    f = concave_catalogue(params.get("f", "t"))
    A, B, I = inst.A, inst.B, identity(inst.n)
    lhs = _prod(_sv(I + concave_of_modulus(A + B, f)), k)
    rhs = _prod(_sv(I + concave_of_modulus(A, f)), k) * _prod(_sv(I + concave_of_modulus(B, f)), k)
    return [scalar_link(lhs, rhs)]


@register("GA3")
def _ga3(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    A, B, I = inst.A, inst.B, identity(inst.n)
    return [scalar_link(_prod(_sv(A + B), k), _prod(_sv(I + A), k) * _prod(_sv(I + B), k))]


@register("GA4")
def _ga4(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    A, B, I = inst.A, inst.B, identity(inst.n)
    return [scalar_link(_prod(_sv(I + A + B), k), _prod(_sv(I + A), k) * _prod(_sv(I + B), k))]


@register("L11S")
def _l11s(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    return [spectrum_link(_sv(inst.re(0)), _sv(inst.A))]


@register("L11D")
def _l11d(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    return [scalar_link(_redet(inst.re(0)), _absdet(inst.A))]


@register("L12S")
def _l12s(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    return [spectrum_link(_sv(inst.A), inst.sec2() * _sv(inst.re(0)))]


@register("L12D")
def _l12d(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    sec_n = inst.sec2() ** (inst.n / 2.0)
    return [scalar_link(_absdet(inst.A), sec_n * _redet(inst.re(0)))]


@register("L13")
def _l13(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    return [
        loewner_link(inst.re_inv(0), inst.inv_re(0)),
        loewner_link(inst.inv_re(0), inst.sec2() * inst.re_inv(0)),
    ]


@register("BK1")
def _bk1(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    A, B = inst.A, inst.B
    return [scalar_link(op_norm(A @ B), 0.25 * op_norm(A + B) ** 2)]


@register("AZ2")
def _az2(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    r = float(params.get("r", 1.0))
    if r < 1.0:
        raise Vacuous(f"r={r} < 1")
    A, B = inst.A, inst.B
    lhs = op_norm(hpd_power(A, r) + hpd_power(B, r))
    rhs = op_norm(hpd_power(A + B, r))
    return [scalar_link(lhs, rhs)]


@register("BK3")
def _bk3(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    A, B = inst.A, inst.B
    B_mhalf = hpd_power(B, -0.5)
    r_star = lambda_max(symmetrize(B_mhalf @ A @ B_mhalf))
    norm_value = op_norm(hpd_power(A, 0.5) @ B_mhalf)
    links = []
    for r in (r_star * (1.0 + IFF_DELTA), r_star * (1.0 - IFF_DELTA)):
        loewner_margin = lambda_min(symmetrize(r * B - A)) / max(1.0, op_norm(r * B))
        norm_margin = (math.sqrt(r) - norm_value) / max(1.0, math.sqrt(r))
        links.append(iff_link([loewner_margin, norm_margin], r_star, r))
    return links


@register("LIN151")
def _lin151(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    X = inst.A
    n = inst.n
    r_star = op_norm(X)
    modulus = psd_function(symmetrize(X.conj().T @ X), np.sqrt)
    links = []
    for r in (r_star * (1.0 + IFF_DELTA), r_star * (1.0 - IFF_DELTA)):
        scale = max(1.0, r)
        block = np.block([[r * identity(n), X], [X.conj().T, r * identity(n)]])
        margins = [
            lambda_min(r * identity(n) - modulus) / scale,
            (r - r_star) / scale,
            lambda_min(symmetrize(block)) / scale,
        ]
        links.append(iff_link(margins, r_star, r))
    return links


# ---------------------------------------------------------------------------
# Sector pairs
# ---------------------------------------------------------------------------

@register("TXL")
def _txl(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    return [loewner_link(re_part(inst.hmean(v)) / inst.sec2(), re_part(inst.gmean(v)))]


@register("TXR")
def _txr(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    return [loewner_link(re_part(inst.gmean(v)), inst.sec2() * re_part(inst.amean(v)))]


def _inverse_sum_links(inst: Instance, constant: float) -> List[Link]:
    lhs = re_part(inverse(inst.A + inst.B))
    rhs = constant * re_part(inst.inv(0) + inst.inv(1))
    return [loewner_link(lhs, rhs)]


@register("REF9")
def _ref9(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    return _inverse_sum_links(inst, inst.sec2() ** 2 / 4.0)


@register("REF8")
def _ref8(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    return _inverse_sum_links(inst, inst.sec2() / 4.0)


@register("REF7")
def _ref7(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    lhs = re_part(inverse(inst.amean(v)))
    rhs = inst.sec2() * re_part((1.0 - v) * inst.inv(0) + v * inst.inv(1))
    return [loewner_link(lhs, rhs)]


@register("NF1")
def _nf1(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    return [loewner_link(re_part(inst.gmean(v)), inst.sec2() * inst.re_gmean(v))]


@register("NF11")
def _nf11(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    sec2 = inst.sec2()
    r_min = min(v, 1.0 - v)
    re_arith_v = (1.0 - v) * inst.re(0) + v * inst.re(1)
    gap = re_part(inst.amean(0.5)) - inst.re_gmean(0.5)
    refined = sec2 * re_arith_v - 2.0 * r_min * sec2 * gap
    return [
        loewner_link(re_part(inst.gmean(v)), refined),
        loewner_link(refined, sec2 * re_part(inst.amean(v))),
    ]


@register("SVHARM")
def _svharm(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    k = _k(inst, params)
    sec2 = inst.sec2()
    H = inst.hmean(v)
    S = inst.amean(v)
    first = _prod(_sv(H), k)
    second = sec2 ** k * _prod(_sv(re_part(H)), k)
    third = sec2 ** (2 * k) * _prod(_sv(re_part(S)), k)
    fourth = sec2 ** (2 * k) * _prod(_sv(S), k)
    return [scalar_link(first, second), scalar_link(second, third), scalar_link(third, fourth)]


@register("F6")
def _f6(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    I = identity(inst.n)
    lhs = _prod(_sv(inverse(inst.A + inst.B)), k)
    rhs = inst.sec2() ** (2 * k) / 4.0 ** k * _prod(_sv(I + inst.inv(0)), k) * _prod(_sv(I + inst.inv(1)), k)
    return [scalar_link(lhs, rhs)]


@register("F7")
def _f7(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    I = identity(inst.n)
    c = inst.sec2() / 4.0
    lhs = _prod(_sv(I + inverse(inst.A + inst.B)), k)
    rhs = inst.sec2() ** k * _prod(_sv(I + c * inst.inv(0)), k) * _prod(_sv(I + c * inst.inv(1)), k)
    return [scalar_link(lhs, rhs)]


@register("F90")
def _f90(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    I = identity(inst.n)
    sec2 = inst.sec2()
    lhs = _prod(_sv(inst.A + inst.B), k)
    rhs = _prod(_sv(I + sec2 * inst.A), k) * _prod(_sv(I + sec2 * inst.B), k)
    return [scalar_link(lhs, rhs)]


@register("D2233")
def _d2233(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    cos_n = inst.sec2() ** (-inst.n / 2.0)
    lhs = cos_n * (_absdet(inst.A) + _absdet(inst.B))
    return [scalar_link(lhs, _absdet(inst.A + inst.B))]


def _dets(inst: Instance):
    return _absdet(inst.A), _absdet(inst.B), _redet(inst.re(0)), _redet(inst.re(1))


@register("D2244")
def _d2244(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    dA, dB, rA, rB = _dets(inst)
    sec_n = inst.sec2() ** (inst.n / 2.0)
    abs_means = scalar_means(dA, dB)
    re_means = scalar_means(rA, rB)
    return [
        scalar_link(abs_means.harmonic, sec_n * re_means.harmonic),
        scalar_link(sec_n * re_means.harmonic, sec_n * re_means.arithmetic),
        scalar_link(sec_n * re_means.arithmetic, sec_n * abs_means.arithmetic),
    ]


@register("D2255")
def _d2255(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    dA, dB, rA, rB = _dets(inst)
    cos_n = inst.sec2() ** (-inst.n / 2.0)
    k_inv2 = kantorovich(inst.h) ** -2
    abs_means = scalar_means(dA, dB)
    re_means = scalar_means(rA, rB)
    return [
        scalar_link(re_means.harmonic, abs_means.harmonic),
        scalar_link(k_inv2 * re_means.arithmetic, re_means.harmonic, conjectural=True),
        scalar_link(k_inv2 * cos_n * abs_means.arithmetic, k_inv2 * re_means.arithmetic),
    ]


@register("F10")
def _f10(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    n = inst.n
    I = identity(n)
    lhs = _absdet(inverse(inst.A + inst.B))
    rhs = inst.sec2() ** (1.5 * n) / 4.0 ** n * _absdet(I + inst.inv(0)) * _absdet(I + inst.inv(1))
    return [scalar_link(lhs, rhs)]


@register("F212")
def _f212(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    n = inst.n
    I = identity(n)
    c = inst.sec2() / 4.0
    lhs = _absdet(I + inverse(inst.A + inst.B))
    rhs = inst.sec2() ** (n / 2.0) * _absdet(I + c * inst.inv(0)) * _absdet(I + c * inst.inv(1))
    return [scalar_link(lhs, rhs)]


def sandwich_bounds(inst: Instance) -> Tuple[float, float]:
    """Extremes of Re(A^-1)^-1/2 Re(B^-1) Re(A^-1)^-1/2."""
    X = inst.re_inv(0)
    Y = inst.re_inv(1)
    X_mhalf = hpd_power(X, -0.5)
    values = eigvals_desc(symmetrize(X_mhalf @ Y @ X_mhalf))
    return float(values[-1]), float(values[0])


def _sandwich_kappa(inst: Instance, params: Dict[str, Any]) -> float:
    m, M = sandwich_bounds(inst)
    if m <= 0.0:
        raise Vacuous("Re(B^-1) is not bounded below by a positive multiple of Re(A^-1)")
    value = kappa(m, M)
    params.update({"sandwich_m": m, "sandwich_M": M, "kappa": value})
    return value


@register("P22")
def _p22(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    n = inst.n
    kap = _sandwich_kappa(inst, params)
    cos_3n = inst.sec2() ** (-1.5 * n)
    lhs = cos_3n * kap ** (-n) / 2.0 ** n * (_absdet(inst.A) + _absdet(inst.B))
    return [scalar_link(lhs, _absdet(inst.hmean(0.5)))]


@register("P22M")
def _p22m(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    kap = _sandwich_kappa(inst, params)
    X = inst.re_inv(0)
    Y = inst.re_inv(1)
    return [loewner_link(0.5 * (X + Y), kap * symmetrize(harmonic_mean(X, Y, 0.5)))]


@register("DETSUP")
def _detsup(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    A, B = inst.A, inst.B
    return [scalar_link(_redet(A) + _redet(B), _redet(A + B))]


@register("F6PD")
def _f6pd(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    I = identity(inst.n)
    lhs = _prod(eigvals_desc(inverse(inst.A + inst.B)), k)
    middle = _prod(eigvals_desc((I + inst.inv(0)) / 2.0), k) * _prod(eigvals_desc((I + inst.inv(1)) / 2.0), k)
    rhs = _prod(eigvals_desc(I + inst.inv(0)), k) * _prod(eigvals_desc(I + inst.inv(1)), k)
    return [scalar_link(lhs, middle), scalar_link(middle, rhs)]


@register("F7PD")
def _f7pd(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = _k(inst, params)
    I = identity(inst.n)
    lhs = _prod(eigvals_desc(I + inverse(inst.A + inst.B)), k)
    middle = _prod(eigvals_desc(I + inst.inv(0) / 4.0), k) * _prod(eigvals_desc(I + inst.inv(1) / 4.0), k)
    rhs = _prod(eigvals_desc(I + inst.inv(0)), k) * _prod(eigvals_desc(I + inst.inv(1)), k)
    return [scalar_link(lhs, middle), scalar_link(middle, rhs)]


@register("F10PD")
def _f10pd(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    n = inst.n
    I = identity(n)
    lhs = _redet(harmonic_mean(inst.inv(0), inst.inv(1), 0.5)) / 2.0 ** n
    rhs = _redet(I + inst.inv(0)) * _redet(I + inst.inv(1)) / 4.0 ** n
    return [scalar_link(lhs, rhs)]


@register("F212PD")
def _f212pd(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    I = identity(inst.n)
    A_q, B_q = inst.inv(0) / 4.0, inst.inv(1) / 4.0
    lhs = _redet(I + 2.0 * harmonic_mean(A_q, B_q, 0.5))
    rhs = _redet(I + A_q) * _redet(I + B_q)
    return [scalar_link(lhs, rhs)]


# ---------------------------------------------------------------------------
# Squared inequalities and positive maps
# ---------------------------------------------------------------------------

@register("R1")
def _r1(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    return [loewner_link(inst.re_gmean(v), re_part(inst.gmean(v)))]


@register("SQ")
def _sq_check(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    A, B = inst.A, inst.B
    values = eigvals_desc(A)
    h = values[0] / values[-1]
    params["h_A"] = float(h)
    return [loewner_link(_sq(A), kantorovich(h) * _sq(B))]


@register("P31I")
def _p31i(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    X = re_part(inst.gmean(v))
    Y = inst.re_gmean(v)
    return [loewner_link(_sq(X), inst.sec2() ** 2 * kantorovich(inst.h) * _sq(Y))]


@register("P31II")
def _p31ii(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    X = re_part(inst.gmean(v))
    Y = inst.re_gmean(v)
    return [loewner_link(_sq(Y), kantorovich(inst.h) * _sq(X))]


@register("NAT")
def _nat(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    if inst.alpha is None or not inst.m > 0.0:
        raise Vacuous("needs a sector angle and positive real-part bounds")
    return [scalar_link(1.0, kantorovich(inst.h) * math.sqrt(inst.sec2()))]


@register("RIM")
def _rim(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    scale = kantorovich(inst.h) ** -0.5
    return [loewner_link(scale * inst.re_gmean(v), re_part(inst.gmean(v)))]


@register("R7")
def _r7(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    v = _v(params)
    X = re_part(inst.gmean(v))
    Y = inst.re_gmean(v)
    return [loewner_link(Y, X), loewner_link(X, inst.sec2() * Y)]


def _phi_inv_re(inst: Instance) -> np.ndarray:
    """Phi((Re A)^-1)."""
    return inst.map_of("inv_re", [inst.inv_re(0)])


def _phi_re_inv(inst: Instance) -> np.ndarray:
    """Phi(Re(A^-1))."""
    return inst.map_of("re_inv", [inst.re_inv(0)])


@register("P31III")
def _p31iii(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    P = _phi_inv_re(inst)
    Q = _phi_re_inv(inst)
    return [loewner_link(_sq(P), inst.sec2() ** 2 * kantorovich(inst.h) * _sq(Q))]


@register("YL1")
def _yl1(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    Q = _phi_re_inv(inst)
    phi_re = inst.map_of("re", [inst.re(0)])
    return [loewner_link(Q, kantorovich(inst.h) * symmetrize(inverse(phi_re)))]


@register("FFF")
def _fff(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    return [loewner_link(_phi_re_inv(inst), kantorovich(inst.h) * _phi_inv_re(inst))]


@register("FFFF")
def _ffff(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    constant = inst.sec2() * math.sqrt(kantorovich(inst.h))
    return [loewner_link(_phi_inv_re(inst), constant * _phi_re_inv(inst))]


def _phi_inv_of_re_inv(inst: Instance) -> np.ndarray:
    """Phi((Re(A^-1))^-1)."""
    return inst.map_of("inv_of_re_inv", [symmetrize(inverse(inst.re_inv(0)))])


@register("CHOI")
def _choi(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    lhs = symmetrize(inverse(_phi_re_inv(inst)))
    return [loewner_link(lhs, _phi_inv_of_re_inv(inst))]


@register("CHOI2")
def _choi2(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    values = eigvals_desc(inst.re_inv(0))
    h = values[0] / values[-1]
    params["h_re_inv"] = float(h)
    lhs = _sq(symmetrize(inverse(_phi_re_inv(inst))))
    return [loewner_link(lhs, kantorovich(h) * _sq(_phi_inv_of_re_inv(inst)))]


@register("COR8")
def _cor8(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    P = _phi_inv_re(inst)
    Q_inv = inverse(_phi_re_inv(inst))
    lhs = op_norm(P @ Q_inv + Q_inv @ P)
    rhs = 2.0 * inst.sec2() * math.sqrt(kantorovich(inst.h))
    return [scalar_link(lhs, rhs)]


def _tuple_maps(inst: Instance) -> Tuple[np.ndarray, np.ndarray, int]:
    """P = Phi(Re(A_i^-1)), Q = Phi(Re A_i) and the arity."""
    k = len(inst.mats)
    P = inst.map_of("re_inv_tuple", [inst.re_inv(i) for i in range(k)])
    Q = inst.map_of("re_tuple", [inst.re(i) for i in range(k)])
    return P, Q, k


@register("MF12")
def _mf12(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    k = len(inst.mats)
    P = inst.map_of("inv_tuple", [symmetrize(inst.inv(i)) for i in range(k)])
    Q = inst.map_of("tuple", inst.mats)
    return [loewner_link(P, kantorovich(inst.h ** k) * symmetrize(inverse(Q)))]


@register("MF2")
def _mf2(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    P, Q, k = _tuple_maps(inst)
    return [loewner_link(P, kantorovich(inst.h ** k) * symmetrize(inverse(Q)))]


def _mk_constants(inst: Instance, k: int) -> Tuple[float, float]:
    return (inst.M * inst.m) ** k, inst.M ** k + inst.m ** k


@register("MF4")
def _mf4(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    _, Q, k = _tuple_maps(inst)
    product, total = _mk_constants(inst, k)
    R = inst.map_of("inv_re_tuple", [inst.inv_re(i) for i in range(k)])
    return [loewner_link(product * R + Q, total * identity(Q.shape[0]))]


@register("MF6")
def _mf6(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    P, Q, k = _tuple_maps(inst)
    product, total = _mk_constants(inst, k)
    return [loewner_link(product * P + Q, total * identity(Q.shape[0]))]


@register("MF7")
def _mf7(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    P, Q, k = _tuple_maps(inst)
    product, total = _mk_constants(inst, k)
    left = product * op_norm(P @ Q)
    middle = 0.25 * op_norm(product * P + Q) ** 2
    right = 0.25 * total ** 2
    return [scalar_link(left, middle), scalar_link(middle, right)]


@register("TMM")
def _tmm(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    P, Q, k = _tuple_maps(inst)
    Q_inv = symmetrize(inverse(Q))
    return [loewner_link(_sq(P), kantorovich(inst.h ** k) ** 2 * _sq(Q_inv))]


@register("RE1")
def _re1(inst: Instance, params: Dict[str, Any]) -> List[Link]:
    p = float(params.get("p", 1.0))
    if p <= 0.0:
        raise Vacuous(f"p={p} must be positive")
    P, Q, k = _tuple_maps(inst)
    lhs = hpd_power(P, p)
    rhs = kantorovich(inst.h ** k) ** p * hpd_power(Q, -p)
    return [loewner_link(lhs, rhs, conjectural=p > 2.0)]
