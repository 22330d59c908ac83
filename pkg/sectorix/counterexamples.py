"""
Built-in counter-examples to the naive norm and determinant inequalities.

For accretive A, B neither of

    min{||(A+B)^-1||, ||I + (A+B)^-1||}         <= ||I + A^-1|| ||I + B^-1||
    min{|det (A+B)^-1|, |det(I + (A+B)^-1)|}    <= |det(I + A^-1)| |det(I + B^-1)|

holds in general; the sector-angle factors in F6/F7 and F10/F212 cannot be
dropped. The two fixed 3x3 pairs below reproduce the failures.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from .checks import CheckResult
from .cmat import det, identity, inverse, singular_values

logger = logging.getLogger(__name__)

SV_PAIR = (
    np.array([[1, -1, 1], [-1, 1, 3], [1, 3, 20]], dtype=np.complex128),
    np.array([[100, 2, -3], [2, 1, 4], [-3, 4, 1]], dtype=np.complex128),
)

DET_PAIR = (
    np.array([[1, -1, 2.5], [-1, 2, -2], [2.5, -2, 1]], dtype=np.complex128),
    np.array([[-1, 1, -3], [1, -1, 1], [-3, 1, -1]], dtype=np.complex128),
)


@dataclass(frozen=True)
class Counterexample:
    """Reproduced quantities plus the naive inequality evaluated on them."""
    name: str
    values: Dict[str, float]
    naive: CheckResult
    matrices: List[np.ndarray] = field(default_factory=list, compare=False)

    @property
    def violated(self) -> bool:
        return self.naive.holds is False

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "values": dict(self.values), "naive": self.naive.to_dict(),
                "violated": self.violated}


def _naive(check_id: str, first: float, second: float, product: float, witness: str) -> CheckResult:
    lhs = min(first, second)
    slack = (product - lhs) / max(1.0, abs(product))
    holds = slack >= 0.0
    return CheckResult(id=check_id, hypotheses_met=True, reason="", lhs=lhs, rhs=product, slack=slack,
                       holds=holds, params={}, witness=witness, conjectural=False,
                       status="pass" if holds else "fail")


def counterexample_sv() -> Counterexample:
    A, B = SV_PAIR
    I = identity(3)
    S_inv = inverse(A + B)
    values = {
        "s1((A+B)^-1)": singular_values(S_inv)[0],
        "s1(I+(A+B)^-1)": singular_values(I + S_inv)[0],
        "s1(I+A^-1)*s1(I+B^-1)": singular_values(I + inverse(A))[0] * singular_values(I + inverse(B))[0],
    }
    first, second, product = values.values()
    result = Counterexample("sv", values, _naive("NAIVE_SV", first, second, product, "builtin:sv"), [A, B])
    logger.info(f"sv counter-example: naive inequality {'VIOLATED' if result.violated else 'holds'}")
    return result


def counterexample_det() -> Counterexample:
    A, B = DET_PAIR
    I = identity(3)
    S_inv = inverse(A + B)
    values = {
        "|det((A+B)^-1)|": abs(det(S_inv)),
        "|det(I+(A+B)^-1)|": abs(det(I + S_inv)),
        "|det(I+A^-1)|*|det(I+B^-1)|": abs(det(I + inverse(A))) * abs(det(I + inverse(B))),
    }
    first, second, product = values.values()
    result = Counterexample("det", values, _naive("NAIVE_DET", first, second, product, "builtin:det"), [A, B])
    logger.info(f"det counter-example: naive inequality {'VIOLATED' if result.violated else 'holds'}")
    return result


COUNTEREXAMPLES = {
    "sv": counterexample_sv,
    "det": counterexample_det,
}


def run_counterexamples(names: List[str]) -> List[Counterexample]:
    """Run the named counter-examples ('all' runs both)."""
    if "all" in names:
        names = list(COUNTEREXAMPLES)
    return [COUNTEREXAMPLES[name]() for name in names]
