"""
Cyclic Jacobi eigensolver for complex Hermitian matrices.

Each rotation first removes the phase of the pivot entry, then applies the
classical real Jacobi rotation to the resulting real symmetric 2x2 block.
"""

import logging
from typing import Tuple

import numpy as np

from .errors import ConvergenceError, ShapeError

logger = logging.getLogger(__name__)

MAX_SWEEPS = 60


def jacobi_eigh(H: np.ndarray, eps: float = 1e-14, max_sweeps: int = MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """
    Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Args:
        H: Hermitian matrix (only symmetrized copy is touched)
        eps: off-diagonal Frobenius norm target, relative to ||H||_F
        max_sweeps: cap on full sweeps over the upper triangle

    Returns:
        (values, vectors) with values unsorted, vectors unitary columns
    """
    n, m = H.shape
    if n != m:
        raise ShapeError(f"Jacobi needs a square matrix, got {H.shape}")

    a = 0.5 * (H + H.conj().T)
    a = a.astype(np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    target = eps * scale

    for sweep in range(max_sweeps):
        off = np.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off <= target:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off={off:.3e})")
            return np.real(np.diag(a)).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = a[p, q]
                mag = abs(h)
                if mag <= target / n:
                    continue
                phase = h / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # phase removal D = diag(1, conj(phase)) followed by the real rotation
                u2 = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u2
                a[idx, :] = u2.conj().T @ a[idx, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ u2

    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (n={n})")
