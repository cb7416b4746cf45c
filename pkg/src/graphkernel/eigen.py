"""Dense symmetric eigendecomposition by cyclic Jacobi rotations."""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import GraphError

OFF_TOL = 1e-14
MAX_SWEEPS = 50
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending eigenvalues with orthonormal eigenvector columns.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])


def _as_symmetric(A) -> np.ndarray:
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise GraphError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise GraphError("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A - A.T).max() > SYMMETRY_TOL * scale:
        raise GraphError("matrix is not symmetric")
    return (A + A.T) / 2


@contextmanager
def tolerance(tol: float):
    """Temporarily change the default stopping tolerance of :func:`symmetric_eig`."""
    global OFF_TOL
    if not (0.0 < tol < 1.0):
        raise GraphError(f"eigen tolerance must lie in (0, 1), got {tol}")
    saved, OFF_TOL = OFF_TOL, float(tol)
    try:
        yield
    finally:
        OFF_TOL = saved


def symmetric_eig(A, tol: float | None = None, max_sweeps: int = MAX_SWEEPS) -> SpectralDecomposition:
    """Eigendecomposition of a real symmetric matrix.

    Cyclic-by-row Jacobi: every off-diagonal pair is annihilated once per
    sweep, and sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * ||A||_F`` (or after ``max_sweeps``).  Eigenpairs are returned in
    ascending order, ties keeping their original column order.
    """
    if tol is None:
        tol = OFF_TOL
    a = _as_symmetric(A)
    n = a.shape[0]
    V = np.eye(n)
    target = tol * np.linalg.norm(a)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= target:
            sweeps -= 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + 100.0 * abs(apq) == abs(h):
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                app, aqq = a[p, p], a[q, q]
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], V[:, order], sweeps)


def eig_residual(A, d: SpectralDecomposition) -> float:
    """Largest ``||A xi - lambda xi||_inf`` over the eigenpairs of ``d``."""
    A = np.asarray(A, dtype=float)
    if A.shape != (len(d), len(d)) or d.eigenvectors.shape != A.shape:
        raise GraphError("decomposition does not match the matrix dimension")
    R = A @ d.eigenvectors - d.eigenvectors * d.eigenvalues[None, :]
    return float(np.abs(R).max())


def orthonormality_error(d: SpectralDecomposition) -> float:
    X = d.eigenvectors
    return float(np.abs(X.T @ X - np.eye(X.shape[1])).max())


def eigvalsh(A) -> np.ndarray:
    return symmetric_eig(A).eigenvalues
