"""Positive semidefinite kernels and their finite sections.

The main kernel is the energy Gram kernel ``M(x, y) = <v_x, v_y>_E`` of the
dipoles ``v_x`` of a based graph.  On the built-in families it has exact
integer closed forms: ``min(|x|, |y|)`` on same-sign segment points (0
across signs) and the shared root-path length on the dyadic tree.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .dipole import closed_form_value, solve_dipoles
from .eigen import symmetric_eig
from .energy import dirac, energy_gram
from .errors import ContractViolation, GraphError
from .graph import FAMILIES, WeightedGraph, check_subset, is_connected, tree_words
from .tables import emit_table, json_number

PSD_TOL = 1e-10
NULL_TOL = 1e-10
MAX_TREE_LEVEL = 12


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """A symmetric kernel section ``(M(x, y))`` over the ordered index ``labels``."""

    labels: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        E = np.array(self.entries, dtype=float)
        labels = tuple(str(x) for x in self.labels)
        if E.shape != (len(labels), len(labels)):
            raise GraphError(f"{len(labels)} labels but matrix shape {E.shape}")
        if len(set(labels)) != len(labels):
            raise GraphError("kernel labels must be distinct")
        if not np.array_equal(E, E.T):
            raise GraphError("kernel matrix is not symmetric")
        E.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", E)

    def __len__(self):
        return len(self.labels)

    def index(self, x: str) -> int:
        try:
            return self.labels.index(x)
        except ValueError:
            raise GraphError(f"label {x!r} is not in the kernel index") from None

    def __call__(self, x: str, y: str) -> float:
        return float(self.entries[self.index(x), self.index(y)])

    def section(self, labels: Sequence[str]) -> "KernelMatrix":
        """Principal submatrix on ``labels`` (in the given order)."""
        idx = [self.index(x) for x in labels]
        return KernelMatrix(tuple(labels), self.entries[np.ix_(idx, idx)])

    def is_integral(self) -> bool:
        return bool(np.all(self.entries == np.rint(self.entries)))

    def to_csv(self) -> str:
        rows = [[x, *self.entries[i]] for i, x in enumerate(self.labels)]
        return emit_table(rows, ["", *self.labels], "csv")

    def to_json(self) -> str:
        data = {"labels": list(self.labels),
                "rows": [[json_number(v) for v in row] for row in self.entries]}
        return json.dumps(data, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "KernelMatrix":
        data = json.loads(text)
        return cls(tuple(data["labels"]), np.array(data["rows"], dtype=float))


def _mirror(labels, upper) -> KernelMatrix:
    E = np.triu(upper)
    E = E + np.triu(E, 1).T
    return KernelMatrix(tuple(labels), E)


def gram_from_energy(g: WeightedGraph, F: Sequence[str], base: str | None = None) -> KernelMatrix:
    """Energy inner products of the dipoles ``v_x``, ``x`` in ``F``."""
    base = g.require_base(base)
    check_subset(g, F, base)
    if not is_connected(g):
        raise GraphError("graph is not connected")
    V = solve_dipoles(g, F, base)
    return _mirror(F, energy_gram(V))


def gram_from_values(g: WeightedGraph, F: Sequence[str], base: str | None = None) -> KernelMatrix:
    """Same kernel read off pointwise: ``M(x, y) = v_x(y)``."""
    base = g.require_base(base)
    check_subset(g, F, base)
    V = solve_dipoles(g, F, base)
    idx = g.indices(F)
    return _mirror(F, np.stack([v.values[idx] for v in V]))


def gram_closed_form(family: str, F: Sequence[str]) -> KernelMatrix:
    """Exact integer kernel of a built-in family on the index ``F``."""
    if family not in FAMILIES:
        raise GraphError(f"no closed form for family {family!r}")
    base = "0" if family == "segment" else "∅"
    if not F:
        raise GraphError("vertex set F is empty")
    if base in F:
        raise GraphError(f"base point {base!r} may not belong to F")
    E = np.array([[closed_form_value(family, x, y) for y in F] for x in F], dtype=float)
    return KernelMatrix(tuple(F), E)


def tree_level_recursion(k: int, max_level: int = MAX_TREE_LEVEL) -> KernelMatrix:
    """Tree kernel on the words of length exactly ``k``, built by block recursion.

    Start from the 2x2 identity; each level adds 1 to every entry and places
    two copies on the block diagonal.
    """
    if not 1 <= k <= max_level:
        raise GraphError(f"level must be in 1..{max_level}, got {k}")
    M = np.eye(2)
    for _ in range(k - 1):
        T = M + 1.0
        Z = np.zeros_like(T)
        M = np.block([[T, Z], [Z, T]])
    return KernelMatrix(tuple(tree_words(k, min_length=k)), M)


def psd_check(M, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Least eigenvalue test: PSD iff ``min eig >= -tol * max(1, max eig)``."""
    E = M.entries if isinstance(M, KernelMatrix) else np.asarray(M, dtype=float)
    d = symmetric_eig(E)
    lo = d.min
    return bool(lo >= -tol * max(1.0, d.max)), lo


@dataclass(frozen=True)
class KernelVector:
    """Finite combination ``f_c = sum_x c_x M(., x)`` of kernel sections."""

    coefficients: Mapping[str, float]

    def array(self, M: KernelMatrix) -> np.ndarray:
        c = np.zeros(len(M))
        for x, val in self.coefficients.items():
            c[M.index(x)] += float(val)
        return c


def kernel_vector_inner(a: KernelVector, b: KernelVector, M: KernelMatrix) -> float:
    """``sum_{x,y} a_x M(x, y) b_y``."""
    return float(a.array(M) @ M.entries @ b.array(M))


def kernel_vector_eval(f: KernelVector, M: KernelMatrix, x: str) -> float:
    """Pointwise value ``f_c(x) = sum_y c_y M(x, y)``."""
    return float(M.entries[M.index(x)] @ f.array(M))


def kernel_section(x: str) -> KernelVector:
    """The kernel section ``M(., x)`` as a kernel vector."""
    return KernelVector({x: 1.0})


def gram_factorization(M: KernelMatrix, tol: float = PSD_TOL) -> np.ndarray:
    """Rows ``w_x`` with ``<w_x, w_y> = M(x, y)``.

    Taken from the eigendecomposition, ``W = Xi diag(sqrt(lambda))``, after
    clamping eigenvalues below ``NULL_TOL * max`` to zero and dropping them.
    """
    ok, lo = psd_check(M, tol)
    if not ok:
        raise ContractViolation(f"kernel is not positive semidefinite (min eigenvalue {lo:g})")
    d = symmetric_eig(M.entries)
    cut = NULL_TOL * max(1.0, d.max)
    keep = d.eigenvalues > cut
    return d.eigenvectors[:, keep] * np.sqrt(d.eigenvalues[keep])[None, :]


def szego_gram(points: Sequence[float]) -> KernelMatrix:
    """Sampled kernel ``1 / (1 - x y)`` on distinct points of ``[0, 1)``."""
    pts = [float(p) for p in points]
    if not pts:
        raise GraphError("need at least one sample point")
    for p in pts:
        if not (0.0 <= p < 1.0):
            raise GraphError(f"sample point {p} outside [0, 1)")
    if len(set(pts)) != len(pts):
        raise GraphError("sample points must be distinct")
    x = np.array(pts)
    E = 1.0 / (1.0 - np.outer(x, x))
    return _mirror([f"{p:.12g}" for p in pts], E)


def laplacian_kernel(g: WeightedGraph) -> KernelMatrix:
    """``mu(x)`` on the diagonal, ``-mu_xy`` off it: energy products of point masses."""
    base = g.base if g.base is not None else g.vertices[0]
    D = [dirac(g, base, x) for x in g.vertices]
    return _mirror(g.vertices, energy_gram(D))
