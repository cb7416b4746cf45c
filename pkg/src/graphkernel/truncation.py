"""Finite truncations of the Laplacian over sections of the Gram kernel.

For a finite set ``F`` (base point excluded) with Gram section ``M_F`` and
eigenpairs ``M_F xi = lambda xi``, the vectors

    u_lambda = lambda^{-1/2} sum_x xi(x) v_x

are orthonormal in the energy space.  In that basis the compressed
Laplacian is ``diag(1/lambda) + |p><p|`` where ``p`` is the projection of the
base-point mass, with coefficients ``-lambda^{-1/2} <xi, 1_F>``.

Every object here is expressed through coefficient vectors: a vector of the
span of ``{v_x}`` is its coefficient array in the dipole frame, and the
u-basis columns live in ``TruncationData.onb_coeffs``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dipole import solve_dipoles
from .eigen import SpectralDecomposition, symmetric_eig
from .energy import dirac, energy_inner, energy_norm_sq, laplacian_energy_vector
from .errors import ContractViolation, GraphError
from .graph import CUMULATIVE, WeightedGraph, exhaustion, mu_total
from .kernel import NULL_TOL, KernelMatrix, gram_from_energy

log = logging.getLogger(__name__)

RANK1_TOL = 1e-10
MONOTONE_TOL = 1e-10
BESSEL_TOL = 1e-9

SWEEP_COLUMNS = ("k", "n_F", "min_lambda", "max_lambda", "gap_est", "sigma_est",
                 "proj_delta_normsq", "norm_bound")


@dataclass(frozen=True, eq=False)
class TruncationData:
    """Spectral data of one finite section ``F``.

    Attributes
    ----------
    F
        Index labels in matrix order.
    gram
        The section ``M_F``.
    spectral
        Full decomposition of ``M_F`` (null directions included).
    eigenvalues, xi
        Retained eigenvalues (ascending) and their eigenvectors as columns.
    onb_coeffs
        Column ``j`` holds the dipole-frame coefficients of ``u_j``.
    chi_overlap
        ``<xi_j, 1_F>`` for each retained eigenvector.
    delta_coeffs
        u-basis coefficients of the projected base-point mass.
    dropped
        Number of eigenvalues treated as exact zeros.
    """

    F: tuple[str, ...]
    gram: KernelMatrix
    spectral: SpectralDecomposition
    eigenvalues: np.ndarray
    xi: np.ndarray
    onb_coeffs: np.ndarray
    chi_overlap: np.ndarray
    delta_coeffs: np.ndarray
    dropped: int = 0
    warnings: tuple[str, ...] = ()
    host: WeightedGraph | None = field(default=None, repr=False)
    base: str | None = None

    @property
    def inv_eigenvalues(self) -> np.ndarray:
        return 1.0 / self.eigenvalues

    @property
    def min_lambda(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_lambda(self) -> float:
        return float(self.eigenvalues[-1])

    def index(self, x: str) -> int:
        try:
            return self.F.index(x)
        except ValueError:
            raise GraphError(f"{x!r} is not in F") from None


def truncation_from_gram(gram: KernelMatrix, tol: float = NULL_TOL, *,
                         host: WeightedGraph | None = None,
                         base: str | None = None) -> TruncationData:
    """Build the u-basis of a kernel section.

    Eigenvalues below ``tol * max(1, max eigenvalue)`` span null directions
    (they represent the zero vector); they are dropped with a warning.
    """
    d = symmetric_eig(gram.entries)
    cut = tol * max(1.0, d.max)
    keep = d.eigenvalues > cut
    if not np.any(keep):
        raise GraphError("Gram section is zero; no truncation exists")
    warnings = []
    dropped = int(np.sum(~keep))
    if dropped:
        msg = f"{dropped} null direction(s) of M_F removed (eigenvalues <= {cut:.3g})"
        warnings.append(msg)
        log.warning(msg)
    lam = d.eigenvalues[keep]
    xi = d.eigenvectors[:, keep]
    C = xi / np.sqrt(lam)[None, :]
    overlap = xi.sum(axis=0)
    return TruncationData(
        F=gram.labels, gram=gram, spectral=d, eigenvalues=lam, xi=xi,
        onb_coeffs=C, chi_overlap=overlap, delta_coeffs=-overlap / np.sqrt(lam),
        dropped=dropped, warnings=tuple(warnings), host=host, base=base)


def build_truncation(source, F: Sequence[str] | None = None, base: str | None = None,
                     tol: float = NULL_TOL) -> TruncationData:
    """Truncation data for ``F`` from a based graph or a ready kernel section."""
    if isinstance(source, KernelMatrix):
        gram = source if F is None else source.section(F)
        return truncation_from_gram(gram, tol, base=base)
    if isinstance(source, WeightedGraph):
        if F is None:
            raise GraphError("a vertex set F is required for graph input")
        base = source.require_base(base)
        gram = gram_from_energy(source, list(F), base)
        return truncation_from_gram(gram, tol, host=source, base=base)
    raise GraphError(f"cannot build a truncation from {type(source).__name__}")


def onb_gram(t: TruncationData) -> np.ndarray:
    """Energy Gram matrix of the u-basis, via ``M_F``."""
    C = t.onb_coeffs
    return C.T @ t.gram.entries @ C


def onb_error(t: TruncationData) -> float:
    G = onb_gram(t)
    return float(np.abs(G - np.eye(len(G))).max())


def reconstruct_dipole(t: TruncationData, x: str) -> np.ndarray:
    """u-basis coefficients of ``v_x``: ``sqrt(lambda) xi_lambda(x)``."""
    i = t.index(x)
    return np.sqrt(t.eigenvalues) * t.xi[i]


def reconstruction_error(t: TruncationData) -> float:
    """Worst mismatch between the rebuilt ``v_x`` and its Gram column.

    The rebuilt vector is taken back to the dipole frame and paired with
    every ``v_y``; the result must equal ``M(y, x)``.
    """
    M = t.gram.entries
    worst = 0.0
    for i, x in enumerate(t.F):
        coeffs = t.onb_coeffs @ reconstruct_dipole(t, x)
        worst = max(worst, float(np.abs(M @ coeffs - M[:, i]).max()))
    return worst


def project_delta(t: TruncationData) -> tuple[np.ndarray, float]:
    """Coefficients and squared norm of the projected base-point mass."""
    return t.delta_coeffs.copy(), float(np.sum(t.chi_overlap ** 2 / t.eigenvalues))


def truncated_laplacian(t: TruncationData) -> np.ndarray:
    """Matrix of ``<u_i, Lap u_j>`` using ``<v_x, Lap v_y> = [x = y] + 1``."""
    xi, o = t.xi, t.chi_overlap
    s = 1.0 / np.sqrt(t.eigenvalues)
    inner = xi.T @ xi + np.outer(o, o)
    T = s[:, None] * inner * s[None, :]
    return (T + T.T) / 2


def laplacian_pairing(g: WeightedGraph, F: Sequence[str], base: str | None = None) -> np.ndarray:
    """``<v_x, Lap v_y>_E`` for ``x, y`` in ``F``, evaluated in the energy space."""
    base = g.require_base(base)
    V = solve_dipoles(g, F, base)
    LV = [laplacian_energy_vector(g, v) for v in V]
    return np.array([[energy_inner(vx, lv) for lv in LV] for vx in V])


def truncated_laplacian_energy(t: TruncationData) -> np.ndarray:
    """Independent evaluation of :func:`truncated_laplacian` on the host graph."""
    if t.host is None:
        raise GraphError("truncation has no host graph")
    B = laplacian_pairing(t.host, t.F, t.base)
    return t.onb_coeffs.T @ B @ t.onb_coeffs


def rank1_residual(t: TruncationData, T: np.ndarray | None = None) -> float:
    """Max-entry gap between ``T`` and ``diag(1/lambda) + p p^T``."""
    if T is None:
        T = truncated_laplacian(t)
    p = t.delta_coeffs
    return float(np.abs(T - (np.diag(t.inv_eigenvalues) + np.outer(p, p))).max())


def truncated_norm(t: TruncationData) -> float:
    """Largest Rayleigh quotient ``<u, Lap u> / <u, u>`` over the span of ``F``."""
    return symmetric_eig(truncated_laplacian(t)).max


def check_rank1(t: TruncationData, tol: float = RANK1_TOL) -> float:
    r = rank1_residual(t)
    if r > tol:
        raise ContractViolation(f"rank-one identity residual {r:.3g} exceeds {tol:g}")
    return r


def exhaustion_sections(g: WeightedGraph, rule: str, K: int, base: str | None = None):
    """Yield ``(k, TruncationData)`` for ``k = 1..K``.

    One Gram matrix over every vertex reached by the exhaustion is built up
    front; each ``F_k`` is a principal section of it.
    """
    if K < 1:
        raise GraphError(f"K must be >= 1, got {K}")
    base = g.require_base(base)
    sets = [exhaustion(g, rule, k, base) for k in range(1, K + 1)]
    universe = set().union(*map(set, sets))
    full = gram_from_energy(g, [v for v in g.vertices if v in universe], base)
    for k, F in enumerate(sets, 1):
        yield k, truncation_from_gram(full.section(F), host=g, base=base)


@dataclass(frozen=True)
class SweepRow:
    k: int
    n_F: int
    min_lambda: float
    max_lambda: float
    gap_est: float
    sigma_est: float
    proj_delta_normsq: float
    norm_bound: float
    truncated_norm: float

    def as_row(self):
        return [getattr(self, c) for c in SWEEP_COLUMNS]


@dataclass(frozen=True)
class SweepResult:
    """Eigen-extreme table of an exhaustion with its running estimates.

    ``gap_est`` and ``sigma_est`` are running inf/sup over the sets seen so
    far; they are finite estimates, not limits.  ``sigma_increasing`` is set
    when the running sup grew strictly at every step, the finite evidence for
    an unbounded inverse.
    """

    rule: str
    rows: tuple[SweepRow, ...]
    delta_normsq: float
    sigma_increasing: bool
    monotone: bool

    @property
    def inverse_flag(self) -> str:
        if self.sigma_increasing and len(self.rows) > 1:
            return "no bounded inverse (estimate)"
        return "undetermined (estimate)"


def gap_sweep(g: WeightedGraph, rule: str, K: int, base: str | None = None) -> SweepResult:
    """Spectral-gap and norm-bound diagnostics for ``F_1, ..., F_K``.

    ``norm_bound`` is ``1/gap_est + ||delta_base||_E^2``.  For the cumulative
    (nested) rule the least eigenvalue must not increase and the largest must
    not decrease; a violation raises :class:`ContractViolation`.
    """
    base = g.require_base(base)
    delta_sq = energy_norm_sq(dirac(g, base, base))
    rows = []
    gap, sigma = np.inf, -np.inf
    for k, t in exhaustion_sections(g, rule, K, base):
        gap = min(gap, t.min_lambda)
        sigma = max(sigma, t.max_lambda)
        _, normsq = project_delta(t)
        rows.append(SweepRow(k, len(t.F), t.min_lambda, t.max_lambda, gap, sigma,
                             normsq, 1.0 / gap + delta_sq, truncated_norm(t)))
    mins = np.array([r.min_lambda for r in rows])
    maxs = np.array([r.max_lambda for r in rows])
    monotone = bool(np.all(np.diff(mins) <= MONOTONE_TOL * np.maximum(1, mins[1:]))
                    and np.all(np.diff(maxs) >= -MONOTONE_TOL * np.maximum(1, maxs[1:])))
    if rule == CUMULATIVE and not monotone:
        raise ContractViolation("eigen-extremes of nested sections are not monotone")
    sig = np.array([r.sigma_est for r in rows])
    increasing = bool(np.all(np.diff(sig) > MONOTONE_TOL * np.maximum(1, sig[1:])))
    return SweepResult(rule, tuple(rows), delta_sq, increasing, monotone)


def symmetry_sequence(sections: Sequence[TruncationData], x: str) -> list[float]:
    """``sum_lambda xi_lambda(x)^2 / lambda`` for each section containing ``x``.

    This is the squared norm of the projected point mass at ``x``; it is
    bounded along an exhaustion exactly when that mass has finite norm.
    """
    out = []
    for t in sections:
        if x in t.F:
            i = t.index(x)
            out.append(float(np.sum(t.xi[i] ** 2 / t.eigenvalues)))
    return out


@dataclass(frozen=True)
class CriterionResult:
    x: str
    ks: tuple[int, ...]
    sizes: tuple[int, ...]
    values: tuple[float, ...]
    bound: float | None

    @property
    def nondecreasing(self) -> bool:
        v = np.array(self.values)
        return bool(np.all(np.diff(v) >= -BESSEL_TOL * np.maximum(1, v[1:])))

    @property
    def supremum_estimate(self) -> float:
        return max(self.values)

    @property
    def within_bound(self) -> bool:
        return self.bound is None or self.supremum_estimate <= self.bound + BESSEL_TOL


def symmetry_criterion(g: WeightedGraph, x: str, rule: str, K: int,
                       base: str | None = None) -> CriterionResult:
    """Sequence ``s_k`` for ``x`` along the exhaustion, with the bound ``mu(x)``.

    For nested rules the sequence is nondecreasing and never exceeds the
    energy of the point mass at ``x``; a violation raises.
    """
    base = g.require_base(base)
    if x == base:
        raise GraphError("the base point has no criterion sequence")
    ks, sizes, ts = [], [], []
    for k, t in exhaustion_sections(g, rule, K, base):
        if x in t.F:
            ks.append(k)
            sizes.append(len(t.F))
            ts.append(t)
    if not ts:
        raise GraphError(f"{x!r} never enters F_1..F_{K}")
    res = CriterionResult(x, tuple(ks), tuple(sizes), tuple(symmetry_sequence(ts, x)),
                          mu_total(g, x))
    if rule == CUMULATIVE and not (res.nondecreasing and res.within_bound):
        raise ContractViolation(f"criterion sequence for {x!r} breaks monotonicity or its bound")
    return res


@dataclass(frozen=True)
class DiagonalLimitRow:
    k: int
    n_F: int
    diag_pairing: float
    laplacian_pairing: float
    mass_product: float
    residual_minus: float
    residual_plus: float


def diagonal_limit_residuals(g: WeightedGraph, x: str, y: str, rule: str, K: int,
                             base: str | None = None) -> list[DiagonalLimitRow]:
    """Compare ``<v_x, D_F v_y>`` with the Laplacian minus/plus the base-mass term.

    ``D_F`` is applied as ``T - p p^T`` in the u-basis.  The Laplacian pairing
    and ``<v_x, delta_base>`` are evaluated directly in the energy space.
    ``residual_minus`` uses ``Lap - |delta><delta|`` (exact for every finite
    ``F``); ``residual_plus`` uses ``Lap + |delta><delta|``.
    """
    base = g.require_base(base)
    F1 = exhaustion(g, rule, 1, base)
    for z in (x, y):
        if z not in F1:
            raise GraphError(f"{z!r} is not in F_1")
    vx, vy = solve_dipoles(g, [x, y], base)
    d0 = dirac(g, base, base)
    lap = energy_inner(vx, laplacian_energy_vector(g, vy))
    mass = energy_inner(vx, d0) * energy_inner(d0, vy)
    rows = []
    for k, t in exhaustion_sections(g, rule, K, base):
        if x not in t.F or y not in t.F:
            continue
        p = t.delta_coeffs
        D = truncated_laplacian(t) - np.outer(p, p)
        a, b = reconstruct_dipole(t, x), reconstruct_dipole(t, y)
        pair = float(a @ D @ b)
        rows.append(DiagonalLimitRow(k, len(t.F), pair, lap, mass,
                                     pair - (lap - mass), pair - (lap + mass)))
    return rows
