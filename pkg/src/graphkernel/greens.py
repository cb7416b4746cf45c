"""The Gram kernel as a Green's function of the graph Laplacian.

Each column ``y -> M(y, x)`` is the dipole ``v_x``, so applying the
Laplacian in the first variable gives ``delta_x - delta_base``.  That is the
identity checked here.  Two further identities that are sometimes written for
this kernel are evaluated and reported but not enforced, since they fail on
the segment and tree families:

* ``-Lap M(., x)(y) = [x = y] + 1 - mu(y) M(y, x)``  (``kernel_formula``)
* ``sum_{z ~ x} mu_xz (v_x - v_z) = Lap v_x``        (``neighbor_sum``)

On the segment the first one is off by 1 at ``y = x = 2``. The second misses
the ``-delta_base`` term: its left side equals ``delta_x``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dipole import dipole_closed_form, solve_dipole, variation_radius
from .energy import EnergyVector, laplacian_vector
from .errors import ContractViolation, GraphError
from .graph import FAMILIES, WeightedGraph, distances, make_family, mu_total
from .tables import json_number

GREEN_TOL = 1e-10

REPORT_COLUMNS = ("y", "M_yx", "laplacian", "dipole_residual",
                  "kernel_formula_residual", "neighbor_sum_residual")


def greens_column(source, x: str, radius: int | None = None,
                  base: str | None = None) -> EnergyVector:
    """The kernel column ``y -> M(y, x)``, i.e. the dipole ``v_x``.

    ``source`` is a family name (closed form on the instance of size
    ``radius``) or a based graph (grounded solve).
    """
    if isinstance(source, WeightedGraph):
        base = source.require_base(base)
        if x == base:
            raise GraphError("the base point has no kernel column")
        return solve_dipole(source, x, base, base)
    if source in FAMILIES:
        if radius is None:
            radius = variation_radius(source, x)
        return dipole_closed_form(source, x, radius)
    raise GraphError(f"unknown kernel source {source!r}")


@dataclass(frozen=True)
class GreensReport:
    """Residuals of the Laplacian applied to one kernel column.

    Maps are keyed by the vertices where the Laplacian is exact (interior of
    a family instance, every vertex of a plain graph).
    """

    x: str
    base: str
    column: dict[str, float]
    laplacian: dict[str, float]
    dipole_residuals: dict[str, float]
    kernel_formula_residual: dict[str, float]
    neighbor_sum_residual: dict[str, float]
    dipole_identity_residual: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dipole_identity_residual",
                           max(abs(r) for r in self.dipole_residuals.values()))

    @property
    def kernel_formula_max(self) -> float:
        return max((abs(r) for r in self.kernel_formula_residual.values()), default=0.0)

    @property
    def neighbor_sum_max(self) -> float:
        return max((abs(r) for r in self.neighbor_sum_residual.values()), default=0.0)

    def rows(self):
        out = []
        for y in self.dipole_residuals:
            out.append([y, self.column[y], self.laplacian[y], self.dipole_residuals[y],
                        self.kernel_formula_residual.get(y, ""),
                        self.neighbor_sum_residual.get(y, "")])
        return out

    def to_json(self) -> str:
        def conv(m):
            return {k: json_number(v) for k, v in m.items()}
        data = {
            "x": self.x,
            "base": self.base,
            "dipole_identity_residual": json_number(self.dipole_identity_residual),
            "kernel_formula_residual": conv(self.kernel_formula_residual),
            "neighbor_sum_residual": conv(self.neighbor_sum_residual),
            "kernel_formula_max": json_number(self.kernel_formula_max),
            "neighbor_sum_max": json_number(self.neighbor_sum_max),
        }
        return json.dumps(data, ensure_ascii=False, indent=1) + "\n"


def _column_on(g: WeightedGraph, family: str | None, x: str, base: str) -> np.ndarray:
    if x == base:
        return np.zeros(len(g))
    if family is not None:
        return dipole_closed_form(family, x, _size(g)).values
    return solve_dipole(g, x, base, base).values


def _size(g: WeightedGraph) -> int:
    return max(distances(g, g.base).values())


def greens_laplacian_check(source, x: str, radius: int | None = None,
                           base: str | None = None, tol: float = GREEN_TOL) -> GreensReport:
    """Apply the Laplacian to ``M(., x)`` and tabulate the three residuals.

    For a family, ``radius`` must be at least the variation radius of ``v_x``
    plus one, and only vertices closer to the base than ``radius`` are
    reported.  The dipole identity must hold to ``tol`` there, otherwise
    :class:`ContractViolation` is raised; the other two residuals are
    only reported.
    """
    if isinstance(source, WeightedGraph):
        g, family = source, None
        base = g.require_base(base)
        region = list(g.vertices)
    elif source in FAMILIES:
        if radius is None:
            raise GraphError("a radius is required for family input")
        need = variation_radius(source, x) + 1
        if radius < need:
            raise GraphError(f"radius {radius} too small for {x!r}; need >= {need}")
        g, family = make_family(source, radius), source
        base = g.base
        dist = distances(g, base)
        region = [v for v in g.vertices if dist[v] < radius]
    else:
        raise GraphError(f"unknown kernel source {source!r}")
    if x == base:
        raise GraphError("the base point has no kernel column")
    g.index(x)

    col = _column_on(g, family, x, base)
    lap = laplacian_vector(g, EnergyVector(g, base, col))
    idx = {v: g.index(v) for v in region}
    target = np.zeros(len(g))
    target[g.index(x)] += 1.0
    target[g.index(base)] -= 1.0

    neighbor_sum = np.zeros(len(g))
    for z, w in g.adjacency[x]:
        neighbor_sum += w * (col - _column_on(g, family, z, base))

    dipole_res, formula_res, nsum_res = {}, {}, {}
    for y, i in idx.items():
        dipole_res[y] = float(lap[i] - target[i])
        nsum_res[y] = float(neighbor_sum[i] - lap[i])
        if y != base:
            rhs = float(y == x) + 1.0 - mu_total(g, y) * col[i]
            formula_res[y] = float(-lap[i] - rhs)

    report = GreensReport(
        x=x, base=base,
        column={y: float(col[i]) for y, i in idx.items()},
        laplacian={y: float(lap[i]) for y, i in idx.items()},
        dipole_residuals=dipole_res,
        kernel_formula_residual=formula_res,
        neighbor_sum_residual=nsum_res)
    if report.dipole_identity_residual > tol:
        raise ContractViolation(
            f"Laplacian of the kernel column misses delta_x - delta_base by "
            f"{report.dipole_identity_residual:.3g}")
    return report
