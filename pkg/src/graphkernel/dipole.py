"""Dipoles and zero-sum Poisson problems in the energy space.

A dipole ``v`` for the pair ``(x, y)`` solves ``Lap v = delta_x - delta_y``.
It is computed by grounding the Laplacian at the base point: the base row
and column are deleted, the remaining symmetric positive definite system is
solved, and 0 is put back at the base.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .energy import EnergyVector
from .errors import GraphError
from .graph import (ROOT, SEGMENT, TREE, WeightedGraph, is_connected,
                    make_family, word_length)

ZERO_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ChargeDistribution:
    """Finitely supported charge on the vertices of ``host``."""

    host: WeightedGraph
    values: Mapping[str, float]

    def __post_init__(self):
        clean = {}
        for x, q in self.values.items():
            self.host.index(x)
            q = float(q)
            if not np.isfinite(q):
                raise GraphError(f"non-finite charge at {x!r}")
            if q != 0.0:
                clean[x] = q
        object.__setattr__(self, "values", clean)

    @property
    def total(self) -> float:
        return float(sum(self.values.values()))

    def array(self) -> np.ndarray:
        out = np.zeros(len(self.host))
        for x, q in self.values.items():
            out[self.host.index(x)] = q
        return out

    @classmethod
    def from_json(cls, host: WeightedGraph, text: str):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise GraphError("charge JSON must be an object {vertex: value}")
        return cls(host, data)


def _ground(g: WeightedGraph, base: str):
    if not is_connected(g):
        raise GraphError("graph is not connected")
    b = g.index(base)
    keep = np.array([i for i in range(len(g)) if i != b], dtype=int)
    return keep, g.laplacian_matrix[np.ix_(keep, keep)]


def solve_grounded(g: WeightedGraph, rhs: np.ndarray, base: str) -> np.ndarray:
    """Solve ``Lap v = rhs`` with ``v(base) = 0`` for one or more right-hand sides.

    ``rhs`` has shape ``(n,)`` or ``(n, m)`` in vertex order and each column
    must sum to zero.  LU with partial pivoting plus one step of iterative
    refinement.
    """
    keep, A = _ground(g, base)
    rhs = np.asarray(rhs, dtype=float)
    b = rhs[keep]
    if len(keep) == 0:
        return np.zeros_like(rhs)
    v = np.linalg.solve(A, b)
    v = v + np.linalg.solve(A, b - A @ v)
    v = _snap_integral(A, b, v)
    out = np.zeros_like(rhs)
    out[keep] = v
    return out


def _snap_integral(A, b, v):
    if not (_integral(A) and _integral(b)):
        return v
    cand = np.rint(v)
    if np.abs(cand).max(initial=0) >= 2**40:
        return v
    Ai, ci, bi = A.astype(np.int64), cand.astype(np.int64), b.astype(np.int64)
    ok = np.all(Ai @ ci == bi, axis=0)
    if v.ndim == 1:
        return cand if ok else v
    return np.where(ok[None, :], cand, v)


def _integral(a):
    return bool(np.all(a == np.rint(a))) and np.abs(a).max(initial=0) < 2**31


def solve_dipole(g: WeightedGraph, x: str, y: str, base: str | None = None) -> EnergyVector:
    """Dipole for the pair ``(x, y)``, pinned at ``base``.

    ``base`` defaults to the graph's base point, then to ``y``.
    """
    if x == y:
        raise GraphError("dipole endpoints must differ")
    base = base if base is not None else (g.base if g.base is not None else y)
    rhs = np.zeros(len(g))
    rhs[g.index(x)] += 1.0
    rhs[g.index(y)] -= 1.0
    return EnergyVector(g, base, solve_grounded(g, rhs, base))


def solve_dipoles(g: WeightedGraph, xs: Iterable[str], base: str | None = None) -> list[EnergyVector]:
    """Dipoles ``v_x`` (``Lap v_x = delta_x - delta_base``) for every ``x`` in ``xs``."""
    base = g.require_base(base)
    xs = list(xs)
    if base in xs:
        raise GraphError(f"base point {base!r} has no dipole")
    rhs = np.zeros((len(g), len(xs)))
    b = g.index(base)
    for j, x in enumerate(xs):
        rhs[g.index(x), j] = 1.0
        rhs[b, j] = -1.0
    sol = solve_grounded(g, rhs, base)
    return [EnergyVector(g, base, sol[:, j]) for j in range(len(xs))]


def decompose_charge(w: ChargeDistribution) -> list[tuple[float, str, str]]:
    """Write a zero-sum charge as ``sum c_i (delta_{x_i} - delta_{y_i})``.

    Greedy pairing: the largest remaining positive charge meets the largest
    remaining negative one, ties going to the earlier vertex.  Each step
    retires at least one vertex, so at most ``#support - 1`` terms result.
    """
    scale = max([1.0] + [abs(q) for q in w.values.values()])
    if abs(w.total) > ZERO_SUM_TOL * scale:
        raise GraphError(
            f"charge sums to {w.total:g}, not 0: no finite-energy solution exists")
    g = w.host
    rem = {x: q for x, q in w.values.items()}
    terms = []
    while True:
        pos = [x for x, q in rem.items() if q > 0]
        neg = [x for x, q in rem.items() if q < 0]
        if not pos or not neg:
            break
        xp = min(pos, key=lambda x: (-rem[x], g.index(x)))
        xn = min(neg, key=lambda x: (rem[x], g.index(x)))
        c = min(rem[xp], -rem[xn])
        terms.append((c, xp, xn))
        rem[xp] -= c
        rem[xn] += c
        for x in (xp, xn):
            if abs(rem[x]) <= ZERO_SUM_TOL * scale:
                del rem[x]
    return terms


def solve_poisson(g: WeightedGraph, w: ChargeDistribution | Mapping[str, float],
                  base: str | None = None, method: str = "dipoles") -> EnergyVector:
    """Finite-energy solution of ``Lap v = w`` for a zero-sum charge ``w``.

    ``method="dipoles"`` sums dipole solutions over :func:`decompose_charge`;
    ``method="direct"`` solves the grounded system for ``w`` in one go.
    """
    if not isinstance(w, ChargeDistribution):
        w = ChargeDistribution(g, w)
    elif w.host is not g:
        raise GraphError("charge lives on a different graph")
    base = base if base is not None else (g.base if g.base is not None else g.vertices[0])
    terms = decompose_charge(w)
    if method == "direct":
        return EnergyVector(g, base, solve_grounded(g, w.array(), base))
    if method != "dipoles":
        raise GraphError(f"unknown method {method!r}")
    total = np.zeros(len(g))
    for c, x, y in terms:
        total += c * solve_dipole(g, x, y, base).values
    return EnergyVector(g, base, total)


def variation_radius(family: str, x: str) -> int:
    """Smallest instance size on which the family dipole ``v_x`` is exact."""
    if family == SEGMENT:
        return abs(int(x)) + 1
    if family == TREE:
        return word_length(x)
    raise GraphError(f"no closed form for family {family!r}")


def closed_form_value(family: str, x: str, y: str) -> int:
    """Value at ``y`` of the infinite-graph dipole ``v_x`` (base 0 or root)."""
    if family == SEGMENT:
        a, t = int(x), int(y)
        if a > 0:
            return min(max(t, 0), a)
        return min(max(-t, 0), -a)
    if family == TREE:
        if x == ROOT or y == ROOT:
            return 0
        n = 0
        for cx, cy in zip(x, y):
            if cx != cy:
                break
            n += 1
        return n
    raise GraphError(f"no closed form for family {family!r}")


def dipole_closed_form(family: str, x: str, radius: int) -> EnergyVector:
    """Exact family dipole ``v_x`` restricted to the instance of size ``radius``.

    Segment: ``v_x(t)`` is ``t`` clipped to ``[0, x]`` for ``x > 0`` and
    ``-t`` clipped to ``[0, -x]`` for ``x < 0``.  Tree: the number of edges
    shared by the root paths of ``x`` and ``t``.
    """
    g = make_family(family, radius)
    if x == g.base:
        raise GraphError("the base point has no dipole")
    g.index(x)
    if radius < variation_radius(family, x):
        raise GraphError(
            f"radius {radius} is below the variation radius "
            f"{variation_radius(family, x)} of v_{x}")
    vals = np.array([closed_form_value(family, x, y) for y in g.vertices], dtype=float)
    return EnergyVector(g, g.base, vals)
