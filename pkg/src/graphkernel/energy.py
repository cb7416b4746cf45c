"""Energy Hilbert space of a weighted graph.

Functions on vertices are taken modulo constants; each class is stored as
its representative vanishing at the base point.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .graph import GraphError, WeightedGraph


@dataclass(frozen=True, eq=False)
class EnergyVector:
    """Real function on the vertices of ``host``, pinned to 0 at ``base``.

    ``values`` is aligned with ``host.vertices``.
    """

    host: WeightedGraph
    base: str
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (len(self.host),):
            raise GraphError(
                f"expected {len(self.host)} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise GraphError("energy vector values must be finite")
        b = self.host.index(self.base)
        if vals[b] != 0.0:
            vals = vals - vals[b]
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, host: WeightedGraph, base: str, mapping: Mapping[str, float]):
        """Build from a partial map; missing vertices read as 0 before pinning."""
        vals = np.zeros(len(host))
        for x, val in mapping.items():
            vals[host.index(x)] = float(val)
        return cls(host, base, vals)

    @classmethod
    def zero(cls, host: WeightedGraph, base: str):
        return cls(host, base, np.zeros(len(host)))

    def __call__(self, x: str) -> float:
        return float(self.values[self.host.index(x)])

    def as_dict(self) -> dict[str, float]:
        return {v: float(val) for v, val in zip(self.host.vertices, self.values)}

    def _same_space(self, other: "EnergyVector"):
        if other.host is not self.host or other.base != self.base:
            raise GraphError("energy vectors live on different hosts or base points")

    def __add__(self, other: "EnergyVector") -> "EnergyVector":
        self._same_space(other)
        return EnergyVector(self.host, self.base, self.values + other.values)

    def __sub__(self, other: "EnergyVector") -> "EnergyVector":
        self._same_space(other)
        return EnergyVector(self.host, self.base, self.values - other.values)

    def __mul__(self, scalar: float) -> "EnergyVector":
        return EnergyVector(self.host, self.base, float(scalar) * self.values)

    __rmul__ = __mul__

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False)

    @classmethod
    def from_json(cls, host: WeightedGraph, base: str, text: str):
        """Load ``{vertex: value}``; a nonzero base value is rejected."""
        data = json.loads(text)
        if not isinstance(data, dict):
            raise GraphError("energy vector JSON must be an object")
        if float(data.get(base, 0.0)) != 0.0:
            raise GraphError(f"energy vector must vanish at the base point {base!r}")
        return cls.from_mapping(host, base, data)


def dirac(host: WeightedGraph, base: str, x: str) -> EnergyVector:
    """Pinned representative of the point mass at ``x``.

    For ``x == base`` this is the constant -1 away from the base.
    """
    vals = np.zeros(len(host))
    vals[host.index(x)] = 1.0
    return EnergyVector(host, base, vals)


def energy_inner(u: EnergyVector, v: EnergyVector) -> float:
    """Sum over unordered edges of ``mu_xy (u(x)-u(y)) (v(x)-v(y))``."""
    u._same_space(v)
    heads, tails, w = u.host.edge_arrays
    du = u.values[heads] - u.values[tails]
    dv = v.values[heads] - v.values[tails]
    return float(np.dot(w * du, dv))


def energy_norm_sq(u: EnergyVector) -> float:
    return energy_inner(u, u)


def energy_gram(vectors) -> np.ndarray:
    """Matrix of pairwise energy inner products of a list of vectors."""
    vectors = list(vectors)
    if not vectors:
        return np.zeros((0, 0))
    for v in vectors[1:]:
        vectors[0]._same_space(v)
    heads, tails, w = vectors[0].host.edge_arrays
    V = np.stack([v.values for v in vectors], axis=1)
    D = V[heads] - V[tails]
    G = D.T @ (w[:, None] * D)
    return (G + G.T) / 2


def laplacian_apply(g: WeightedGraph, u: EnergyVector, x: str) -> float:
    """``mu(x) u(x) - sum_{y ~ x} mu_xy u(y)``."""
    if u.host is not g:
        raise GraphError("vector does not live on this graph")
    i = g.index(x)
    total = 0.0
    for y, w in g.adjacency[x]:
        total += w * (u.values[i] - u.values[g.index(y)])
    return total


def laplacian_vector(g: WeightedGraph, u: EnergyVector) -> np.ndarray:
    """The graph Laplacian of ``u`` at every vertex, in vertex order.

    The result is a plain function (not pinned): Laplacians of dipoles are
    point masses, which would be shifted by pinning.
    """
    if u.host is not g:
        raise GraphError("vector does not live on this graph")
    return g.laplacian_matrix @ u.values


def laplacian_energy_vector(g: WeightedGraph, u: EnergyVector) -> EnergyVector:
    """The graph Laplacian of ``u`` as a (pinned) element of the energy space."""
    return EnergyVector(g, u.base, laplacian_vector(g, u))
