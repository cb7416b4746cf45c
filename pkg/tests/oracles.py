"""Reference computations that share no code path with the library.

Everything here is deliberately naive: exact rational elimination, plain
Python loops over edges, and eigenvalues by bisection on the inertia of
``A - s I`` (Sylvester's law) cross-checked against the characteristic
polynomial.
"""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np


# -- linear algebra ---------------------------------------------------------

def solve_exact(A, b):
    """Gauss-Jordan over the rationals; ``A`` square and nonsingular."""
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def count_below(A, s: float) -> int:
    """Number of eigenvalues of symmetric ``A`` strictly below ``s``.

    Exact inertia of ``A - s I`` over the rationals (floats convert exactly):
    symmetric elimination with 1x1 pivots, or a 2x2 pivot ``[[0, b], [b, 0]]``
    (one negative eigenvalue) when every remaining diagonal entry vanishes.
    """
    n = len(A)
    s = Fraction(s)
    B = [[Fraction(float(A[i][j])) - (s if i == j else 0) for j in range(n)] for i in range(n)]
    neg = 0
    while B:
        m = len(B)
        i = next((k for k in range(m) if B[k][k] != 0), None)
        if i is not None:
            d = B[i][i]
            neg += d < 0
            rest = [k for k in range(m) if k != i]
            B = [[B[r][c] - B[r][i] * B[i][c] / d for c in rest] for r in rest]
            continue
        pair = next(((r, c) for r in range(m) for c in range(r + 1, m) if B[r][c] != 0), None)
        if pair is None:
            break
        r0, c0 = pair
        b = B[r0][c0]
        neg += 1
        rest = [k for k in range(m) if k not in pair]
        # inverse of [[0, b], [b, 0]] is [[0, 1/b], [1/b, 0]]
        B = [[B[r][c] - (B[r][r0] * B[c0][c] + B[r][c0] * B[r0][c]) / b for c in rest]
             for r in rest]
    return neg


def bisection_eigenvalues(A, tol: float = 1e-12) -> list[float]:
    """All eigenvalues of a small symmetric matrix, ascending."""
    n = len(A)
    r = max(sum(abs(float(A[i][j])) for j in range(n)) for i in range(n)) + 1.0
    out = []
    for k in range(n):
        lo, hi = -r, r
        while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
            mid = (lo + hi) / 2
            if count_below(A, mid) > k:
                hi = mid
            else:
                lo = mid
        out.append((lo + hi) / 2)
    return out


def charpoly(A) -> list[float]:
    """Coefficients of ``det(t I - A)`` (leading 1 first), Faddeev-LeVerrier."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    coeffs = [1.0]
    Mk = np.zeros_like(A)
    I = np.eye(n)
    for k in range(1, n + 1):
        Mk = A @ Mk + coeffs[-1] * I
        coeffs.append(-np.trace(A @ Mk) / k)
    return coeffs


def charpoly_value(A, t: float) -> float:
    v = 0.0
    for c in charpoly(A):
        v = v * t + c
    return v


# -- graphs -------------------------------------------------------------------

def random_connected_graph(rng: random.Random, n: int, extra: float = 0.15,
                           wmin: float = 0.1, wmax: float = 10.0):
    """Random spanning tree plus extra edges; returns (vertices, weights)."""
    verts = [f"v{i}" for i in range(n)]
    weights = {}
    for i in range(1, n):
        j = rng.randrange(i)
        weights[(verts[j], verts[i])] = rng.uniform(wmin, wmax)
    for i in range(n):
        for j in range(i + 1, n):
            if (verts[i], verts[j]) not in weights and rng.random() < extra * 3 / n:
                weights[(verts[i], verts[j])] = rng.uniform(wmin, wmax)
    return verts, weights


def laplacian_loops(verts, weights, u):
    """``(Lap u)(x) = sum_y mu_xy (u(x) - u(y))`` by looping over edges."""
    out = {x: 0.0 for x in verts}
    for (a, b), w in weights.items():
        out[a] += w * (u[a] - u[b])
        out[b] += w * (u[b] - u[a])
    return out


def energy_loops(weights, u, v) -> float:
    return sum(w * (u[a] - u[b]) * (v[a] - v[b]) for (a, b), w in weights.items())


# -- families -----------------------------------------------------------------

def root_path_edges(word: str) -> set[tuple[str, str]]:
    """Edges of the path from the root to ``word`` on the binary tree."""
    return {(word[:i], word[:i + 1]) for i in range(len(word))}


def tree_overlap(x: str, y: str) -> int:
    return len(root_path_edges(x) & root_path_edges(y))


def segment_kernel(x: int, y: int) -> int:
    if x * y <= 0:
        return 0
    return min(abs(x), abs(y))


def min_matrix(n: int) -> np.ndarray:
    return np.array([[min(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)], dtype=float)
