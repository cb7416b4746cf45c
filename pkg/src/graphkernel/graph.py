"""Weighted graphs, the built-in segment and dyadic-tree families, exhaustions
and the edge-list file format.

Vertices are string tokens.  Segment vertices are signed integer literals
(``"-2"``, ``"0"``, ``"3"``); tree vertices are binary words with the empty
word written ``"∅"``.  The vertex order of a graph is fixed at construction
and is used as row/column order by every matrix built from it.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import GraphError

ROOT = "∅"

SEGMENT = "segment"
TREE = "tree"
FAMILIES = (SEGMENT, TREE)

LEVEL = "level"
CUMULATIVE = "cumulative"
RULES = (LEVEL, CUMULATIVE)


def tree_sort_key(word: str):
    if word == ROOT:
        return (0, "")
    return (len(word), word)


def segment_sort_key(token: str):
    return int(token)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Finite undirected graph with positive symmetric conductances.

    Parameters
    ----------
    vertices
        Vertex tokens in canonical order.
    weights
        Map from an ordered pair ``(a, b)`` to the conductance of edge ``ab``.
        Each unordered pair is stored once, with ``a`` preceding ``b`` in
        vertex order.
    family
        ``"segment"``, ``"tree"`` or ``None`` for ingested graphs.
    base
        Designated base point, if any.
    """

    vertices: tuple[str, ...]
    weights: Mapping[tuple[str, str], float]
    family: str | None = None
    base: str | None = None
    _index: Mapping[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        index = {}
        for i, v in enumerate(self.vertices):
            if not isinstance(v, str) or not v:
                raise GraphError(f"invalid vertex id {v!r}")
            if v in index:
                raise GraphError(f"duplicate vertex {v!r}")
            index[v] = i
        clean = {}
        for (a, b), w in self.weights.items():
            if a not in index or b not in index:
                raise GraphError(f"edge ({a}, {b}) uses an unknown vertex")
            if a == b:
                raise GraphError(f"self-loop at {a!r}")
            w = float(w)
            if not math.isfinite(w) or w <= 0:
                raise GraphError(f"non-positive weight {w} on ({a}, {b})")
            key = (a, b) if index[a] < index[b] else (b, a)
            if key in clean:
                raise GraphError(f"duplicate edge ({a}, {b})")
            clean[key] = w
        if self.base is not None and self.base not in index:
            raise GraphError(f"base point {self.base!r} is not a vertex")
        object.__setattr__(self, "weights", MappingProxyType(clean))
        object.__setattr__(self, "_index", MappingProxyType(index))

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, x):
        return x in self._index

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise GraphError(f"unknown vertex {x!r}") from None

    def indices(self, xs: Iterable[str]) -> np.ndarray:
        return np.array([self.index(x) for x in xs], dtype=int)

    def weight(self, x: str, y: str) -> float:
        """Conductance of ``xy``; 0.0 when the pair is not an edge."""
        i, j = self.index(x), self.index(y)
        key = (x, y) if i < j else (y, x)
        return self.weights.get(key, 0.0)

    @cached_property
    def adjacency(self) -> Mapping[str, tuple[tuple[str, float], ...]]:
        adj = {v: [] for v in self.vertices}
        for (a, b), w in self.weights.items():
            adj[a].append((b, w))
            adj[b].append((a, w))
        return MappingProxyType({
            v: tuple(sorted(nb, key=lambda t: self._index[t[0]]))
            for v, nb in adj.items()
        })

    def neighbors(self, x: str) -> tuple[str, ...]:
        self.index(x)
        return tuple(y for y, _ in self.adjacency[x])

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Endpoint indices and conductances, one entry per unordered edge."""
        heads = np.array([self._index[a] for a, _ in self.weights], dtype=int)
        tails = np.array([self._index[b] for _, b in self.weights], dtype=int)
        w = np.array(list(self.weights.values()), dtype=float)
        for arr in (heads, tails, w):
            arr.setflags(write=False)
        return heads, tails, w

    @cached_property
    def laplacian_matrix(self) -> np.ndarray:
        """Dense matrix of the graph Laplacian in vertex order."""
        n = len(self.vertices)
        L = np.zeros((n, n))
        heads, tails, w = self.edge_arrays
        np.add.at(L, (heads, tails), -w)
        np.add.at(L, (tails, heads), -w)
        np.add.at(L, (heads, heads), w)
        np.add.at(L, (tails, tails), w)
        L.setflags(write=False)
        return L

    def require_base(self, base: str | None = None) -> str:
        base = self.base if base is None else base
        if base is None:
            raise GraphError("no base point given and the graph declares none")
        self.index(base)
        return base


def mu_total(g: WeightedGraph, x: str) -> float:
    """Total conductance at ``x``: the sum of incident edge weights."""
    g.index(x)
    return float(sum(w for _, w in g.adjacency[x]))


def is_connected(g: WeightedGraph) -> bool:
    """Breadth-first connectivity test.  The empty graph counts as connected."""
    if not g.vertices:
        return True
    return len(distances(g, g.vertices[0])) == len(g.vertices)


def distances(g: WeightedGraph, source: str) -> dict[str, int]:
    """Hop distance from ``source`` to every vertex reachable from it."""
    g.index(source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y, _ in g.adjacency[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def tree_words(depth: int, min_length: int = 0) -> list[str]:
    """Binary words of length ``min_length..depth`` in length-then-lex order."""
    words = []
    for k in range(min_length, depth + 1):
        if k == 0:
            words.append(ROOT)
        else:
            words.extend("".join(w) for w in product("01", repeat=k))
    return words


def word_length(x: str) -> int:
    return 0 if x == ROOT else len(x)


def parent(x: str) -> str:
    if x == ROOT:
        raise GraphError("the root has no parent")
    return x[:-1] or ROOT


def make_family(kind: str, size: int) -> WeightedGraph:
    """Finite instance of a built-in family with unit conductances.

    ``segment`` of size n has vertices -n..n and edges (j, j+1).  ``tree`` of
    size k holds every binary word of length at most k, with edges from each
    word to its two one-letter extensions.
    """
    if isinstance(size, bool) or not isinstance(size, (int, np.integer)) or size < 1:
        raise GraphError(f"family size must be a positive integer, got {size!r}")
    size = int(size)
    if kind == SEGMENT:
        verts = tuple(str(j) for j in range(-size, size + 1))
        weights = {(str(j), str(j + 1)): 1.0 for j in range(-size, size)}
        return WeightedGraph(verts, weights, family=SEGMENT, base="0")
    if kind == TREE:
        verts = tuple(tree_words(size))
        weights = {(parent(w), w): 1.0 for w in verts if w != ROOT}
        return WeightedGraph(verts, weights, family=TREE, base=ROOT)
    raise GraphError(f"unknown family {kind!r}; expected one of {FAMILIES}")


@dataclass(frozen=True)
class GraphFamily:
    """A graph source together with its base point and exhaustion rules.

    ``kind`` is ``"segment"``, ``"tree"`` or ``"file"``; file families carry
    the parsed graph, whose ``base`` line supplies the base point.
    """

    kind: str
    graph: WeightedGraph | None = None

    def __post_init__(self):
        if self.kind == "file":
            if self.graph is None:
                raise GraphError("file family needs a loaded graph")
            self.graph.require_base()
        elif self.kind not in FAMILIES:
            raise GraphError(f"unknown family {self.kind!r}")

    @property
    def base_point(self) -> str:
        if self.kind == SEGMENT:
            return "0"
        if self.kind == TREE:
            return ROOT
        return self.graph.base

    def instance(self, size: int | None = None) -> WeightedGraph:
        if self.kind == "file":
            return self.graph
        if size is None:
            raise GraphError(f"{self.kind} family needs a size")
        return make_family(self.kind, size)


def exhaustion(g: WeightedGraph, rule: str, j: int, base: str | None = None) -> list[str]:
    """The j-th exhaustion set, graded by hop distance from the base point.

    ``cumulative`` returns every vertex at distance 1..j (nested in j);
    ``level`` returns the vertices at distance exactly j.  On the segment the
    cumulative set is {-j..-1, 1..j}; on the tree the level set is the words
    of length j.  Vertices come back in the graph's canonical order.
    """
    if rule not in RULES:
        raise GraphError(f"unknown exhaustion rule {rule!r}; expected one of {RULES}")
    if j < 1:
        raise GraphError(f"exhaustion index must be >= 1, got {j}")
    base = g.require_base(base)
    dist = distances(g, base)
    if max(dist.values()) < j:
        raise GraphError(f"graph radius {max(dist.values())} is smaller than index {j}")
    if rule == LEVEL:
        keep = {v for v, d in dist.items() if d == j}
    else:
        keep = {v for v, d in dist.items() if 1 <= d <= j}
    return [v for v in g.vertices if v in keep]


@dataclass(frozen=True)
class EdgePath:
    edges: tuple[tuple[str, str], ...]

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def path_to_root(g: WeightedGraph, x: str) -> EdgePath:
    """The chain of edges from the root down to ``x`` in a tree instance."""
    if g.family != TREE:
        raise GraphError("path_to_root needs a tree-family graph")
    g.index(x)
    if x == ROOT:
        raise GraphError("the root has an empty path")
    return EdgePath(tuple((x[:k] or ROOT, x[:k + 1]) for k in range(len(x))))


def load_graph(text: str) -> WeightedGraph:
    """Parse the edge-list format.

    One item per line: ``<id> <id> <weight>`` for an edge, ``vertex <id>``
    for an isolated vertex and ``base <id>`` for the base point.  ``#``
    starts a comment.  Vertices keep first-appearance order.
    """
    order: dict[str, None] = {}
    weights: dict[tuple[str, str], float] = {}
    seen: set[frozenset] = set()
    base = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] in ("vertex", "base") and len(tok) == 2:
            order.setdefault(tok[1], None)
            if tok[0] == "base":
                if base is not None:
                    raise GraphError(f"line {lineno}: base point declared twice")
                base = tok[1]
            continue
        if len(tok) != 3:
            raise GraphError(f"line {lineno}: malformed line {raw!r}")
        a, b, wtxt = tok
        try:
            w = float(wtxt)
        except ValueError:
            raise GraphError(f"line {lineno}: bad weight {wtxt!r}") from None
        if a == b:
            raise GraphError(f"line {lineno}: self-loop at {a!r}")
        if not math.isfinite(w) or w <= 0:
            raise GraphError(f"line {lineno}: non-positive weight {wtxt}")
        pair = frozenset((a, b))
        if pair in seen:
            raise GraphError(f"line {lineno}: duplicate edge {a} {b}")
        seen.add(pair)
        order.setdefault(a, None)
        order.setdefault(b, None)
        weights[(a, b)] = w
    return WeightedGraph(tuple(order), weights, family=None, base=base)


def dump_graph(g: WeightedGraph) -> str:
    """Render ``g`` in the edge-list format accepted by :func:`load_graph`."""
    lines = [f"{a} {b} {w:.17g}" for (a, b), w in g.weights.items()]
    touched = {v for e in g.weights for v in e}
    lines.extend(f"vertex {v}" for v in g.vertices if v not in touched)
    if g.base is not None:
        lines.append(f"base {g.base}")
    return "\n".join(lines) + "\n"


def check_subset(g: WeightedGraph, F: Sequence[str], base: str) -> None:
    if not F:
        raise GraphError("vertex set F is empty")
    if len(set(F)) != len(F):
        raise GraphError("vertex set F has repeated entries")
    for x in F:
        g.index(x)
    if base in F:
        raise GraphError(f"base point {base!r} may not belong to F")
