"""Hypothesis strategies for weighted graphs."""
import random

from hypothesis import strategies as st

from graphkernel import WeightedGraph
from oracles import random_connected_graph


@st.composite
def connected_graphs(draw, min_n=2, max_n=12):
    """Connected graph with weights in [0.1, 10] and base point ``v0``."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    verts, weights = random_connected_graph(random.Random(seed), n)
    return WeightedGraph(tuple(verts), weights, base="v0")


@st.composite
def graph_and_vertex(draw, **kw):
    g = draw(connected_graphs(**kw))
    x = draw(st.sampled_from([v for v in g.vertices if v != g.base]))
    return g, x
