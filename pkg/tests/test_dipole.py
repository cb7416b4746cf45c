import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphkernel import (ChargeDistribution, EnergyVector, GraphError, WeightedGraph,
                         closed_form_value, decompose_charge, dipole_closed_form, energy_inner,
                         make_family, solve_dipole, solve_dipoles, solve_poisson,
                         variation_radius)
from graphkernel.dipole import solve_grounded
from oracles import laplacian_loops, segment_kernel, solve_exact, tree_overlap
from strategies import connected_graphs, graph_and_vertex


def test_segment_dipole_closed_form():
    g = make_family("segment", 5)
    v = solve_dipole(g, "2", "0")
    assert list(v.values) == [0, 0, 0, 0, 0, 0, 1, 2, 2, 2, 2]
    w = solve_dipole(g, "-3", "0")
    assert list(w.values) == [3, 3, 3, 2, 1, 0, 0, 0, 0, 0, 0]


def test_tree_dipole_is_path_overlap():
    g = make_family("tree", 4)
    v = solve_dipole(g, "011", g.base)
    for y in g.vertices:
        expect = 0 if y == g.base else tree_overlap("011", y)
        assert v(y) == expect


def test_family_dipoles_match_exact_rationals():
    g = make_family("tree", 3)
    L = g.laplacian_matrix
    keep = [i for i, v in enumerate(g.vertices) if v != g.base]
    A = [[int(L[i, j]) for j in keep] for i in keep]
    for x in ("0", "01", "110"):
        b = [1 if g.vertices[i] == x else 0 for i in keep]
        exact = solve_exact(A, b)
        v = solve_dipole(g, x, g.base)
        assert [v(g.vertices[i]) for i in keep] == [float(q) for q in exact]


def test_closed_form_values():
    assert closed_form_value("segment", "3", "5") == 3
    assert closed_form_value("segment", "3", "-1") == 0
    assert closed_form_value("segment", "-2", "-7") == 2
    assert closed_form_value("tree", "0110", "0101") == 2
    assert closed_form_value("tree", "1", "∅") == 0
    with pytest.raises(GraphError):
        closed_form_value("cycle", "1", "2")


@pytest.mark.parametrize("family,x", [("segment", "3"), ("segment", "-1"), ("tree", "101")])
def test_closed_form_agrees_with_solve(family, x):
    r = variation_radius(family, x)
    v = dipole_closed_form(family, x, r)
    g = v.host
    assert np.array_equal(v.values, solve_dipole(g, x, g.base).values)


def test_closed_form_needs_radius():
    with pytest.raises(GraphError):
        dipole_closed_form("tree", "0101", 3)
    with pytest.raises(GraphError):
        dipole_closed_form("segment", "0", 3)


def test_dipole_errors():
    g = make_family("segment", 2)
    with pytest.raises(GraphError):
        solve_dipole(g, "1", "1")
    with pytest.raises(GraphError):
        solve_dipole(g, "1", "9")
    with pytest.raises(GraphError):
        solve_dipoles(g, ["1", "0"])
    split = WeightedGraph(("a", "b", "c"), {("a", "b"): 1.0}, base="a")
    with pytest.raises(GraphError):
        solve_dipole(split, "b", "a")


@given(graph_and_vertex(max_n=20), st.data())
def test_dipole_residual(gx, data):
    g, x = gx
    y = data.draw(st.sampled_from([v for v in g.vertices if v != x]))
    v = solve_dipole(g, x, y)
    lap = laplacian_loops(g.vertices, g.weights, v.as_dict())
    for z in g.vertices:
        assert lap[z] == pytest.approx((z == x) - (z == y), abs=1e-12)


@given(graph_and_vertex(), st.lists(st.floats(-10, 10), min_size=20, max_size=20))
def test_riesz_property(gx, vals):
    g, x = gx
    u = EnergyVector(g, g.base, np.array(vals[: len(g)]))
    v = solve_dipole(g, x, g.base)
    assert energy_inner(v, u) == pytest.approx(u(x) - u(g.base), abs=1e-10 * max(1, np.abs(u.values).max()))


@given(connected_graphs(min_n=3, max_n=15), st.data())
def test_dipole_values_are_the_gram(g, data):
    """<v_x, v_y>_E = v_x(y): both sides computed independently."""
    xs = data.draw(st.lists(st.sampled_from(g.vertices[1:]), min_size=2, max_size=2, unique=True))
    vx, vy = solve_dipoles(g, xs)
    assert energy_inner(vx, vy) == pytest.approx(vx(xs[1]), rel=1e-10, abs=1e-12)
    assert vx(xs[1]) == pytest.approx(vy(xs[0]), rel=1e-10, abs=1e-12)


@settings(max_examples=60)
@given(connected_graphs(max_n=15), st.data())
def test_poisson_methods_agree(g, data):
    support = data.draw(st.lists(st.sampled_from(g.vertices), min_size=2, max_size=5, unique=True))
    q = data.draw(st.lists(st.floats(-5, 5), min_size=len(support) - 1, max_size=len(support) - 1))
    charge = dict(zip(support, q + [-sum(q)]))
    w = ChargeDistribution(g, charge)
    a = solve_poisson(g, w, method="dipoles")
    b = solve_poisson(g, w, method="direct")
    assert np.allclose(a.values, b.values, atol=1e-10)
    lap = laplacian_loops(g.vertices, g.weights, a.as_dict())
    for z in g.vertices:
        assert lap[z] == pytest.approx(w.values.get(z, 0.0), abs=1e-9)


@given(connected_graphs(max_n=10), st.data())
def test_decomposition_reassembles(g, data):
    support = data.draw(st.lists(st.sampled_from(g.vertices), min_size=2, max_size=6, unique=True))
    q = data.draw(st.lists(st.integers(-9, 9), min_size=len(support) - 1, max_size=len(support) - 1))
    w = ChargeDistribution(g, dict(zip(support, q + [-sum(q)])))
    terms = decompose_charge(w)
    assert len(terms) <= max(0, len(w.values) - 1)
    total = {}
    for c, x, y in terms:
        assert c > 0
        total[x] = total.get(x, 0) + c
        total[y] = total.get(y, 0) - c
    for x in g.vertices:
        assert total.get(x, 0) == pytest.approx(w.values.get(x, 0.0))


def test_nonzero_total_charge_rejected():
    g = make_family("segment", 2)
    with pytest.raises(GraphError, match="not 0"):
        solve_poisson(g, {"1": 1.0})
    with pytest.raises(GraphError):
        ChargeDistribution(g, {"7": 1.0})


def test_zero_charge_gives_zero():
    g = make_family("segment", 2)
    assert not solve_poisson(g, {}).values.any()


def test_grounded_multi_rhs():
    g = make_family("segment", 2)
    rhs = np.zeros((5, 2))
    rhs[4, 0], rhs[2, 0] = 1, -1
    rhs[0, 1], rhs[2, 1] = 1, -1
    out = solve_grounded(g, rhs, "0")
    assert list(out[:, 0]) == [segment_kernel(2, t) for t in range(-2, 3)]
    assert list(out[:, 1]) == [segment_kernel(-2, t) for t in range(-2, 3)]
