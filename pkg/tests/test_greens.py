import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphkernel import (ContractViolation, EnergyVector, GraphError, energy_inner,
                         gram_closed_form, greens_column, greens_laplacian_check, make_family)
from graphkernel.graph import tree_words
from oracles import tree_overlap
from strategies import graph_and_vertex


def test_segment_column():
    v = greens_column("segment", "2", 5)
    assert list(v.values) == [0, 0, 0, 0, 0, 0, 1, 2, 2, 2, 2]


def test_tree_column_is_overlap():
    v = greens_column("tree", "01", 3)
    for y in v.host.vertices:
        assert v(y) == (0 if y == "∅" else tree_overlap("01", y))


def test_column_is_symmetric_kernel():
    words = tree_words(3, min_length=1)
    M = gram_closed_form("tree", words)
    for x in words:
        col = greens_column("tree", x, 3)
        for y in words:
            assert col(y) == M(y, x) == M(x, y)


def test_column_errors():
    with pytest.raises(GraphError):
        greens_column("segment", "0", 3)
    with pytest.raises(GraphError):
        greens_column(make_family("tree", 2), "∅")
    with pytest.raises(GraphError):
        greens_column("torus", "1")


def test_segment_report_values():
    rep = greens_laplacian_check("segment", "2", radius=5)
    assert rep.dipole_identity_residual == 0
    assert rep.laplacian["2"] == 1 and rep.laplacian["0"] == -1
    assert all(rep.laplacian[y] == 0 for y in rep.laplacian if y not in ("0", "2"))
    assert rep.kernel_formula_residual["2"] == 1
    assert "0" not in rep.kernel_formula_residual
    assert rep.neighbor_sum_residual["0"] == 1
    assert rep.kernel_formula_max > 0 and rep.neighbor_sum_max == 1


def test_tree_report_values():
    rep = greens_laplacian_check("tree", "0", radius=3)
    assert rep.dipole_identity_residual == 0
    assert rep.neighbor_sum_residual["∅"] == 1
    assert set(rep.column) == set(tree_words(2))


@pytest.mark.parametrize("family,xs", [
    ("segment", ["1", "2", "3", "4", "5", "-1", "-5"]),
    ("tree", ["0", "1", "01", "110", "0101", "10110"]),
])
def test_dipole_identity_up_to_depth_five(family, xs):
    for x in xs:
        rep = greens_laplacian_check(family, x, radius=7)
        assert rep.dipole_identity_residual <= 1e-10


def test_radius_precondition():
    with pytest.raises(GraphError, match="too small"):
        greens_laplacian_check("segment", "3", radius=4)
    with pytest.raises(GraphError):
        greens_laplacian_check("segment", "3")
    greens_laplacian_check("segment", "3", radius=5)


def test_report_json():
    rep = greens_laplacian_check("segment", "1", radius=3)
    data = json.loads(rep.to_json())
    assert data["x"] == "1"
    assert data["kernel_formula_residual"]["1"] == rep.kernel_formula_residual["1"]
    assert len(rep.rows()) == len(rep.column)


@settings(max_examples=30, deadline=None)
@given(graph_and_vertex(max_n=15))
def test_finite_graph_identity(gx):
    g, x = gx
    rep = greens_laplacian_check(g, x)
    assert rep.dipole_identity_residual <= 1e-10


@given(graph_and_vertex(max_n=15), st.lists(st.floats(-10, 10), min_size=15, max_size=15))
def test_reproducing_property(gx, vals):
    g, x = gx
    u = EnergyVector(g, g.base, np.array(vals[: len(g)]))
    col = greens_column(g, x)
    assert energy_inner(col, u) == pytest.approx(u(x) - u(g.base), abs=1e-9)


def test_contract_violation_is_raised():
    # a negative tolerance can never be met, so the check must raise
    with pytest.raises(ContractViolation):
        greens_laplacian_check("segment", "1", radius=3, tol=-1.0)
