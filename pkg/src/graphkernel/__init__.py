"""Finite-section spectral analysis of graph Laplacians on the energy space.

The central objects are dipoles ``v_x`` (solutions of ``Lap v = delta_x -
delta_base``), their energy Gram kernel ``M(x, y) = <v_x, v_y>_E`` and the
compression of the Laplacian to the span of ``{v_x : x in F}`` for finite
vertex sets ``F``.
"""
from .dipole import (ChargeDistribution, closed_form_value, decompose_charge,
                     dipole_closed_form, solve_dipole, solve_dipoles, solve_poisson,
                     variation_radius)
from .eigen import SpectralDecomposition, eig_residual, orthonormality_error, symmetric_eig
from .energy import (EnergyVector, dirac, energy_gram, energy_inner, energy_norm_sq,
                     laplacian_apply, laplacian_energy_vector, laplacian_vector)
from .errors import ContractViolation, GraphError
from .graph import (CUMULATIVE, LEVEL, ROOT, GraphFamily, WeightedGraph, exhaustion,
                    load_graph, dump_graph, make_family, mu_total, path_to_root)
from .greens import GreensReport, greens_column, greens_laplacian_check
from .kernel import (KernelMatrix, KernelVector, gram_closed_form, gram_factorization,
                     gram_from_energy, gram_from_values, kernel_vector_eval,
                     kernel_vector_inner, laplacian_kernel, psd_check, szego_gram,
                     tree_level_recursion)
from .tables import emit_table
from .truncation import (SweepResult, TruncationData, build_truncation,
                         diagonal_limit_residuals, gap_sweep, project_delta, rank1_residual,
                         reconstruction_error, onb_error, symmetry_criterion,
                         truncated_laplacian, truncated_norm)

__version__ = "0.1.0"

__all__ = [
    "CUMULATIVE",
    "ChargeDistribution",
    "ContractViolation",
    "EnergyVector",
    "GraphError",
    "GraphFamily",
    "GreensReport",
    "KernelMatrix",
    "KernelVector",
    "LEVEL",
    "ROOT",
    "SpectralDecomposition",
    "SweepResult",
    "TruncationData",
    "WeightedGraph",
    "build_truncation",
    "closed_form_value",
    "decompose_charge",
    "diagonal_limit_residuals",
    "dipole_closed_form",
    "dirac",
    "dump_graph",
    "eig_residual",
    "emit_table",
    "energy_gram",
    "energy_inner",
    "energy_norm_sq",
    "exhaustion",
    "gap_sweep",
    "gram_closed_form",
    "gram_factorization",
    "gram_from_energy",
    "gram_from_values",
    "greens_column",
    "greens_laplacian_check",
    "kernel_vector_eval",
    "kernel_vector_inner",
    "laplacian_apply",
    "laplacian_energy_vector",
    "laplacian_kernel",
    "laplacian_vector",
    "load_graph",
    "make_family",
    "mu_total",
    "onb_error",
    "orthonormality_error",
    "path_to_root",
    "project_delta",
    "psd_check",
    "rank1_residual",
    "reconstruction_error",
    "solve_dipole",
    "solve_dipoles",
    "solve_poisson",
    "symmetric_eig",
    "symmetry_criterion",
    "szego_gram",
    "tree_level_recursion",
    "truncated_laplacian",
    "truncated_norm",
    "variation_radius",
]
