"""Kronecker products of dense tensors and the calculus built on them.

The package covers five layers: the product itself with index maps and a
factored lazy form (kron), eigenpair solvers and spectral composition rules
(spectral), Tucker / tensor-train / orthogonal decompositions with their
Kronecker composition (decomp), uniform hypergraph products through adjacency
tensors (hypergraph), and stability analysis of homogeneous polynomial
dynamics (dynamics). Text formats and a CLI sit on top (tensorio, cli), plus
a direct-vs-kronecker benchmark (bench).
"""

from .bench import BenchRecord, run_benchmark, summarize, write_bench_csv
from .datasets import (complete_hypergraph, random_hypergraph, random_odeco,
                       random_supersymmetric, stable_cubic_odeco, stable_cubic_tensor)
from .decomp import (OdecoDecomp, TTDecomp, TuckerDecomp, TuckerFlavor, cpd_als, cpd_als_many,
                     hosvd, kron_compose_odeco, kron_compose_tt, kron_compose_tucker,
                     odeco, odeco_as_tucker, p_mode_rank, p_mode_singular_values,
                     reconstruct, ttd, tucker_as_odeco, validate_hosvd)
from .dynamics import (DynamicsMode, ModeTest, StabilityVerdict, Trajectory, Verdict,
                       classify_stability_continuous, classify_stability_discrete,
                       simulate_continuous, simulate_discrete)
from .errors import (BudgetError, KrontenError, NoConvergenceError, ParseError,
                     ShapeError)
from .hypergraph import (Hypergraph, ProductVertex, adjacency_tensor, centrality,
                         clique_expansion, degree_vector, kron_adjacency,
                         kron_hypergraph, kron_isomorphism_witness, relabel)
from .kron import (KronFactored, element_budget, factored_mode_product,
                   factored_norms, factored_polynomial, kron, kron_index,
                   kron_inverse_index)
from .spectral import (EigenKind, Eigenpair, Eigentriple, SolverOptions,
                       compose_eigen, h_eigen_power, m_eigen_alternating, residual,
                       square_unfolding, u_eigen, z_eigen_many, z_eigen_sshopm)
from .tensor import (StructureKind, apply_polynomial, as_tensor, einstein_product,
                     fiber, fold, frobenius_norm, inner, l1_norm, mode_product,
                     norms, outer, slice_at, structure_check, subview, symmetrize,
                     unfold)
from .tensorio import (format_hypergraph, format_tensor, format_trajectory_csv,
                       read_decomp, read_hypergraph, read_tensor, write_decomp,
                       write_hypergraph, write_tensor, write_trajectory_csv)

__version__ = "0.1.0"

__all__ = [
    "BenchRecord", "run_benchmark", "summarize", "write_bench_csv",
    "complete_hypergraph", "random_hypergraph", "random_odeco",
    "random_supersymmetric", "stable_cubic_odeco", "stable_cubic_tensor",
    "OdecoDecomp", "TTDecomp", "TuckerDecomp", "TuckerFlavor", "cpd_als", "cpd_als_many",
    "hosvd", "kron_compose_odeco", "kron_compose_tt", "kron_compose_tucker",
    "odeco", "odeco_as_tucker", "p_mode_rank", "p_mode_singular_values",
    "reconstruct", "ttd", "tucker_as_odeco", "validate_hosvd",
    "DynamicsMode", "ModeTest", "StabilityVerdict", "Trajectory", "Verdict",
    "classify_stability_continuous", "classify_stability_discrete",
    "simulate_continuous", "simulate_discrete",
    "BudgetError", "KrontenError", "NoConvergenceError", "ParseError", "ShapeError",
    "Hypergraph", "ProductVertex", "adjacency_tensor", "centrality",
    "clique_expansion", "degree_vector", "kron_adjacency", "kron_hypergraph",
    "kron_isomorphism_witness", "relabel",
    "KronFactored", "element_budget", "factored_mode_product", "factored_norms",
    "factored_polynomial", "kron", "kron_index", "kron_inverse_index",
    "EigenKind", "Eigenpair", "Eigentriple", "SolverOptions", "compose_eigen",
    "h_eigen_power", "m_eigen_alternating", "residual", "square_unfolding",
    "u_eigen", "z_eigen_many", "z_eigen_sshopm",
    "StructureKind", "apply_polynomial", "as_tensor", "einstein_product", "fiber",
    "fold", "frobenius_norm", "inner", "l1_norm", "mode_product", "norms", "outer",
    "slice_at", "structure_check", "subview", "symmetrize", "unfold",
    "format_hypergraph", "format_tensor", "format_trajectory_csv",
    "read_decomp", "read_hypergraph", "read_tensor", "write_decomp",
    "write_hypergraph", "write_tensor", "write_trajectory_csv",
    "__version__",
]
