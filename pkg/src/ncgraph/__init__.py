"""Exact differential geometry on finite directed graphs.

Graphs carry the universal first order calculus of their arrows. On top of
that the package builds bimodule connections, metrics, torsion, curvature,
Ricci tensors and Laplacians on functions and on 1-forms, all in exact
rational arithmetic. Spectra are reported with an exact certificate.
"""

__version__ = "0.1.0"

from .calculus import (Bracket, ExtendedCalculus, ScalarFunction, Tensor, commutator, d, extend_calculus,
                       pullback, pushforward, tensor, theta)
from .cayley import (CayleyGraph, FiniteGroup, build_group, cayley_graph, circulant_eigenvectors, cyclic_group,
                     invariant_form_laplacian, maurer_cartan, product_group, symmetric_group)
from .geometry import (ConnectionData, Metric, check_braid, check_metric_compat, cotorsion, curvature,
                       derham_cohomology, nabla, omega2_space, ricci, ricci_scalar, torsion)
from .graph import (Digraph, GraphMorphism, complete_graph, cycle_graph, format_digraph, parse_digraph,
                    path_graph, prism_graph, star_graph)
from .laplacian import (edge_laplacian_canonical, edge_laplacian_direct, edge_laplacian_general,
                        edge_spectrum_report, mgon_eigenvalues, spectrum_reports, vertex_laplacian)
from .linalg import RatMatrix, charpoly
from .poly import RatPolynomial, poly_roots

__all__ = [
    "Bracket", "CayleyGraph", "ConnectionData", "Digraph", "ExtendedCalculus", "FiniteGroup", "GraphMorphism",
    "Metric", "RatMatrix", "RatPolynomial", "ScalarFunction", "Tensor", "build_group", "cayley_graph",
    "charpoly", "check_braid", "check_metric_compat", "circulant_eigenvectors", "commutator",
    "complete_graph", "cotorsion", "curvature", "cycle_graph", "cyclic_group", "d", "derham_cohomology",
    "edge_laplacian_canonical", "edge_laplacian_direct", "edge_laplacian_general", "extend_calculus",
    "format_digraph", "invariant_form_laplacian", "maurer_cartan", "mgon_eigenvalues", "nabla",
    "omega2_space", "parse_digraph", "path_graph", "poly_roots", "prism_graph", "product_group", "pullback",
    "pushforward", "ricci", "ricci_scalar", "spectrum_reports", "star_graph", "symmetric_group", "tensor",
    "edge_spectrum_report", "theta", "torsion", "vertex_laplacian",
]
