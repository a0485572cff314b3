"""Combinatorial geometry of a concave relaxation of balanced graph separators."""
from .baseline import GapReport, exact_min_balanced_cut, gap_report, three_variable_grid_check
from .exceptions import (
    ConvergenceError,
    EnumerationLimitError,
    GraphFormatError,
    InfeasibleError,
    PropertyViolation,
)
from .graphs import (
    Graph,
    PartialClique,
    as_partial_clique,
    complement_components,
    enumerate_partial_cliques,
    is_biclique,
    is_complete_bipartite,
    satisfies_triangle_binary,
    unique_partial_clique_completion,
)
from .pipeline import BalancedSeparator
from .points import ZPoint
from .polytope import (
    ConstraintSystem,
    blend,
    is_edge_of_R,
    membership,
    polytope_face_rank,
    scaled_indicator,
    vertices_of_R,
)
from .psd import (
    PMOneMatrix,
    bad_triple_witness,
    biclique_gram,
    cube_edge_in_P,
    eig_min,
    is_in_P,
    is_psd_pm1,
    partial_clique_psd_threshold,
    sos_witness,
)
from .relaxation import (
    ProgramInstance,
    concavity_certificate,
    cut_embedding,
    hessian_closed_form,
    objective,
    psd_segment_check,
    region_convexity_check,
    vectors_to_z,
)
from .rounding import CutResult, HyperplaneRounding, gram_vectors, hyperplane_cut, hyperplane_round
from .solver import SolveResult, VertexCandidate, VertexSearchSolver, gamma_points, optimize_over_vertices, type1_vertices, type2_vertices

__version__ = "0.1.0"
