"""Matrix determinants as sums over arborescences of a rooted matrix digraph."""

from .arborescence import (
    Branching,
    branching_weight,
    count_arborescences,
    det_tree_sum,
    enumerate_arborescences,
    is_arborescence,
    is_branching,
    iter_arborescences,
)
from .digraph import (
    Arc,
    MatrixDigraph,
    SymbolicMatrix,
    digraph_from_matrix,
    generic_matrix,
    matrix_from_digraph,
    merge_parallel_arcs,
    strongly_connected,
)
from .errors import ArbordetError, InputError, MissingSymbolError, PreconditionError, SizeGuardError
from .factoring import (
    FactorExpr,
    canonical_structure,
    explicit_rooting_factor,
    factor_expand,
    leaf_count,
    parse_factor_expr,
    sequential_factor,
    split_rooting,
)
from .linalg import (
    build_arc_weights,
    build_incidence,
    cauchy_binet_det,
    det_MS,
    det_WS,
    det_exact,
    verify_factorization,
)
from .reduced import (
    NormalizedReduction,
    ReductionSpec,
    det_reduced_graphical,
    det_reduced_tree_sum,
    epsilon_of,
    normalize_targets,
    reduce_matrix,
    split_modified_reduced,
)
from .transform import is_explicitly_rooted, isolate_vertex, move_arc
from .weights import (
    Polynomial,
    WeightSymbol,
    parse_polynomial,
    poly_equal,
    poly_eval,
    poly_normalize,
    weight_symbol,
)

__version__ = "0.1.0"
