"""Exact solvers for Maximum k-Coverage and Partial k-Dominating Set,
with hardness-reduction instance generators and brute-force verification."""

from .config import RunConfig
from .errors import (
    InputError,
    InternalInvariantError,
    MaxKCoverError,
    ParseError,
    ResourceLimitError,
)
from .hardness import (
    KhOvInstance,
    PartiteHypergraph,
    ReductionOutput,
    hyperclique_to_khov,
    khov_opt,
    khov_product,
    ov_to_maxip,
    reduce_to_cover,
    reduce_to_pds,
    regularize_full,
    regularize_r,
)
from .hypercut import (
    Bundle,
    Hyperedge,
    check_two_bundle_decomposition,
    enumerate_bundles,
    is_arity_reducing_hypercut,
    is_hyperedge,
    list_hyperedges,
    maximal_bundle_partition,
)
from .instances import (
    CoverInstance,
    PdsGraph,
    SolveResult,
    coverage_value,
    degree_profile,
    pds_to_cover,
    prune_candidates,
    prune_candidates_with_map,
)
from .oracles import CountMatrix, brute_force, count_matrix, matrix_multiply, mm_baseline
from .solvers import (
    RegularitySplit,
    max_k_cover,
    partial_ds_core,
    partial_k_dominating_set,
    regularity_split,
    regularize_and_solve,
    solve_intermediate,
    solve_large_universe,
    solve_small_universe,
)
from .sparse import (
    LayerContext,
    LayerOutcome,
    edge_solution_scan,
    independent_partial_ds,
    pds2_heavy,
    pds2_light_layer,
    pds2_sparse,
    pds2_table,
    pds_sparse,
)
from .stats import OpStats
from .triangle import SuperNodeGraph, TriangleResult, build_tripartite, max_weight_triangle

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
