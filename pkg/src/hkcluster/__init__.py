"""Heat kernel pagerank diffusion and local graph clustering."""

from .gen import GenParams, barabasi_albert, powerlaw_cluster, watts_strogatz_connected
from .graph import (
    Graph,
    VertexSet,
    cheeger_ratio,
    dump_edge_list,
    edge_boundary,
    load_edge_list,
    local_cheeger_brute,
    parse_edge_list,
    volume,
)
from .hkpr import (
    ApproxDistribution,
    Distribution,
    HkprParams,
    default_sample_count,
    default_walk_cap,
    degree_seed_dist,
    hkpr_approx_seed,
    hkpr_exact,
    is_eps_approximate,
    pagerank_exact,
    poisson_weights,
    random_walk,
    sample_walk_length,
    sample_walk_lengths,
)
from .metrics import (
    ErrorReport,
    avg_l1_error,
    eps_error,
    intersection_difference,
    topk_intersection_difference,
)
from .spectral import dirichlet_lambda, restricted_laplacian
from .sweep import (
    ClusterParams,
    ClusterResult,
    CompareRow,
    RankedList,
    SweepPoint,
    cluster_hkpr,
    compare_clusters,
    compute_alpha,
    compute_t,
    min_ratio_sweep,
    rank_by_prob_per_degree,
    rank_by_value,
    sigma_local_cheeger,
    sweep_cuts,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxDistribution",
    "ClusterParams",
    "ClusterResult",
    "CompareRow",
    "Distribution",
    "ErrorReport",
    "GenParams",
    "Graph",
    "HkprParams",
    "RankedList",
    "SweepPoint",
    "VertexSet",
    "avg_l1_error",
    "barabasi_albert",
    "cheeger_ratio",
    "cluster_hkpr",
    "compare_clusters",
    "compute_alpha",
    "compute_t",
    "default_sample_count",
    "default_walk_cap",
    "degree_seed_dist",
    "dirichlet_lambda",
    "dump_edge_list",
    "edge_boundary",
    "eps_error",
    "hkpr_approx_seed",
    "hkpr_exact",
    "intersection_difference",
    "is_eps_approximate",
    "load_edge_list",
    "local_cheeger_brute",
    "min_ratio_sweep",
    "pagerank_exact",
    "parse_edge_list",
    "poisson_weights",
    "powerlaw_cluster",
    "random_walk",
    "rank_by_prob_per_degree",
    "rank_by_value",
    "restricted_laplacian",
    "sample_walk_length",
    "sample_walk_lengths",
    "sigma_local_cheeger",
    "sweep_cuts",
    "topk_intersection_difference",
    "volume",
    "watts_strogatz_connected",
]
