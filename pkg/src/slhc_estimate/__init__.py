"""Single-linkage hierarchical clustering as a statistical estimator.

Estimates the ultrametric (dendrogram) of an unknown metric from noisy
pairwise-distance measurements, with the geometry and Monte Carlo
machinery needed to study the estimator's behaviour.
"""

from .dendrogram import (
    Dendrogram,
    dendrogram_of,
    l1_error,
    same_structure,
    ultrametric_of,
)
from .edges import (
    EdgeVector,
    MetricVector,
    UltraMetric,
    edge_index,
    edge_pair,
    is_generic,
    is_metric,
    is_ultrametric,
    read_edge_vector,
    write_edge_vector,
)
from .estimators import (
    consistent_estimator,
    mpple,
    onoff_split,
    partial_profile_loglik,
    slhc_estimator,
)
from .harness import (
    SweepConfig,
    SweepRow,
    TrialRecord,
    emit_csv,
    run_n_sweep,
    run_sigma_sweep,
    run_sweep,
    sample_ground_truth_metric,
)
from .noise import (
    NoiseModel,
    get_model,
    log_density,
    log_g,
    lognormal,
    mle_theta,
    monotonicity_report,
    sample,
)
from .slhc import (
    SamplingBudgetError,
    in_fiber,
    is_mst,
    minimax_path_bruteforce,
    mst_energy,
    sample_fiber,
    single_linkage,
)
from .trees import (
    CapacityError,
    SpanningTree,
    WeightedSpanningTree,
    all_msts,
    all_spanning_trees,
    kruskal_distance,
    mst,
    path_edges,
    restrict,
    tree_metric,
    ultrametric_from_tree,
)

__version__ = "0.1.0"
