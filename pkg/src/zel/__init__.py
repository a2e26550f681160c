"""Hard instances, canonical solutions, tight-span embeddings and diagnostics
for 0-extension with Steiner nodes."""

from .errors import EPS, ZelError
from .graph import (
    BfsTree,
    FlowPath,
    FlowResult,
    Graph,
    bfs_tree,
    conductance_estimate,
    diameter,
    girth,
    max_flow,
    shortest_distances,
    shortest_path_unique,
)
from .instance import (
    Instance,
    InstanceDiagnostics,
    build_instance,
    instance_diagnostics,
    remove_short_cycles,
    sample_union_graph,
    terminal_count,
)
from .metricspace import (
    Membership,
    MembershipResult,
    SemiMetric,
    TightSpanPoint,
    check_agk_feasibility,
    check_terminal_preservation,
    terminal_vector,
    tight_span_membership,
    validate_semimetric,
)
from .projection import (
    TightnessGraph,
    is_extreme_point,
    project_point,
    project_vertex,
    tightness_graph,
)
from .solution import (
    CanonicalSolution,
    CaseReport,
    Partition,
    Solution,
    canonical_cost,
    canonical_delta,
    case_diagnostics,
    cost,
    friendship,
    perturbed_solution,
    random_canonical_solution,
    singleton_solution,
    unfriendly_edge_count,
    zero_extension_solution,
)
from .continuization import (
    ConPoint,
    EmbeddingParams,
    GirthSampleStats,
    RoundingResult,
    con_distance,
    embed_girth,
    embed_tree,
    monte_carlo_girth_embedding,
    nu,
    round_to_canonical,
    rounding_bound_holds,
)
from .solvers import (
    SolveBudget,
    brute_canonical,
    brute_zero_ext,
    local_search_canonical,
    lp_feasible_value,
)
from .harness import (
    ExperimentConfig,
    GapRecord,
    emit_report,
    run_gap_experiment,
    size_function,
)

__version__ = "0.1.0"
