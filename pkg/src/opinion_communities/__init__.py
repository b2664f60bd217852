"""Community detection in graphs with decaying-confidence opinion dynamics."""
from .community import CommunityResult, communities_from_interaction_graph, communities_from_opinions, extract
from .dynamics import (
    OpinionTrace,
    SimulationConfig,
    check_convergence_bound,
    confidence_neighborhood,
    estimate_convergence_rate,
    sample_initial_opinions,
    simulate,
    step,
)
from .experiment import ExperimentReport, ExperimentSpec, delta_sweep, emit_report, run_experiment, sweep_summary
from .fixtures import load_fixture
from .graph import (
    Graph,
    Partition,
    connected_components,
    induced_subgraph,
    load_edge_list,
    partition_spanning_subgraph,
    to_dot,
)
from .quality import StabilityCurve, modularity, stability, stationary_distribution
from .spectral import (
    lambda2_check,
    mu2,
    normalized_laplacian,
    sym_eigenvalues,
    update_matrix,
    verify_eigen_correspondence,
)

__version__ = "0.1.0"
