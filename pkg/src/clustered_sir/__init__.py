"""SIR epidemics on clustered configuration-model graphs.

Exact branching-process analytics (reproduction numbers, outbreak
probability, final size, vaccination thresholds) for SIR epidemics with
heterogeneous per-node infectivity on random graphs with triangles, plus
the Monte Carlo machinery to validate every prediction.
"""
from .branching import (
    AnalysisReport,
    FixedPointResult,
    PgfEvaluator,
    analyze,
    ancestor_pgf,
    backward_edge_triplet,
    backward_offspring_pgf,
    backward_offspring_pgf_vacc,
    backward_pgf_evaluator,
    backward_vacc_pgf_evaluator,
    forward_mean_matrix,
    forward_offspring_pgf,
    forward_pgf_evaluator,
    minimal_fixed_point,
    perron_root,
)
from .degrees import (
    SINGLE,
    TRIANGLE,
    DegreeDistribution,
    DegreeMoments,
    DownshiftedMeans,
    ValidationReport,
    validate_distribution,
)
from .errors import ConvergenceError, DomainError, InsufficientDataError, PmfError
from .graph import (
    ClusteringStats,
    CmcGraph,
    DegreeSequence,
    GenerationReport,
    build_graph,
    clustering_asymptotic,
    clustering_empirical,
    sample_degrees,
    write_edge_list,
)
from .simulate import (
    EpidemicConfig,
    EpidemicResult,
    MonteCarloSummary,
    estimate_forward_means,
    monte_carlo,
    simulate_once,
)
from .transmission import (
    BetaSymmetric,
    DiscreteAtoms,
    InfectiousPeriod,
    LaplaceSpec,
    TMoments,
    TransmissionLaw,
    bernoulli_endpoints,
    point_mass,
)

__all__ = [
    "AnalysisReport",
    "BetaSymmetric",
    "ClusteringStats",
    "CmcGraph",
    "ConvergenceError",
    "DegreeDistribution",
    "DegreeMoments",
    "DegreeSequence",
    "DiscreteAtoms",
    "DomainError",
    "DownshiftedMeans",
    "EpidemicConfig",
    "EpidemicResult",
    "FixedPointResult",
    "GenerationReport",
    "InfectiousPeriod",
    "InsufficientDataError",
    "LaplaceSpec",
    "MonteCarloSummary",
    "PgfEvaluator",
    "PmfError",
    "SINGLE",
    "TMoments",
    "TRIANGLE",
    "TransmissionLaw",
    "ValidationReport",
    "analyze",
    "ancestor_pgf",
    "backward_edge_triplet",
    "backward_offspring_pgf",
    "backward_offspring_pgf_vacc",
    "backward_pgf_evaluator",
    "backward_vacc_pgf_evaluator",
    "bernoulli_endpoints",
    "build_graph",
    "clustering_asymptotic",
    "clustering_empirical",
    "estimate_forward_means",
    "forward_mean_matrix",
    "forward_offspring_pgf",
    "forward_pgf_evaluator",
    "minimal_fixed_point",
    "monte_carlo",
    "perron_root",
    "point_mass",
    "sample_degrees",
    "simulate_once",
    "validate_distribution",
    "write_edge_list",
]
