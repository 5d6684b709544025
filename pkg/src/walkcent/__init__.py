"""Exact and high-precision walk-based vertex centralities."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    ClusterCollisionError,
    DegenerateDiffError,
    DisconnectedGraphError,
    GraphFormatError,
    NonRealSpectrumError,
    ParameterError,
    PrecisionError,
    SingularMatrixError,
    SpuriousRootError,
    WalkcentError,
)
from .exact import (  # noqa: E402
    CharPoly,
    ExactMatrix,
    WalkTable,
    char_poly,
    cospectral,
    cospectral_classes,
    walk_counts,
    walk_regular,
)
from .graph import Graph, adjacency_matrix, automorphism_maps, parse_edge_list, parse_graph6, to_graph6  # noqa: E402
from .spectral import Precision, SpectralData, decompose, perron_vector  # noqa: E402
from .centrality import (  # noqa: E402
    CentralityReport,
    classify_equivalence,
    degree_report,
    eigenvector_centrality,
    resolvent_centrality,
    subgraph_centrality_spectral,
    subgraph_centrality_taylor,
    walk_entropy,
)
from .solver import BetaRoot, DiffFunction, build_diff, crossing_roots, refine_root, regularity_beta_search, scan  # noqa: E402
from .miner import Finding, MineStats, MineTask, mine, verify_finding  # noqa: E402
