"""Stable dynamic network embedding via the dilated unfolded adjacency matrix.

Any label-invariant static embedding applied to the dilated unfolded matrix
yields a dynamic embedding whose time points are exchangeable wherever the
underlying behaviour is unchanged. This package provides the matrix
machinery, spectral and skip-gram embedding methods, the paired-displacement
permutation tests that probe that exchangeability, and a simulation harness.
"""

from .experiments import (
    DissimilarityMatrix,
    ExperimentReport,
    ExperimentSpec,
    dimension_sweep,
    kmeans_time_clusters,
    run_experiment,
    temporal_dissimilarity,
)
from .generators import (
    ChungLuSpec,
    DsbmSpec,
    SystemPreset,
    build_preset,
    noise_free_rank,
    sample_chung_lu,
    sample_dsbm,
    sample_gnm,
    sample_network,
)
from .graph import (
    DilatedMatrix,
    DynamicEmbedding,
    DynamicNetwork,
    UnfoldedMatrix,
    dilate,
    split_dynamic,
    unfold,
)
from .linalg import (
    ConvergenceError,
    TruncatedEig,
    TruncatedSvd,
    procrustes_align,
    truncated_eig_by_magnitude,
    truncated_svd,
)
from .methods import METHOD_NAMES, embed_network
from .skipgram import (
    SkipGramConfig,
    WalkCorpus,
    generate_walks,
    independent_node2vec,
    train_sgns,
    unfolded_node2vec,
)
from .spectral import dilated_ase, ise, ise_procrustes, omni, uase, urlse
from .testing import (
    SpatialTestSpec,
    TemporalTestSpec,
    TestResult,
    displacement_statistic,
    spatial_test,
    temporal_test,
)

__version__ = "0.1.0"
