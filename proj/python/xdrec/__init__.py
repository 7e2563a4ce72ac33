"""Cross-domain rating prediction via codebook transfer.

Thin re-export of the compiled extension; see the C++ headers for the
full contracts.
"""

from ._core import (
    AveragingMode,
    Codebook,
    CoClusterConfig,
    DataError,
    DatasetSpec,
    DatasetStats,
    EvalReport,
    FileFormat,
    MembershipMatrix,
    Method,
    NumericError,
    PredictionMatrix,
    ProtocolConfig,
    RunScore,
    SparseRatingMatrix,
    SplitSpec,
    TransferConfig,
    TransferModel,
    TriFactorization,
    binarize,
    build_codebook,
    build_matrix,
    cluster_sweep,
    codebook_reconstruction,
    decode,
    densify,
    factorize,
    fit,
    fit_baseline_mmmf,
    gradients,
    load,
    mae,
    mae_raw,
    masked_residual_sq,
    objective,
    observed_mean,
    onmtf_objective,
    ordinal_sign,
    rmse,
    rmse_raw,
    run_protocol,
    save_csv,
    smoothed_hinge,
    smoothed_hinge_grad,
    split,
    stats,
    unordered_threshold_fraction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
