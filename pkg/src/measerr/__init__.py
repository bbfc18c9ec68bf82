"""Mean estimation under measurement error: classical and difference-type estimators,
first-order bias/MSE, an expansion-based cross-check and a Monte Carlo harness."""

from .population import (
    CONSUMPTION_INCOME,
    DomainError,
    MomentSet,
    PopulationSummary,
    derive_moments,
    validate_summary,
)
from .proposed import (
    ClassContext,
    ClassParams,
    Member,
    MseDecomposition,
    OptimalScalars,
    bias_tp,
    build_context,
    member_catalog,
    min_mse,
    mse_decomposition,
    optimal_scalars,
    point_estimate_tp,
)
from .srs import (
    EstimatorReport,
    SampleStats,
    classical_bias,
    classical_mse,
    classical_optimum,
    point_estimate,
    pre,
)
from .stratified import (
    StratifiedDesign,
    StratumMoments,
    StratumSummary,
    d_opt,
    derive_stratum_moments,
    stratified_class_mse,
    stratified_classical_mse,
)

__version__ = "0.1.0"
