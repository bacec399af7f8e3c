"""pNML linear regression.

Analytic predictive densities for ridge/least-squares hypothesis classes,
the regret ("learnability") measure, the spectral learnable-space
decomposition, and a brute-force quadrature oracle that validates the
closed forms.
"""

from pnml._core import (
    ConfidenceInterval,
    CsvError,
    Dataset,
    FittedModel,
    GenieFit,
    PnmlPrediction,
    ProfileEntry,
    QuadratureSpec,
    RidgeConfig,
    SpectralReport,
    analyze,
    build_vandermonde,
    confidence_interval,
    correlation_matrix,
    density_at,
    fit_ridge,
    genie_density_at,
    genie_fit,
    genie_refit_density,
    learnability_profile,
    leverage,
    log_loss,
    numeric_density_check,
    numeric_k,
    pnml_predict,
    predict,
    read_dataset_csv,
    regret,
    rls_update,
    write_dataset_csv,
)

__all__ = [
    "ConfidenceInterval",
    "CsvError",
    "Dataset",
    "FittedModel",
    "GenieFit",
    "PnmlPrediction",
    "ProfileEntry",
    "QuadratureSpec",
    "RidgeConfig",
    "SpectralReport",
    "analyze",
    "build_vandermonde",
    "confidence_interval",
    "correlation_matrix",
    "density_at",
    "fit_ridge",
    "genie_density_at",
    "genie_fit",
    "genie_refit_density",
    "learnability_profile",
    "leverage",
    "log_loss",
    "numeric_density_check",
    "numeric_k",
    "pnml_predict",
    "predict",
    "read_dataset_csv",
    "regret",
    "rls_update",
    "write_dataset_csv",
]

__version__ = "0.1.0"
