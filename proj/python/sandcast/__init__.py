"""Well-tops-guided modular neural network prediction of sand fraction."""

from ._sandcast import (  # noqa: F401
    DataError,
    NumericError,
    UsageError,
    __version__,
    aem,
    blind_test,
    cc,
    check_capacity,
    filter_volume,
    ingest,
    moving_average_filter,
    predict_well,
    resample_uniform,
    rmse,
    selftest,
    synth_export,
    train,
    train_single,
    volume_predict,
    write_section,
)

__all__ = [
    "DataError",
    "NumericError",
    "UsageError",
    "__version__",
    "aem",
    "blind_test",
    "cc",
    "check_capacity",
    "filter_volume",
    "ingest",
    "moving_average_filter",
    "predict_well",
    "resample_uniform",
    "rmse",
    "selftest",
    "synth_export",
    "train",
    "train_single",
    "volume_predict",
    "write_section",
]
