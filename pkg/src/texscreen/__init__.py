"""Texture-based adulteration screening toolkit."""

from .classifier import (
    LinearModel,
    SolverConfig,
    TrainingSet,
    decision_value,
    format_model,
    parse_model,
    predict,
    train_csvc,
)
from .dataset import (
    Manifest,
    ManifestEntry,
    ManifestError,
    SyntheticSpec,
    filter_group,
    generate_synthetic,
    load_manifest,
    serialize_manifest,
)
from .evaluation import (
    DEFAULT_RESOLUTION,
    DEFAULT_SWEEP_RESOLUTIONS,
    DatasetEntry,
    EvalReport,
    FoldResult,
    LabeledDataset,
    SweepReport,
    SweepRow,
    build_report,
    loocv,
    loocv_folds,
    render_percent,
    resolution_sweep,
)
from .features import (
    Comparator,
    FeatureKind,
    FeatureVector,
    Histogram256,
    LbpMatrix,
    concat,
    extract_feature,
    format_feature,
    gray_histogram,
    lbp_histogram,
    lbp_transform,
    normalize_l1,
    parse_feature,
    raw_counts,
)
from .imagecore import (
    GrayImage,
    PnmDecodeError,
    Resolution,
    RgbImage,
    decode_image,
    encode_pgm,
    resize_bilinear,
    to_grayscale,
)

__version__ = "0.1.0"

__all__ = [
    "Comparator",
    "DEFAULT_RESOLUTION",
    "DEFAULT_SWEEP_RESOLUTIONS",
    "DatasetEntry",
    "EvalReport",
    "FeatureKind",
    "FeatureVector",
    "FoldResult",
    "GrayImage",
    "Histogram256",
    "LabeledDataset",
    "LbpMatrix",
    "LinearModel",
    "Manifest",
    "ManifestEntry",
    "ManifestError",
    "PnmDecodeError",
    "Resolution",
    "RgbImage",
    "SolverConfig",
    "SweepReport",
    "SweepRow",
    "SyntheticSpec",
    "TrainingSet",
    "build_report",
    "concat",
    "decision_value",
    "decode_image",
    "encode_pgm",
    "extract_feature",
    "filter_group",
    "format_feature",
    "format_model",
    "generate_synthetic",
    "gray_histogram",
    "lbp_histogram",
    "lbp_transform",
    "load_manifest",
    "loocv",
    "loocv_folds",
    "normalize_l1",
    "parse_feature",
    "parse_model",
    "predict",
    "raw_counts",
    "render_percent",
    "resize_bilinear",
    "resolution_sweep",
    "serialize_manifest",
    "to_grayscale",
    "train_csvc",
]
