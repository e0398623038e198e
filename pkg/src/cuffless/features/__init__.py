"""Per-beat features, beat averaging, grouping and tabular export."""

from .aggregate import aggregate_features
from .beat import compute_beat_features
from .grouping import (
    APPENDIX_B_GROUPING,
    GROUPING_PRESETS,
    TABLE1_GROUPING,
    GroupedFeatures,
    GroupingConfig,
    get_grouping,
    group_features,
)
from .pipeline import (
    ExtractionFault,
    ExtractionResult,
    ExtractionSettings,
    extract_features,
    extract_record_features,
)
from .table import read_feature_table, write_feature_table
from .vectors import (
    FEATURE_NAMES,
    N_FEATURES,
    BeatFeatureVector,
    FeatureVector,
    RecordMeta,
    feature_number,
)

__all__ = [
    "compute_beat_features",
    "aggregate_features",
    "group_features",
    "get_grouping",
    "extract_record_features",
    "extract_features",
    "read_feature_table",
    "write_feature_table",
    "feature_number",
    "FEATURE_NAMES",
    "N_FEATURES",
    "GROUPING_PRESETS",
    "TABLE1_GROUPING",
    "APPENDIX_B_GROUPING",
    "BeatFeatureVector",
    "FeatureVector",
    "RecordMeta",
    "GroupedFeatures",
    "GroupingConfig",
    "ExtractionFault",
    "ExtractionResult",
    "ExtractionSettings",
]
