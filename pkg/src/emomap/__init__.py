"""Emotion representation mapping toolkit.

Converts emotion lexicons between the dimensional VAD format and the
discrete Basic-Emotions (BE5) format with per-dimension kNN regression,
evaluates the mappings against human reliability, and builds new lexicon
resources with descriptive reports.
"""

from .build import BuildManifest, CrossCorrelation, build, cross_corr, describe, top_k
from .errors import (
    DataError,
    DegenerateStatisticsError,
    EmomapError,
    FormatMismatchError,
)
from .evaluate import EvalConfig, eval_cross_bagged, eval_cross_pair, eval_mono
from .knn import KnnModel, fit, load_model, map_lexicon, predict, save_model
from .lexicon import (
    BE5,
    PRESETS,
    VA,
    VAD,
    FormatDescriptor,
    Lexicon,
    MatchPolicy,
    MergedLexicon,
    ParseOptions,
    intersect,
    parse_lexicon,
    parse_merged,
    rescale,
    write_lexicon,
    write_merged,
)
from .stats import (
    CorrelationResult,
    IsrFloor,
    isr,
    isr_floor,
    pearson,
    t_test_one_sample_one_tailed,
    z_test_correlations_one_tailed,
)

__version__ = "0.1.0"
