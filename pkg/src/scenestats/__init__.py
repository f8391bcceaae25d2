"""Numerosity and visual-magnitude statistics for annotated scene datasets."""

__version__ = "0.1.0"

from .calibration import (
    CalibrationReport,
    KsResult,
    calibrate,
    ks_two_sample,
    mean_absolute_error,
    threshold_grid,
)
from .coco import CocoDataset, parse_coco
from .errors import ScenestatsError
from .filtering import FilterConfig, FilteredScene, filter_scene, numerosity
from .geometry import convex_hull, hull_area, iou, object_hull_points, shoelace_area, union_area
from .lexicon import (
    EmbeddingTable,
    LabelResolution,
    Taxonomy,
    TaxonomyCategory,
    cosine_similarity,
    parse_llm_response,
    resolve_label,
    resolve_labels,
)
from .magnitudes import MAGNITUDE_VARIABLES, MagnitudeVector, extract_magnitudes
from .raster import bitmap_to_mask, bitmap_to_rle_counts, mask_to_bitmap, rasterize_polygons, rle_counts_to_bitmap
from .rle import rle_decode, rle_encode
from .stats import (
    BoxplotRow,
    CorrelationMatrix,
    NumerosityDistribution,
    ZipfFit,
    boxplot_summary,
    correlation_matrix,
    fit_zipf,
    holm_adjust,
    matrix_consistency,
    numerosity_distribution,
    pearson,
)
from .synth import ItemSizeLaw, ScoreBands, SynthConfig, annotations_to_coco, generate
from .types import (
    AnnotationInstance,
    Detection,
    DetectionSet,
    ImageMeta,
    MaskRepr,
    SceneAnnotation,
)
from .voc import parse_voc

__all__ = [name for name in dir() if not name.startswith("_")]
