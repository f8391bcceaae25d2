"""Model-pipeline adapter emitting the scenestats detection interchange format."""

__version__ = "0.1.0"

from .annotate import AnnotationOutcome, annotate_directory, annotate_image
from .backends import (
    Detector,
    HttpLabelModel,
    LabelModel,
    ReplayDetector,
    ReplayLabelModel,
    ReplaySegmenter,
    Segmenter,
    replay_backends,
)
from .config import DEFAULT_PROMPT_TEMPLATE, AdapterConfig
from .errors import AdapterError
from .images import image_dimensions
from .rle import decode_counts, encode_counts
from .transcript import TranscriptRecorder, TranscriptStore
from .validate import (
    identification_code,
    parse_label_response,
    validate_interchange_record,
)

__all__ = [name for name in dir() if not name.startswith("_")]
