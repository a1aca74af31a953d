from .pattern import (
    BeamAllocation,
    BeamHoppingPattern,
    heatmap_frame,
    load_pattern,
    save_heatmap,
    save_pattern,
)
from .probability import (
    DecodingBound,
    collision_avoidance,
    decoding_success_exact_small,
    decoding_success_lower_bound,
    uniform_decoding_bound,
)
from .quadratic import QuadraticForm, quadratic_matrix
from .report import SuccessReport, success_lower_bound

__all__ = [
    "BeamAllocation",
    "BeamHoppingPattern",
    "DecodingBound",
    "QuadraticForm",
    "SuccessReport",
    "collision_avoidance",
    "decoding_success_exact_small",
    "decoding_success_lower_bound",
    "heatmap_frame",
    "load_pattern",
    "quadratic_matrix",
    "save_heatmap",
    "save_pattern",
    "success_lower_bound",
    "uniform_decoding_bound",
]
