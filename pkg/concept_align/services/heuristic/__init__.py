"""
خدمة الاستدلال: حدود كميات التسميات وحدود المسارات
"""

from .heuristic_estimator import HeuristicEstimator
from .label_bounds import Granularity, QuantityBounds, estimate_label_bounds
from .path_bounds import (
    PathBounds,
    PathEstimate,
    PathKind,
    combine,
    diou_bounds,
    estimate_path_bounds,
    extension_kind,
)

__version__ = "0.1.0"
