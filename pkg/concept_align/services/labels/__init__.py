"""
خدمة التسميات: التمثيل والتقييم الدقيق وقواعد التكافؤ وتصنيف الفروق
"""

from ...core.rational import ZERO, Rational
from .evaluation import evaluate_label, exact_label_quantities, iou, mask_iou, prefix_masks
from .explanation import DifferenceCategory, Explanation, SearchStats, classify_difference
from .label import (
    Label,
    canonicalize,
    equivalent_variants,
    is_expansion_allowed,
    normal_form,
    parse_label,
)

__version__ = "0.1.0"
