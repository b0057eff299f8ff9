from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from ...core.rational import Rational
from .label import Label, normal_form


@dataclass
class SearchStats:
    """عدادات البحث: العقد المزارة والموسعة والمقدرة والمقصوصة"""

    visited: int = 0
    expanded: int = 0
    estimated: int = 0
    pruned: int = 0
    backprop_updates: int = 0
    elapsed_ms: float = 0.0
    levels: List[Dict[str, int]] = field(default_factory=list)

    def to_dict(self) -> Dict:
        data = asdict(self)
        if not self.levels:
            data.pop("levels")
        return data


@dataclass
class Explanation:
    """
    نتيجة البحث: أفضل تسمية وقيمة IoU الدقيقة

    Args:
        label: التسمية
        text: التسمية بأسماء المفاهيم
        iou: قيمة IoU الدقيقة
        stats: عدادات البحث
        optimal: False إذا نفدت الميزانية قبل إثبات الأمثلية
        warnings: تحذيرات مثل العصبون الفارغ
        ranking: أفضل m تسمية (للبحث الشامل فقط)
    """

    label: Label
    text: str
    iou: Rational
    stats: SearchStats
    optimal: bool = True
    warnings: List[str] = field(default_factory=list)
    ranking: Optional[List[Tuple[Label, str, Rational]]] = None

    @property
    def concepts(self) -> frozenset:
        return frozenset(self.label.concepts)


class DifferenceCategory(str, Enum):
    SAME = "Same"
    # مفاهيم مختلفة و IoU مختلف
    CAT1 = "Cat1"
    # نفس المفاهيم ببنية مختلفة و IoU مختلف
    CAT2 = "Cat2"
    # نفس IoU بتسمية مختلفة
    CAT3 = "Cat3"


def classify_difference(a: Explanation, b: Explanation) -> DifferenceCategory:
    """
    تصنيف الفرق بين تفسيرين لنفس العصبون
    """
    if normal_form(a.label).key() == normal_form(b.label).key():
        return DifferenceCategory.SAME
    if a.iou == b.iou:
        return DifferenceCategory.CAT3
    if a.concepts != b.concepts:
        return DifferenceCategory.CAT1
    return DifferenceCategory.CAT2
