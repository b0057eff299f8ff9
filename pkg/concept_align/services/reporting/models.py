"""
نماذج تقارير JSON: تشغيل واحد، مقارنة خوارزميتين، وجدول قياس الأداء
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ...core.rational import Rational
from ..labels.explanation import Explanation, SearchStats


class IouValue(BaseModel):
    """قيمة IoU ككسر دقيق مع تمثيل عشري بـ 12 خانة"""

    num: int = Field(ge=0)
    den: int = Field(ge=1)
    value: str

    @classmethod
    def from_rational(cls, value: Rational) -> "IouValue":
        return cls(num=value.num, den=value.den, value=value.decimal())


class RunStats(BaseModel):
    visited: int = Field(ge=0)
    expanded: int = Field(ge=0)
    estimated: int = Field(ge=0)
    pruned: int = Field(0, ge=0)
    backprop_updates: int = Field(0, ge=0)
    elapsed_ms: float = Field(ge=0)

    @classmethod
    def from_stats(cls, stats: SearchStats, seedless: bool = False) -> "RunStats":
        return cls(
            visited=stats.visited,
            expanded=stats.expanded,
            estimated=stats.estimated,
            pruned=stats.pruned,
            backprop_updates=stats.backprop_updates,
            elapsed_ms=0.0 if seedless else round(stats.elapsed_ms, 3),
        )


class RankedLabel(BaseModel):
    label: str
    iou: IouValue


class RunReport(BaseModel):
    """نتيجة explain لوحدة واحدة"""

    unit: str
    algorithm: str
    label: str
    iou: IouValue
    optimal_flag: bool
    stats: RunStats
    config: Dict[str, Any]
    warnings: List[str] = Field(default_factory=list)
    ranking: Optional[List[RankedLabel]] = None

    @classmethod
    def from_explanation(
        cls, unit: str, algorithm: str, explanation: Explanation, config: Dict[str, Any], seedless: bool = False
    ) -> "RunReport":
        ranking = None
        if explanation.ranking is not None:
            ranking = [
                RankedLabel(label=text, iou=IouValue.from_rational(value))
                for _, text, value in explanation.ranking
            ]
        return cls(
            unit=unit,
            algorithm=algorithm,
            label=explanation.text,
            iou=IouValue.from_rational(explanation.iou),
            optimal_flag=explanation.optimal,
            stats=RunStats.from_stats(explanation.stats, seedless),
            config=config,
            warnings=list(explanation.warnings),
            ranking=ranking,
        )


class UnitComparison(BaseModel):
    unit: str
    category: str
    optimal_label: str
    optimal_iou: IouValue
    baseline_label: str
    baseline_iou: IouValue


class ComparisonSummary(BaseModel):
    """
    نسب الفئات على كل الوحدات

    diff_pct مجموع الفئات الثلاث، وsame_pct مكمله إلى 100.
    """

    units: int = Field(ge=0)
    diff_pct: float
    cat1_pct: float
    cat2_pct: float
    cat3_pct: float
    same_pct: float
    mean_iou_optimal: float
    mean_iou_baseline: float


class ComparisonReport(BaseModel):
    baseline: str
    summary: ComparisonSummary
    units: List[UnitComparison]
    config: Dict[str, Any]


class BenchRow(BaseModel):
    algorithm: str
    units: int = Field(ge=0)
    visited_mean: float
    visited_std: float
    expanded_mean: float
    expanded_std: float
    estimated_mean: float
    estimated_std: float
    elapsed_ms_mean: float
    elapsed_ms_std: float
    mean_iou: float


class BenchReport(BaseModel):
    rows: List[BenchRow]
    config: Dict[str, Any]


class PrefixQuantities(BaseModel):
    label: str
    quantities: Dict[str, int]
    diou: str
    diou_value: str


class LabelQuantities(BaseModel):
    """كميات تسمية معطاة وكل بادئاتها"""

    label: str
    iou: IouValue
    prefixes: List[PrefixQuantities]


class QuantityReport(BaseModel):
    """ناتج stats: كميات كل مفهوم ومصفوفة التفكك وحجم فضاء البحث"""

    samples: int
    features: int
    neuron: Dict[str, int]
    concepts: List[Dict[str, Any]]
    disjoint_matrix: List[List[int]]
    state_space: Dict[str, int]
    per_sample: Optional[Dict[str, Any]] = None
    label: Optional[LabelQuantities] = None


def dump(report: BaseModel) -> Dict[str, Any]:
    return report.model_dump(mode="json", exclude_none=True)
