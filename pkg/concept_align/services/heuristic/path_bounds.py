"""
حدود المسارات: أفضل وأسوأ تقاطع واتحاد يمكن بلوغهما بتوسيع التسمية t مرة على الأكثر
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from ...core.operators import Operator
from ...core.rational import ZERO, Rational
from ..quantities.models import NeuronSplit, TopBott
from .label_bounds import Granularity, QuantityBounds


class PathKind(str, Enum):
    OR = "OR"
    AND = "AND"
    AND_NOT = "AND NOT"
    COMBINED = "COMBINED"
    FINAL = "FINAL"

    @classmethod
    def of(cls, op: Operator) -> "PathKind":
        return cls(op.value)


@dataclass(frozen=True)
class PathEstimate:
    """مجاميع التقاطع والاتحاد لمسار واحد مع قيمتي dIoU الناتجتين"""

    kind: PathKind
    i_min: int
    i_max: int
    u_min: int
    u_max: int
    diou_min: Rational
    diou_max: Rational

    @classmethod
    def build(cls, kind: PathKind, i_min: int, i_max: int, u_min: int, u_max: int) -> "PathEstimate":
        return cls(
            kind, i_min, i_max, u_min, u_max,
            Rational.ratio(i_min, u_max),
            Rational.ratio(i_max, u_min),
        )

    @classmethod
    def zero(cls, kind: PathKind) -> "PathEstimate":
        return cls(kind, 0, 0, 0, 0, ZERO, ZERO)

    def clamp(self, envelope: "PathEstimate") -> "PathEstimate":
        """تقاطع حدين صحيحين لنفس المسار"""
        return PathEstimate.build(
            self.kind,
            max(self.i_min, envelope.i_min),
            min(self.i_max, envelope.i_max),
            max(self.u_min, envelope.u_min),
            min(self.u_max, envelope.u_max),
        )


@dataclass(frozen=True)
class PathBounds:
    """تقديرات كل المسارات لتسمية واحدة بميزانية t"""

    t: int
    estimates: Dict[PathKind, PathEstimate] = field(default_factory=dict)

    def __getitem__(self, kind: PathKind) -> PathEstimate:
        return self.estimates[kind]

    def __contains__(self, kind: PathKind) -> bool:
        return kind in self.estimates

    @property
    def kinds(self) -> Tuple[PathKind, ...]:
        return tuple(self.estimates)

    @property
    def diou_max(self) -> Rational:
        return max(e.diou_max for e in self.estimates.values())

    @property
    def diou_min(self) -> Rational:
        return max(e.diou_min for e in self.estimates.values())

    def clamp(self, envelope: "PathBounds") -> "PathBounds":
        return PathBounds(self.t, {
            kind: est.clamp(envelope[kind]) if kind in envelope else est
            for kind, est in self.estimates.items()
        })


def diou_bounds(path: PathEstimate) -> Tuple[Rational, Rational]:
    """(dIoU_min, dIoU_max) لمسار واحد؛ المقام الصفري يعطي 0/1"""
    return path.diou_min, path.diou_max


def extension_kind(operators: Sequence[Operator]) -> PathKind:
    """نوع مسار التوسيع: مسار الرابط الوحيد أو المسار المدمج"""
    if len(operators) == 1:
        return PathKind.of(operators[0])
    return PathKind.COMBINED


def _final(bounds: QuantityBounds, n_total: int) -> PathEstimate:
    return PathEstimate.build(
        PathKind.FINAL,
        bounds.total_lo("ic") + bounds.total_lo("iu"),
        bounds.total_hi("ic") + bounds.total_hi("iu"),
        n_total + bounds.total_lo("ec") + bounds.total_lo("eu"),
        n_total + bounds.total_hi("ec") + bounds.total_hi("eu"),
    )


class _Terms:
    """الحدود والمتجهات اللازمة لمعادلات المسارات، بمستوى العينة أو مجمعة"""

    def __init__(self, bounds: QuantityBounds, topbott: TopBott, split: NeuronSplit, t: int):
        self.aggregated = bounds.granularity is Granularity.AGGREGATED
        self.bounds = bounds
        self.topbott = topbott
        self.split = split
        self.t = t

    def lo(self, name):
        return self.bounds.lo[name]

    def hi(self, name):
        return self.bounds.hi[name]

    def space(self, name):
        return self.split.space_total(name) if self.aggregated else self.split.space(name)

    def top(self, name, t):
        return self.topbott.top_agg_t(name, t) if self.aggregated else self.topbott.top_t(name, t)

    def bott(self, name):
        return self.topbott.bott_agg[name] if self.aggregated else self.topbott.bott[name]

    def bott_is_zero(self, name) -> bool:
        if self.aggregated:
            return self.topbott.bott_agg[name] == 0
        return self.topbott.bott_zero[name]

    def minimum(self, a, b):
        return min(a, b) if self.aggregated else np.minimum(a, b)

    def maximum(self, a, b):
        return max(a, b) if self.aggregated else np.maximum(a, b)

    @staticmethod
    def total(value) -> int:
        return value if isinstance(value, int) else int(np.sum(value))


def _or_path(x: _Terms, n_total: int) -> PathEstimate:
    t = x.t
    i_max = x.minimum(x.hi("ic") + x.top("ic", t), x.space("ic")) \
        + x.minimum(x.hi("iu") + x.top("iu", t), x.space("iu"))
    u_max = x.minimum(x.hi("ec") + x.top("ec", t), x.space("ec")) \
        + x.minimum(x.hi("eu") + x.top("eu", t), x.space("eu"))

    i_min = x.lo("ic") + x.lo("iu")
    if not (x.bott_is_zero("ic") and x.bott_is_zero("iu")):
        i_min = x.maximum(i_min, x.bott("ic") + x.bott("iu"))
    e_min = x.lo("ec") + x.lo("eu")
    if not (x.bott_is_zero("ec") and x.bott_is_zero("eu")):
        e_min = x.maximum(e_min, x.bott("ec") + x.bott("eu"))

    return PathEstimate.build(
        PathKind.OR, x.total(i_min), x.total(i_max), n_total + x.total(e_min), n_total + x.total(u_max)
    )


def _and_path(x: _Terms, n_total: int) -> PathEstimate:
    i_max = x.minimum(x.hi("ic"), x.top("ic", 1))
    u_max = x.minimum(x.hi("ec"), x.top("ec", 1))
    return PathEstimate.build(PathKind.AND, 0, x.total(i_max), n_total, n_total + x.total(u_max))


def _and_not_path(x: _Terms, n_total: int) -> PathEstimate:
    ic_room = x.space("ic")
    ec_room = x.space("ec")
    if not x.bott_is_zero("ic"):
        ic_room = ic_room - x.bott("ic")
    if not x.bott_is_zero("ec"):
        ec_room = ec_room - x.bott("ec")
    i_max = x.total(x.hi("iu")) + x.total(x.minimum(x.hi("ic"), ic_room))
    u_max = x.total(x.hi("eu")) + x.total(x.minimum(x.hi("ec"), ec_room))
    return PathEstimate.build(
        PathKind.AND_NOT,
        x.total(x.lo("iu")),
        i_max,
        n_total + x.total(x.lo("eu")),
        n_total + u_max,
    )


_PATHS = {
    Operator.OR: _or_path,
    Operator.AND: _and_path,
    Operator.AND_NOT: _and_not_path,
}


def combine(estimates: Iterable[PathEstimate]) -> PathEstimate:
    """دمج المسارات: أكبر الحدود العليا وأصغر الحدود الدنيا لكل كمية"""
    estimates = list(estimates)
    return PathEstimate.build(
        PathKind.COMBINED,
        min(e.i_min for e in estimates),
        max(e.i_max for e in estimates),
        min(e.u_min for e in estimates),
        max(e.u_max for e in estimates),
    )


def estimate_path_bounds(
    label_bounds: QuantityBounds,
    topbott: TopBott,
    split: NeuronSplit,
    t: int,
    operators: Sequence[Operator],
    granularity: Optional[Granularity] = None,
    extendable: bool = True,
) -> PathBounds:
    """
    حدود كل مسار ممكن للتسمية

    Args:
        label_bounds: حدود كميات التسمية
        topbott: متجهات Top/Bott
        split: توزيع العصبون
        t: عدد المفاهيم التي ما زال يمكن إضافتها
        operators: الروابط المسموحة
        granularity: يجب أن يطابق مستوى label_bounds إن حُدد
        extendable: False إذا لم يبق توسيع قانوني، فيُنتج المسار النهائي فقط

    Returns:
        PathBounds: مسار FINAL دائماً، ومسار لكل رابط والمسار المدمج عند t >= 1
    """
    if t < 0:
        raise ValueError(f"remaining budget must be non-negative, got {t}")
    if t > topbott.depth:
        raise ValueError(f"budget {t} exceeds the stored Top depth {topbott.depth}")
    if granularity is not None and granularity is not label_bounds.granularity:
        raise ValueError(
            f"label bounds are {label_bounds.granularity.value}, requested {granularity.value}"
        )

    n_total = split.n_total
    if label_bounds.degenerate:
        kinds = [PathKind.FINAL]
        if t >= 1 and extendable:
            kinds += [PathKind.of(op) for op in operators]
            if len(operators) > 1:
                kinds.append(PathKind.COMBINED)
        return PathBounds(t, {kind: PathEstimate.zero(kind) for kind in kinds})

    estimates: Dict[PathKind, PathEstimate] = {PathKind.FINAL: _final(label_bounds, n_total)}
    if t >= 1 and extendable and operators:
        terms = _Terms(label_bounds, topbott, split, t)
        per_op = [_PATHS[op](terms, n_total) for op in operators]
        for est in per_op:
            estimates[est.kind] = est
        if len(per_op) > 1:
            estimates[PathKind.COMBINED] = combine(per_op)
    return PathBounds(t, estimates)
