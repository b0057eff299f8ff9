"""
تقدير حدود كميات التسمية L = L_left op k من كميات الطرف الأيسر والمفهوم الذري k
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Union

import numpy as np

from ...core.operators import Operator
from ...core.rational import ZERO, Rational
from ..quantities.models import QUANTITY_NAMES, ConceptQuantities, NeuronSplit

Value = Union[int, np.ndarray]


class Granularity(str, Enum):
    SAMPLE = "sample"
    AGGREGATED = "aggregated"


@dataclass(frozen=True, eq=False)
class QuantityBounds:
    """
    الحد الأدنى والأعلى لكل من I^C و I^U و E^C و E^U

    القيم متجهات بطول S في مستوى العينة، وأعداد صحيحة في المستوى المجمع.
    الكميات الفريدة دقيقة دائماً؛ exact يخص الكميات المشتركة.
    degenerate يعني AND NOT بين طرفين منفصلين، وقيمة dIoU عندها صفر.
    """

    granularity: Granularity
    lo: Dict[str, Value]
    hi: Dict[str, Value]
    exact: bool = False
    degenerate: bool = False

    @classmethod
    def from_exact(cls, quantities: ConceptQuantities, granularity: Granularity) -> "QuantityBounds":
        if granularity is Granularity.SAMPLE:
            values = {name: quantities.vector(name) for name in QUANTITY_NAMES}
        else:
            values = quantities.totals()
        return cls(granularity, values, dict(values), exact=True)

    def total_lo(self, name: str) -> int:
        value = self.lo[name]
        return value if isinstance(value, int) else int(value.sum())

    def total_hi(self, name: str) -> int:
        value = self.hi[name]
        return value if isinstance(value, int) else int(value.sum())

    def diou_bounds(self, n_total: int):
        """(dIoU_min, dIoU_max) للتسمية نفسها دون توسيع"""
        if self.degenerate:
            return ZERO, ZERO
        i_min = self.total_lo("ic") + self.total_lo("iu")
        i_max = self.total_hi("ic") + self.total_hi("iu")
        u_min = n_total + self.total_lo("ec") + self.total_lo("eu")
        u_max = n_total + self.total_hi("ec") + self.total_hi("eu")
        return Rational.ratio(i_min, u_max), Rational.ratio(i_max, u_min)


def estimate_label_bounds(
    left: QuantityBounds,
    right: ConceptQuantities,
    op: Operator,
    disjoint: bool,
    split: NeuronSplit,
    granularity: Granularity,
) -> QuantityBounds:
    """
    حدود كميات التسمية بعد إضافة المفهوم right بالرابط op

    Args:
        left: حدود الطرف الأيسر بنفس المستوى المطلوب
        right: الكميات الدقيقة للمفهوم المضاف
        op: الرابط
        disjoint: المفهوم المضاف منفصل عن كل مفاهيم الطرف الأيسر
        split: مساحات |N^C| و |SE^C| للتقييد
        granularity: مستوى العينة أو المستوى المجمع
    """
    if left.granularity is not granularity:
        raise ValueError(f"left bounds are {left.granularity.value}, requested {granularity.value}")

    aggregated = granularity is Granularity.AGGREGATED
    if aggregated:
        r = right.totals()
        space = {"ic": split.nc, "ec": split.sec}
        upper, lower = min, max
    else:
        r = {name: right.vector(name) for name in QUANTITY_NAMES}
        space = {"ic": split.nc_per_sample, "ec": split.sec_per_sample}
        upper, lower = np.minimum, np.maximum

    lo: Dict[str, Value] = {}
    hi: Dict[str, Value] = {}

    # الكميات الفريدة دقيقة
    for name in ("iu", "eu"):
        if op is Operator.OR:
            lo[name] = left.lo[name] + r[name]
            hi[name] = left.hi[name] + r[name]
        elif op is Operator.AND:
            lo[name] = hi[name] = 0 if aggregated else np.zeros_like(r[name])
        else:
            lo[name], hi[name] = left.lo[name], left.hi[name]

    if disjoint:
        for name in ("ic", "ec"):
            if op is Operator.OR:
                lo[name] = left.lo[name] + r[name]
                hi[name] = left.hi[name] + r[name]
            elif op is Operator.AND:
                lo[name] = hi[name] = 0 if aggregated else np.zeros_like(r[name])
            else:
                lo[name], hi[name] = left.lo[name], left.hi[name]
        return QuantityBounds(
            granularity, lo, hi,
            exact=left.exact,
            degenerate=left.degenerate or op is Operator.AND_NOT,
        )

    for name in ("ic", "ec"):
        l_lo, l_hi, rv, s = left.lo[name], left.hi[name], r[name], space[name]
        if op is Operator.OR:
            if aggregated and name == "ic":
                lo[name] = min(l_lo, rv)
            else:
                lo[name] = lower(l_lo, rv)
            hi[name] = upper(l_hi + rv, s)
        elif op is Operator.AND:
            lo[name] = lower(l_lo + rv - s, 0)
            hi[name] = upper(l_hi, rv)
        else:
            lo[name] = lower(l_lo - rv, 0)
            hi[name] = upper(l_hi, s - rv)
    return QuantityBounds(granularity, lo, hi, exact=False, degenerate=left.degenerate)
