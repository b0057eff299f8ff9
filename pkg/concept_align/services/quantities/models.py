from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Tuple

import numpy as np

from ...core.rational import Rational
from ..masks.bit_matrix import BitMatrix

# ترتيب الكميات الأربع في كل مكان
QUANTITY_NAMES: Tuple[str, ...] = ("ic", "iu", "ec", "eu")


@dataclass(frozen=True)
class Partition:
    """العناصر الفريدة (مفهوم واحد) والمشتركة (مفهومان فأكثر)"""

    unique: BitMatrix
    common: BitMatrix


@dataclass(frozen=True, eq=False)
class NeuronSplit:
    """
    توزيع مواضع العصبون على العناصر الفريدة والمشتركة ومساحات الزوائد

    المتجهات بطول S لكل عينة. الأقنعة الأربعة تُستخدم لحساب كميات أي تسمية.
    """

    nu_per_sample: np.ndarray
    nc_per_sample: np.ndarray
    sec_per_sample: np.ndarray
    seu_per_sample: np.ndarray
    n_total: int
    nu_mask: BitMatrix
    nc_mask: BitMatrix
    seu_mask: BitMatrix
    sec_mask: BitMatrix

    @property
    def samples(self) -> int:
        return len(self.nu_per_sample)

    @property
    def nu(self) -> int:
        return int(self.nu_per_sample.sum())

    @property
    def nc(self) -> int:
        return int(self.nc_per_sample.sum())

    @property
    def sec(self) -> int:
        return int(self.sec_per_sample.sum())

    @property
    def seu(self) -> int:
        return int(self.seu_per_sample.sum())

    def space(self, name: str) -> np.ndarray:
        """سقف كل كمية لكل عينة"""
        return {
            "ic": self.nc_per_sample,
            "iu": self.nu_per_sample,
            "ec": self.sec_per_sample,
            "eu": self.seu_per_sample,
        }[name]

    def space_total(self, name: str) -> int:
        return {"ic": self.nc, "iu": self.nu, "ec": self.sec, "eu": self.seu}[name]


@dataclass(frozen=True)
class ConceptQuantities:
    """
    التقاطعات والزوائد الفريدة والمشتركة لقناع واحد، لكل عينة
    """

    iu: np.ndarray
    ic: np.ndarray
    eu: np.ndarray
    ec: np.ndarray

    @classmethod
    def from_counts(cls, iu: Iterable[int], ic: Iterable[int], eu: Iterable[int], ec: Iterable[int]) -> "ConceptQuantities":
        return cls(*(np.asarray(list(v), dtype=np.int64) for v in (iu, ic, eu, ec)))

    def vector(self, name: str) -> np.ndarray:
        return getattr(self, name)

    @cached_property
    def _totals(self) -> Dict[str, int]:
        return {name: int(getattr(self, name).sum()) for name in QUANTITY_NAMES}

    def total(self, name: str) -> int:
        return self._totals[name]

    @property
    def iu_total(self) -> int:
        return self.total("iu")

    @property
    def ic_total(self) -> int:
        return self.total("ic")

    @property
    def eu_total(self) -> int:
        return self.total("eu")

    @property
    def ec_total(self) -> int:
        return self.total("ec")

    def totals(self) -> Dict[str, int]:
        return dict(self._totals)

    def diou(self, n_total: int) -> Rational:
        """IoU المفكك: (I^U + I^C) / (|N| + E^U + E^C)"""
        return Rational.ratio(self.iu_total + self.ic_total, n_total + self.eu_total + self.ec_total)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConceptQuantities):
            return NotImplemented
        return all(np.array_equal(self.vector(n), other.vector(n)) for n in QUANTITY_NAMES)

    def __hash__(self) -> int:
        return hash(tuple(self.vector(n).tobytes() for n in QUANTITY_NAMES))


@dataclass(frozen=True, eq=False)
class DisjointMatrix:
    """مصفوفة K×K متماثلة: صحيح إذا لم يشترك المفهومان في أي موضع"""

    matrix: np.ndarray

    def __getitem__(self, pair: Tuple[int, int]) -> bool:
        return bool(self.matrix[pair])

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def disjoint_from(self, concepts: Iterable[int]) -> np.ndarray:
        """متجه بطول K: صحيح للمفهوم المنفصل عن كل المفاهيم المعطاة"""
        rows = list(concepts)
        return self.matrix[rows].all(axis=0)

    @property
    def fully_disjoint(self) -> bool:
        off = ~np.eye(self.size, dtype=bool)
        return bool(self.matrix[off].all())


@dataclass(frozen=True, eq=False)
class TopBott:
    """
    متجهات أفضل وأسوأ تحسين ممكن لكل كمية

    top[name] بأبعاد (n-1, S): المجموع التراكمي لأكبر t قيم عبر المفاهيم عند كل عينة.
    bott[name] بطول S: أصغر قيمة عبر المفاهيم. نظيراتها المجمعة تعمل على مجاميع المفاهيم.
    """

    top: Dict[str, np.ndarray]
    bott: Dict[str, np.ndarray]
    top_agg: Dict[str, Tuple[int, ...]]
    bott_agg: Dict[str, int]
    bott_zero: Dict[str, bool]
    depth: int

    def top_t(self, name: str, t: int) -> np.ndarray:
        if t < 0 or t > self.depth:
            raise ValueError(f"budget {t} exceeds the stored Top depth {self.depth}")
        if t == 0:
            return np.zeros(self.top[name].shape[1], dtype=np.int64)
        return self.top[name][t - 1]

    def top_agg_t(self, name: str, t: int) -> int:
        if t < 0 or t > self.depth:
            raise ValueError(f"budget {t} exceeds the stored Top depth {self.depth}")
        if t == 0:
            return 0
        return self.top_agg[name][t - 1]
