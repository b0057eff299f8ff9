from typing import Callable, Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from ...core.operators import Operator
from ...core.rational import Rational
from ..labels.label import Label, is_expansion_allowed
from ..quantities.models import ConceptQuantities
from ..quantities.quantity_analyzer import QuantityAnalyzer
from .label_bounds import Granularity, QuantityBounds, estimate_label_bounds
from .path_bounds import PathBounds, estimate_path_bounds

PrefixLookup = Callable[[Label], Optional[ConceptQuantities]]


class HeuristicEstimator:
    def __init__(self, analyzer: QuantityAnalyzer, operators: Sequence[Operator], max_length: int):
        """
        تهيئة مقدر الحدود لعصبون ومجموعة مفاهيم

        Args:
            analyzer: الكميات الذرية ومتجهات Top/Bott ومصفوفة الانفصال
            operators: الروابط المسموحة
            max_length: الطول الأقصى للتسمية
        """
        self.analyzer = analyzer
        self.operators = tuple(operators)
        self.max_length = max_length
        self.estimated = 0
        self._atoms: Dict[Tuple[int, Granularity], QuantityBounds] = {}

    @property
    def split(self):
        return self.analyzer.split

    @property
    def concept_count(self) -> int:
        return self.analyzer.dataset.size

    def atom_bounds(self, k: int, granularity: Granularity) -> QuantityBounds:
        key = (k, granularity)
        if key not in self._atoms:
            self._atoms[key] = QuantityBounds.from_exact(self.analyzer.concept(k), granularity)
        return self._atoms[key]

    def disjoint_vector(self, label: Label) -> np.ndarray:
        return self.analyzer.disjoint.disjoint_from(label.concepts)

    def is_degenerate_step(self, label: Label, op: Operator, k: int, disjoint: Optional[np.ndarray] = None) -> bool:
        """AND NOT مع مفهوم منفصل عن كل مفاهيم التسمية لا يغير القناع"""
        if op is not Operator.AND_NOT:
            return False
        if disjoint is None:
            disjoint = self.disjoint_vector(label)
        return bool(disjoint[k])

    def has_degenerate_step(self, label: Label) -> bool:
        """تسمية تحتوي AND NOT مع مفهوم منفصل عن بادئتها؛ قيمة تقديرها صفر لا تمثل قناعها"""
        concepts = label.concepts
        matrix = self.analyzer.disjoint.matrix
        for i, (op, k) in enumerate(label.tail, start=1):
            if op is Operator.AND_NOT and bool(matrix[list(concepts[:i]), k].all()):
                return True
        return False

    def legal_children(self, label: Label, disjoint: Optional[np.ndarray] = None) -> Iterator[Tuple[Operator, int]]:
        """كل (رابط، مفهوم) مسموح وغير متدهور، بترتيب ثابت"""
        if label.length >= self.max_length:
            return
        if disjoint is None:
            disjoint = self.disjoint_vector(label)
        for op in self.operators:
            for k in range(self.concept_count):
                if not is_expansion_allowed(label, op, k):
                    continue
                if op is Operator.AND_NOT and disjoint[k]:
                    continue
                yield op, k

    def has_legal_child(self, label: Label, disjoint: Optional[np.ndarray] = None) -> bool:
        return next(self.legal_children(label, disjoint), None) is not None

    def label_bounds(
        self,
        label: Label,
        granularity: Granularity,
        lookup: Optional[PrefixLookup] = None,
    ) -> QuantityBounds:
        """
        حدود كميات التسمية بالبدء من أطول بادئة معروفة بدقة
        """
        start = 1
        bounds = self.atom_bounds(label.head, granularity)
        if lookup is not None:
            for length in range(label.length, 1, -1):
                exact = lookup(label.prefix(length))
                if exact is not None:
                    bounds = QuantityBounds.from_exact(exact, granularity)
                    start = length
                    break
        return self.extend_bounds(label, bounds, start, granularity)

    def extend_bounds(self, label: Label, bounds: QuantityBounds, start: int, granularity: Granularity) -> QuantityBounds:
        """متابعة التقدير من بادئة بطول start حتى نهاية التسمية"""
        concepts = label.concepts
        disjoint = self.analyzer.disjoint.matrix
        for i in range(start, label.length):
            op, k = label.tail[i - 1]
            apart = bool(disjoint[list(concepts[:i]), k].all())
            bounds = estimate_label_bounds(bounds, self.analyzer.concept(k), op, apart, self.split, granularity)
        return bounds

    def child_bounds(
        self,
        parent_bounds: QuantityBounds,
        op: Operator,
        k: int,
        disjoint: np.ndarray,
    ) -> QuantityBounds:
        return estimate_label_bounds(
            parent_bounds, self.analyzer.concept(k), op, bool(disjoint[k]), self.split, parent_bounds.granularity
        )

    def paths(self, label: Label, bounds: QuantityBounds, extendable: Optional[bool] = None) -> PathBounds:
        """حدود المسارات مع عد التقديرات"""
        t = self.max_length - label.length
        if extendable is None:
            extendable = t >= 1 and self.has_legal_child(label)
        self.estimated += 1
        return estimate_path_bounds(bounds, self.analyzer.topbott, self.split, t, self.operators, extendable=extendable)

    def sample_paths(
        self,
        label: Label,
        lookup: Optional[PrefixLookup] = None,
        envelope: Optional[PathBounds] = None,
        extendable: Optional[bool] = None,
    ) -> Tuple[QuantityBounds, PathBounds]:
        """
        حدود مستوى العينة مقيدة بالحدود المجمعة

        Args:
            envelope: الحدود المجمعة لنفس التسمية إن وُجدت
        """
        if extendable is None:
            extendable = label.length < self.max_length and self.has_legal_child(label)
        bounds = self.label_bounds(label, Granularity.SAMPLE, lookup)
        paths = self.paths(label, bounds, extendable)
        if envelope is None:
            aggregated = self.label_bounds(label, Granularity.AGGREGATED, lookup)
            envelope = estimate_path_bounds(
                aggregated, self.analyzer.topbott, self.split, paths.t, self.operators, extendable=extendable
            )
        return bounds, paths.clamp(envelope)

    def final_diou_max(self, bounds: QuantityBounds) -> Rational:
        return bounds.diou_bounds(self.split.n_total)[1]
