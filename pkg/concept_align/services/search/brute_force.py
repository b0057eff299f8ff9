"""
البحث الشامل: مرجع التحقق لكل الخوارزميات الأخرى
"""
import time
from functools import cmp_to_key
from math import perm
from typing import List, Optional, Sequence, Tuple

from ...core.config import Settings
from ...core.errors import ConfigError, SearchCapExceededError
from ...core.operators import ALL_OPERATORS, Operator
from ...core.rational import Rational
from ...utils.logging import logger
from ..labels.evaluation import mask_iou
from ..labels.explanation import Explanation, SearchStats
from ..labels.label import Label, canonicalize
from ..masks.bit_matrix import BitMatrix
from ..masks.dataset import ConceptDataset, NeuronMask

Ranked = Tuple[Rational, str, Label]


def state_space_size(concepts: int, max_length: int, operator_count: int) -> int:
    """
    عدد التسميات اليسارية بمفاهيم مختلفة حتى الطول n:
    مجموع n_o^(k-1) * K!/(K-k)! على k من 1 إلى n
    """
    return sum(
        operator_count ** (k - 1) * perm(concepts, k)
        for k in range(1, min(max_length, concepts) + 1)
    )


def _compare(a: Ranked, b: Ranked) -> int:
    if a[0] != b[0]:
        return -1 if b[0] < a[0] else 1
    if a[1] != b[1]:
        return -1 if a[1] < b[1] else 1
    return 0


class _Ranking:
    """أفضل m تسمية مميزة بشكلها القانوني"""

    def __init__(self, size: int):
        self.size = size
        self.entries: List[Ranked] = []

    def offer(self, label: Label, value: Rational) -> None:
        if len(self.entries) >= self.size:
            worst = self.entries[-1]
            if value < worst[0]:
                return
        canonical = canonicalize(label)
        key = canonical.key()
        entry = (value, key, canonical)
        if len(self.entries) >= self.size and _compare(entry, self.entries[-1]) >= 0:
            return
        if any(e[1] == key for e in self.entries):
            return
        self.entries.append(entry)
        self.entries.sort(key=cmp_to_key(_compare))
        del self.entries[self.size:]


class BruteForce:
    def __init__(
        self,
        dataset: ConceptDataset,
        neuron: NeuronMask,
        max_length: int,
        operators: Sequence[Operator] = ALL_OPERATORS,
        cap: Optional[int] = None,
        top: int = 10,
    ):
        """
        تهيئة البحث الشامل

        Args:
            cap: الحد الأقصى لحجم فضاء البحث؛ الافتراضي من CONCEPT_ALIGN_BRUTE_FORCE_CAP
            top: عدد التسميات في الترتيب المعاد
        """
        if max_length < 1:
            raise ConfigError(f"max length must be at least 1, got {max_length}")
        if top < 1:
            raise ConfigError(f"ranking size must be at least 1, got {top}")
        neuron.check_compatible(dataset)
        self.dataset = dataset
        self.neuron = neuron
        self.max_length = max_length
        self.operators = tuple(op for op in ALL_OPERATORS if op in operators)
        self.cap = cap if cap is not None else Settings.from_env().brute_force_cap
        self.top = top
        self.stats = SearchStats()
        self._ranking = _Ranking(top)

    def run(self) -> Explanation:
        started = time.perf_counter()
        size = state_space_size(self.dataset.size, self.max_length, len(self.operators))
        if size > self.cap:
            raise SearchCapExceededError(
                f"state space of {size} labels exceeds the brute-force cap of {self.cap}"
            )
        logger.info("البحث الشامل على %d تسمية", size)

        for k in range(self.dataset.size):
            self._walk(Label.atom(k), self.dataset.mask(k))

        self.stats.elapsed_ms = (time.perf_counter() - started) * 1000.0
        ranking = [(label, label.render(self.dataset.concept_names), value) for value, _, label in self._ranking.entries]
        best_label, best_text, best_value = ranking[0]
        return Explanation(
            label=best_label,
            text=best_text,
            iou=best_value,
            stats=self.stats,
            ranking=ranking,
        )

    def _walk(self, label: Label, mask: BitMatrix) -> None:
        self.stats.visited += 1
        self._ranking.offer(label, mask_iou(mask, self.neuron))
        if label.length >= self.max_length:
            return
        self.stats.expanded += 1
        used = set(label.concepts)
        for op in self.operators:
            for k in range(self.dataset.size):
                if k in used:
                    continue
                self._walk(label.extend(op, k), op.apply(mask, self.dataset.mask(k)))


def brute_force(
    dataset: ConceptDataset,
    neuron: NeuronMask,
    max_length: int,
    operators: Sequence[Operator] = ALL_OPERATORS,
    cap: Optional[int] = None,
    top: int = 10,
) -> Explanation:
    return BruteForce(dataset, neuron, max_length, operators, cap, top).run()
