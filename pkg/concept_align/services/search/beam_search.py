"""
البحث الشعاعي: النسخة العادية والنسخة الموجهة بتقديرات كميات التسمية
"""
import time
from dataclasses import dataclass
from functools import cmp_to_key
from typing import List, Optional, Set

from ...core.config import BeamConfig
from ...core.rational import Rational
from ...utils.logging import logger
from ..heuristic.heuristic_estimator import HeuristicEstimator
from ..heuristic.label_bounds import Granularity, QuantityBounds, estimate_label_bounds
from ..labels.evaluation import mask_iou
from ..labels.explanation import Explanation, SearchStats
from ..labels.label import Label
from ..masks.bit_matrix import BitMatrix
from ..masks.dataset import ConceptDataset, NeuronMask
from ..quantities.models import ConceptQuantities
from ..quantities.quantity_analyzer import QuantityAnalyzer, mask_quantities


@dataclass
class BeamMember:
    label: Label
    key: str
    iou: Rational
    mask: BitMatrix
    quantities: Optional[ConceptQuantities] = None


def _compare(a: BeamMember, b: BeamMember) -> int:
    """IoU تنازلياً ثم المفتاح تصاعدياً"""
    if a.iou != b.iou:
        return -1 if b.iou < a.iou else 1
    if a.key != b.key:
        return -1 if a.key < b.key else 1
    return 0


_ORDER = cmp_to_key(_compare)


class BeamSearch:
    def __init__(
        self,
        dataset: ConceptDataset,
        neuron: NeuronMask,
        config: BeamConfig,
        guided: bool = True,
        analyzer: Optional[QuantityAnalyzer] = None,
    ):
        """
        تهيئة البحث الشعاعي

        Args:
            dataset: مجموعة المفاهيم
            neuron: قناع العصبون
            config: حجم الشعاع والطول الأقصى والروابط
            guided: استخدام تقديرات الحدود لتجنب حساب IoU غير اللازم
            analyzer: كميات محسوبة مسبقاً (اختياري)
        """
        neuron.check_compatible(dataset)
        self.dataset = dataset
        self.neuron = neuron
        self.config = config
        self.guided = guided
        if analyzer is None or analyzer.max_length < config.max_length:
            analyzer = QuantityAnalyzer(dataset, neuron, config.max_length)
        self.analyzer = analyzer
        self.estimator = HeuristicEstimator(analyzer, config.operators, config.max_length)
        self.stats = SearchStats()

    @property
    def name(self) -> str:
        return "beam" if self.guided else "beam-vanilla"

    def run(self) -> Explanation:
        started = time.perf_counter()
        cfg = self.config
        beam = self._first_level()
        expanded: Set[str] = set()

        for level in range(2, cfg.max_length + 1):
            pending = [m for m in beam if m.key not in expanded and m.label.length == level - 1]
            if not pending:
                break
            if self.guided:
                beam = self._guided_level(beam, pending, expanded, level)
            else:
                beam = self._vanilla_level(beam, pending, expanded, level)

        self.stats.estimated = self.estimator.estimated
        self.stats.elapsed_ms = (time.perf_counter() - started) * 1000.0
        best = beam[0]
        logger.info("%s: %s = %s (زيارة %d)", self.name, best.key, best.iou, self.stats.visited)
        return Explanation(
            label=best.label,
            text=best.label.render(self.dataset.concept_names),
            iou=best.iou,
            stats=self.stats,
        )

    def _first_level(self) -> List[BeamMember]:
        members = []
        for k in range(self.dataset.size):
            label = Label.atom(k)
            quantities = self.analyzer.concept(k)
            members.append(BeamMember(
                label=label,
                key=label.key(),
                iou=quantities.diou(self.analyzer.n_total),
                mask=self.dataset.mask(k),
                quantities=quantities,
            ))
        self.stats.visited += len(members)
        self.stats.levels.append({"level": 1, "candidates": len(members), "estimated": 0, "visited": len(members)})
        return sorted(members, key=_ORDER)[: self.config.beam_size]

    def _child(self, member: BeamMember, op, k) -> BeamMember:
        label = member.label.extend(op, k)
        mask = op.apply(member.mask, self.dataset.mask(k))
        return BeamMember(label=label, key=label.key(), iou=mask_iou(mask, self.neuron), mask=mask)

    def _vanilla_level(self, beam, pending, expanded, level) -> List[BeamMember]:
        candidates = []
        for member in pending:
            expanded.add(member.key)
            self.stats.expanded += 1
            for op, k in self.estimator.legal_children(member.label):
                candidates.append(self._child(member, op, k))
        self.stats.visited += len(candidates)
        self.stats.levels.append({
            "level": level, "candidates": len(candidates), "estimated": 0, "visited": len(candidates),
        })
        return sorted(beam + candidates, key=_ORDER)[: self.config.beam_size]

    def _guided_level(self, beam, pending, expanded, level) -> List[BeamMember]:
        split = self.analyzer.split
        scored = []
        for member in pending:
            expanded.add(member.key)
            self.stats.expanded += 1
            if member.quantities is None:
                member.quantities = mask_quantities(member.mask, split)
            left = QuantityBounds.from_exact(member.quantities, Granularity.SAMPLE)
            disjoint = self.estimator.disjoint_vector(member.label)
            for op, k in self.estimator.legal_children(member.label, disjoint):
                bounds = estimate_label_bounds(
                    left, self.analyzer.concept(k), op, bool(disjoint[k]), split, Granularity.SAMPLE
                )
                self.estimator.estimated += 1
                estimate = bounds.diou_bounds(split.n_total)[1]
                label = member.label.extend(op, k)
                scored.append((estimate, label.key(), member, op, k))

        scored.sort(key=cmp_to_key(_compare_scored))
        working = sorted(beam, key=_ORDER)
        visited = 0
        for estimate, _, member, op, k in scored:
            if len(working) >= self.config.beam_size and estimate < working[self.config.beam_size - 1].iou:
                break
            child = self._child(member, op, k)
            visited += 1
            working.append(child)
            working.sort(key=_ORDER)
            del working[self.config.beam_size:]

        self.stats.visited += visited
        self.stats.levels.append({
            "level": level, "candidates": len(scored), "estimated": len(scored), "visited": visited,
        })
        return working


def _compare_scored(a, b) -> int:
    if a[0] != b[0]:
        return -1 if b[0] < a[0] else 1
    if a[1] != b[1]:
        return -1 if a[1] < b[1] else 1
    return 0


def beam_search_vanilla(dataset: ConceptDataset, neuron: NeuronMask, cfg: BeamConfig) -> Explanation:
    return BeamSearch(dataset, neuron, cfg, guided=False).run()


def beam_search_heuristic(dataset: ConceptDataset, neuron: NeuronMask, cfg: BeamConfig) -> Explanation:
    return BeamSearch(dataset, neuron, cfg, guided=True).run()
