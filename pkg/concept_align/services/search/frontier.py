"""
عقد البحث وحالته وطابور الأولوية
"""
import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

from cachetools import LRUCache

from ...core.rational import ZERO, Rational
from ..heuristic.label_bounds import QuantityBounds
from ..heuristic.path_bounds import PathBounds, PathKind
from ..labels.explanation import SearchStats
from ..labels.label import Label
from ..quantities.models import ConceptQuantities


class Tier(str, Enum):
    AGGREGATED = "aggregated"
    SAMPLE = "sample"
    EXACT = "exact"


@dataclass(eq=False)
class SearchNode:
    """
    عقدة في الطابور: تسمية ونوع مسار وتقدير

    Args:
        label: التسمية
        kind: FINAL أو مسار توسيع
        tier: مستوى دقة التقدير الحالي
        paths: حدود المسارات التي أُخذت منها الأولوية
        bounds: حدود كميات التسمية المجمعة، تُستخدم لتقدير الأبناء
        priority: dIoU_max للمسار
        lower: dIoU_min للمسار
        seq: رقم الإدراج لكسر التعادل
        pending: مفاتيح البادئات التي تنتظر كميات دقيقة
    """

    label: Label
    kind: PathKind
    tier: Tier
    paths: PathBounds
    bounds: QuantityBounds
    priority: Rational
    lower: Rational
    seq: int = 0
    alive: bool = True
    equivalences_checked: bool = False
    pending: Tuple[str, ...] = ()

    @property
    def is_final(self) -> bool:
        return self.kind is PathKind.FINAL


@dataclass(order=False)
class _Entry:
    node: SearchNode

    def __lt__(self, other: "_Entry") -> bool:
        if self.node.priority != other.node.priority:
            return other.node.priority < self.node.priority
        return self.node.seq < other.node.seq


@dataclass
class SearchState:
    """
    الحالة القابلة للتغيير لبحث واحد

    min_iou لا ينقص أبداً، وكل عقدة حية في الطابور أولويتها أكبر منه بعد كل تقليص.
    """

    prefix_cache: LRUCache
    frontier: List[_Entry] = field(default_factory=list)
    min_iou: Rational = ZERO
    best: Optional[Tuple[Label, Rational]] = None
    memory: Set[Tuple[str, PathKind]] = field(default_factory=set)
    recent_iou: Optional[Rational] = None
    # العقد الحية في الطابور مفهرسة بالبادئات المنتظرة ثم برقم الإدراج
    registry: Dict[str, Dict[int, SearchNode]] = field(default_factory=dict)
    stats: SearchStats = field(default_factory=SearchStats)
    seq: int = 0

    def push(self, node: SearchNode) -> bool:
        """إدراج العقدة إذا تجاوزت أولويتها min_iou"""
        if node.priority <= self.min_iou:
            node.alive = False
            self.stats.pruned += 1
            return False
        node.seq = self.seq
        self.seq += 1
        node.alive = True
        heapq.heappush(self.frontier, _Entry(node))
        for key in node.pending:
            if key not in self.prefix_cache:
                self.registry.setdefault(key, {})[node.seq] = node
        return True

    def retire(self, node: SearchNode) -> None:
        """إخراج العقدة من الحياة ومن الفهرس"""
        node.alive = False
        for key in node.pending:
            waiting = self.registry.get(key)
            if waiting is None:
                continue
            waiting.pop(node.seq, None)
            if not waiting:
                del self.registry[key]

    def waiting_on(self, key: str) -> List[SearchNode]:
        """سحب العقد المنتظرة لبادئة من الفهرس"""
        return list(self.registry.pop(key, {}).values())

    def pop(self) -> Optional[SearchNode]:
        """أعلى عقدة حية، أو None إذا فرغ الطابور"""
        while self.frontier:
            node = heapq.heappop(self.frontier).node
            if node.alive:
                return node
        return None

    def live_nodes(self) -> List[SearchNode]:
        return [e.node for e in self.frontier if e.node.alive]

    def raise_min_iou(self, value: Rational) -> bool:
        if value > self.min_iou:
            self.min_iou = value
            return True
        return False

    def offer(self, label: Label, value: Rational) -> bool:
        """تحديث أفضل تسمية إذا كانت القيمة أكبر تماماً"""
        if self.best is None or value > self.best[1]:
            self.best = (label, value)
            self.raise_min_iou(value)
            return True
        return False

    def cached(self, key: str) -> Optional[ConceptQuantities]:
        return self.prefix_cache.get(key)


def reduce_frontier(state: SearchState) -> None:
    """حذف كل عقدة أولويتها <= min_iou وإعادة بناء الكومة"""
    kept = []
    for entry in state.frontier:
        if not entry.node.alive:
            continue
        if entry.node.priority > state.min_iou:
            kept.append(entry)
        else:
            state.retire(entry.node)
            state.stats.pruned += 1
    heapq.heapify(kept)
    state.frontier = kept
