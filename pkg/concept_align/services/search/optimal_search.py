"""
البحث الأمثل بأولوية الأفضل أولاً مع حدود dIoU المقبولة
"""
import time
from typing import List, Optional, Sequence, Tuple

from cachetools import LRUCache

from ...core.config import SearchLimits
from ...core.errors import ConfigError
from ...core.operators import ALL_OPERATORS, Operator
from ...core.rational import Rational
from ...utils.logging import logger, trace
from ..heuristic.heuristic_estimator import HeuristicEstimator
from ..heuristic.label_bounds import Granularity
from ..heuristic.path_bounds import PathBounds, PathKind, extension_kind
from ..labels.evaluation import evaluate_label, mask_iou, prefix_masks
from ..labels.explanation import Explanation
from ..labels.label import Label, canonicalize, equivalent_variants
from ..masks.dataset import ConceptDataset, NeuronMask
from ..quantities.models import ConceptQuantities
from ..quantities.quantity_analyzer import QuantityAnalyzer, mask_quantities
from .frontier import SearchNode, SearchState, Tier, reduce_frontier

_OPS_OF_KIND = {
    PathKind.OR: (Operator.OR,),
    PathKind.AND: (Operator.AND,),
    PathKind.AND_NOT: (Operator.AND_NOT,),
}


class OptimalSearch:
    def __init__(
        self,
        dataset: ConceptDataset,
        neuron: NeuronMask,
        max_length: int,
        operators: Sequence[Operator] = ALL_OPERATORS,
        limits: Optional[SearchLimits] = None,
        analyzer: Optional[QuantityAnalyzer] = None,
    ):
        """
        تهيئة البحث الأمثل

        Args:
            dataset: مجموعة المفاهيم
            neuron: قناع العصبون
            max_length: الطول الأقصى n للتسمية
            operators: الروابط المسموحة
            limits: ميزانية العقد والوقت وخيارات التحسين
            analyzer: كميات محسوبة مسبقاً لنفس الزوج (اختياري)
        """
        if max_length < 1:
            raise ConfigError(f"max length must be at least 1, got {max_length}")
        if not operators:
            raise ConfigError("at least one operator is required")
        neuron.check_compatible(dataset)
        self.dataset = dataset
        self.neuron = neuron
        self.max_length = max_length
        self.operators = tuple(op for op in ALL_OPERATORS if op in operators)
        self.limits = limits or SearchLimits()
        if analyzer is None or analyzer.max_length < max_length:
            analyzer = QuantityAnalyzer(dataset, neuron, max_length)
        self.analyzer = analyzer
        self.estimator = HeuristicEstimator(analyzer, self.operators, max_length)
        self.extend_kind = extension_kind(self.operators)
        self.state = SearchState(prefix_cache=LRUCache(maxsize=self.limits.prefix_cache_size))

    @property
    def n_total(self) -> int:
        return self.analyzer.n_total

    def run(self) -> Explanation:
        """
        تشغيل البحث حتى فراغ الطابور أو نفاد الميزانية

        Returns:
            Explanation: أفضل تسمية مع IoU الدقيق والعدادات
        """
        started = time.perf_counter()
        state = self.state
        stats = state.stats
        logger.info(
            "بدء البحث الأمثل: K=%d n=%d الروابط=%s",
            self.dataset.size, self.max_length, ",".join(op.value for op in self.operators),
        )

        if self.neuron.is_empty:
            logger.warning("قناع العصبون فارغ، كل تسمية قيمتها 0")
            label = Label.atom(0)
            stats.visited = 1
            stats.elapsed_ms = (time.perf_counter() - started) * 1000.0
            return self._explanation(label, self._label_iou(label), optimal=True, warnings=["empty_neuron"])

        self._seed()
        exhausted = False
        popped = 0
        while True:
            if self.limits.max_nodes is not None and popped >= self.limits.max_nodes:
                exhausted = self._has_open_nodes()
                break
            if self.limits.max_seconds is not None and time.perf_counter() - started > self.limits.max_seconds:
                exhausted = self._has_open_nodes()
                break
            node = state.pop()
            if node is None:
                break
            state.retire(node)
            if node.priority <= state.min_iou:
                stats.pruned += 1
                continue
            popped += 1
            trace("سحب %s [%s/%s] أولوية %s", node.label.key(), node.kind.value, node.tier.value, node.priority)
            self._process(node)

        stats.estimated = self.estimator.estimated
        stats.elapsed_ms = (time.perf_counter() - started) * 1000.0
        label, value = state.best
        warnings: List[str] = []
        if exhausted:
            logger.warning("نفدت ميزانية البحث، النتيجة ليست مثبتة الأمثلية")
            warnings.append("budget_exhausted")
        logger.info(
            "انتهى البحث: %s = %s (زيارة %d، توسيع %d، تقدير %d)",
            label.key(), value, stats.visited, stats.expanded, stats.estimated,
        )
        return self._explanation(label, value, optimal=not exhausted, warnings=warnings)

    def _has_open_nodes(self) -> bool:
        return any(node.priority > self.state.min_iou for node in self.state.live_nodes())

    def _explanation(self, label: Label, value: Rational, optimal: bool, warnings: List[str]) -> Explanation:
        return Explanation(
            label=label,
            text=label.render(self.dataset.concept_names),
            iou=value,
            stats=self.state.stats,
            optimal=optimal,
            warnings=warnings,
        )

    # الخطوة الأولى: أفضل مفهوم ذري وبذور الطابور

    def _seed(self) -> None:
        state = self.state
        for k in range(self.dataset.size):
            state.stats.visited += 1
            state.offer(Label.atom(k), self.analyzer.concept(k).diou(self.n_total))
        if self.max_length < 2:
            return

        best_lower, witness = None, None
        for k in range(self.dataset.size):
            label = Label.atom(k)
            if not self.estimator.has_legal_child(label):
                continue
            bounds = self.estimator.atom_bounds(k, Granularity.AGGREGATED)
            paths = self.estimator.paths(label, bounds, extendable=True)
            node = self._node(label, self.extend_kind, Tier.AGGREGATED, paths, bounds)
            state.push(node)
            if best_lower is None or node.lower > best_lower:
                best_lower, witness = node.lower, node
        if witness is not None:
            self._raise_from_bound(best_lower, witness)
        reduce_frontier(state)

    def _node(self, label, kind, tier, paths: PathBounds, bounds) -> SearchNode:
        est = paths[kind]
        return SearchNode(
            label=label, kind=kind, tier=tier, paths=paths, bounds=bounds,
            priority=est.diou_max, lower=est.diou_min, pending=self._pending(label),
        )

    def _pending(self, label: Label) -> Tuple[str, ...]:
        """مفاتيح البادئات التي لم تُحسب كمياتها الدقيقة بعد"""
        if not self.limits.backpropagation:
            return ()
        keys = (canonicalize(label.prefix(length)).key() for length in range(2, label.length + 1))
        return tuple(key for key in keys if key not in self.state.prefix_cache)

    # تقييم دقيق

    def _label_iou(self, label: Label) -> Rational:
        return mask_iou(evaluate_label(label, self.dataset), self.neuron)

    def _witness(self, node: SearchNode) -> Optional[Label]:
        """تسمية ملموسة تحقق على الأقل الحد الأدنى لمسار العقدة"""
        if node.is_final:
            return node.label
        allowed = _OPS_OF_KIND.get(node.kind, self.operators)
        for op, k in self.estimator.legal_children(node.label):
            if op in allowed:
                return node.label.extend(op, k)
        return None

    def _raise_from_bound(self, bound: Rational, node: SearchNode) -> bool:
        """رفع min_iou من حد أدنى بعد تقييم شاهد يحققه"""
        state = self.state
        if bound <= state.min_iou:
            return False
        witness = self._witness(node)
        if witness is None:
            return False
        state.stats.visited += 1
        state.offer(witness, self._label_iou(witness))
        state.raise_min_iou(bound)
        logger.debug("min_iou = %s (شاهد %s)", state.min_iou, witness.key())
        return True

    def _lookup(self, prefix: Label) -> Optional[ConceptQuantities]:
        if prefix.length < 2:
            return None
        return self.state.cached(canonicalize(prefix).key())

    # حلقة المعالجة

    def _process(self, node: SearchNode) -> None:
        if node.tier is Tier.AGGREGATED:
            self._refine(node)
            return
        if self.limits.equivalences and not node.equivalences_checked and node.tier is not Tier.EXACT:
            node.equivalences_checked = True
            if self._apply_equivalences(node):
                return
        if self._seen_in_memory(node):
            return
        if node.is_final:
            self._visit(node)
        else:
            self._expand(node)

    def _reinsert(self, node: SearchNode) -> None:
        self.state.push(node)

    def _refine(self, node: SearchNode) -> None:
        """الانتقال من التقدير المجمع إلى تقدير العينات وإعادة الإدراج"""
        bounds, paths = self.estimator.sample_paths(
            node.label, self._lookup, envelope=node.paths, extendable=not node.is_final
        )
        est = paths[node.kind]
        node.paths = paths
        node.priority = min(node.priority, est.diou_max)
        node.lower = est.diou_min
        node.tier = Tier.EXACT if node.is_final and bounds.exact else Tier.SAMPLE
        self._raise_from_bound(node.lower, node)
        self._reinsert(node)

    def _apply_equivalences(self, node: SearchNode) -> bool:
        """
        تقدير المكافئات المنطقية واعتماد أصغر dIoU_max؛ التسمية الأصلية تبقى للتوسيع
        """
        if node.label.length < 2:
            return False
        lowest = node.priority
        for variant in equivalent_variants(node.label, self.limits.max_equivalents):
            if self.estimator.has_degenerate_step(variant):
                continue
            _, paths = self.estimator.sample_paths(variant, self._lookup, extendable=not node.is_final)
            if node.kind in paths and paths[node.kind].diou_max < lowest:
                lowest = paths[node.kind].diou_max
        if lowest < node.priority:
            node.priority = lowest
            self._reinsert(node)
            return True
        return False

    def _seen_in_memory(self, node: SearchNode) -> bool:
        state = self.state
        if state.recent_iou is None or node.priority != state.recent_iou:
            state.memory.clear()
            state.recent_iou = node.priority
        key = (canonicalize(node.label).key(), node.kind)
        if key in state.memory:
            state.stats.pruned += 1
            return True
        state.memory.add(key)
        return False

    def _visit(self, node: SearchNode) -> None:
        """حساب الكميات الدقيقة لتسمية نهائية ونشر بادئاتها"""
        state = self.state
        state.stats.visited += 1
        masks = prefix_masks(node.label, self.dataset)
        fresh = []
        for length in range(2, node.label.length + 1):
            key = canonicalize(node.label.prefix(length)).key()
            if key in state.prefix_cache:
                continue
            quantities = mask_quantities(masks[length - 1], self.analyzer.split)
            state.prefix_cache[key] = quantities
            fresh.append(key)
        value = mask_iou(masks[-1], self.neuron)
        if state.offer(node.label, value):
            logger.debug("أفضل تسمية جديدة %s = %s", node.label.key(), value)
        if self.limits.backpropagation:
            for key in fresh:
                state.stats.backprop_updates += backpropagate_prefix(self, key)

    def _expand(self, node: SearchNode) -> None:
        state = self.state
        estimator = self.estimator
        state.stats.expanded += 1
        disjoint = estimator.disjoint_vector(node.label)
        best_lower, best_child = None, None
        for op, k in estimator.legal_children(node.label, disjoint):
            child = node.label.extend(op, k)
            bounds = estimator.child_bounds(node.bounds, op, k, disjoint)
            extendable = child.length < self.max_length and estimator.has_legal_child(child)
            paths = estimator.paths(child, bounds, extendable)

            final = self._node(child, PathKind.FINAL, Tier.EXACT if bounds.exact else Tier.AGGREGATED, paths, bounds)
            candidates = [final]
            if extendable:
                candidates.append(self._node(child, self.extend_kind, Tier.AGGREGATED, paths, bounds))
            for candidate in candidates:
                state.push(candidate)
                if best_lower is None or candidate.lower > best_lower:
                    best_lower, best_child = candidate.lower, candidate

        if best_child is not None and self._raise_from_bound(best_lower, best_child):
            reduce_frontier(state)


def backpropagate_prefix(search: OptimalSearch, prefix_key: str) -> int:
    """
    تحديث تقديرات العقد الحية التي تبدأ ببادئة أصبحت كمياتها دقيقة

    Returns:
        int: عدد العقد التي أعيد حسابها
    """
    state = search.state
    estimator = search.estimator
    updated = 0
    for node in state.waiting_on(prefix_key):
        if not node.alive or node.tier is Tier.EXACT:
            continue
        aggregated = estimator.label_bounds(node.label, Granularity.AGGREGATED, search._lookup)
        extendable = not node.is_final
        if node.tier is Tier.AGGREGATED:
            paths = estimator.paths(node.label, aggregated, extendable)
            tier = Tier.AGGREGATED
        else:
            _, paths = estimator.sample_paths(node.label, search._lookup, extendable=extendable)
            tier = Tier.SAMPLE
        if node.is_final and aggregated.exact:
            tier = Tier.EXACT
        est = paths[node.kind]
        updated += 1

        state.retire(node)
        refreshed = SearchNode(
            label=node.label, kind=node.kind, tier=tier, paths=paths, bounds=aggregated,
            priority=min(node.priority, est.diou_max), lower=est.diou_min,
            equivalences_checked=node.equivalences_checked, pending=search._pending(node.label),
        )
        state.push(refreshed)
    return updated


def optimal_search(
    dataset: ConceptDataset,
    neuron: NeuronMask,
    max_length: int,
    operators: Sequence[Operator] = ALL_OPERATORS,
    limits: Optional[SearchLimits] = None,
) -> Explanation:
    return OptimalSearch(dataset, neuron, max_length, operators, limits).run()
