import importlib
import itertools
import time

import numpy as np
import pytest
from cachetools import LRUCache

from concept_align.core.config import SearchLimits
from concept_align.core.errors import ConfigError
from concept_align.core.operators import ALL_OPERATORS, Operator
from concept_align.core.rational import Rational
from concept_align.services.heuristic.path_bounds import PathKind
from concept_align.services.labels.evaluation import iou
from concept_align.services.labels.label import Label
from concept_align.services.masks.bit_matrix import BitMatrix
from concept_align.services.masks.dataset import NeuronMask
from concept_align.services.search import (
    OptimalSearch,
    SearchNode,
    SearchState,
    Tier,
    backpropagate_prefix,
    brute_force,
    optimal_search,
    reduce_frontier,
)

optimal_module = importlib.import_module("concept_align.services.search.optimal_search")


def test_worked_example_optimum(worked_dataset, worked_neuron):
    result = optimal_search(worked_dataset, worked_neuron, 2)
    assert result.text in ("(c1 AND c2)", "(c2 AND c1)")
    assert (result.iou.num, result.iou.den) == (2, 3)
    assert result.optimal
    assert result.warnings == []


def test_worked_example_single_concept(worked_dataset, worked_neuron):
    result = optimal_search(worked_dataset, worked_neuron, 1)
    assert result.text == "c2"
    assert result.iou == Rational(1, 2)


def test_invalid_length_rejected(worked_dataset, worked_neuron):
    with pytest.raises(ConfigError):
        OptimalSearch(worked_dataset, worked_neuron, 0)


@pytest.mark.parametrize("overlap", [0.0, 0.3, 0.7])
def test_matches_brute_force(make_instance, overlap):
    for seed in range(12):
        dataset, neuron = make_instance(
            seed, concepts=8, samples=16, features=64, overlap_density=overlap, planted_length=int(seed % 4)
        )
        expected = brute_force(dataset, neuron, 3)
        result = optimal_search(dataset, neuron, 3)
        assert result.optimal
        assert result.iou == expected.iou, f"seed {seed}: {result.text} vs {expected.text}"
        # القيمة المعلنة هي قيمة التسمية الفعلية
        assert iou(result.label, neuron, dataset) == result.iou


@pytest.mark.parametrize("operators", [
    combo for size in (1, 2) for combo in itertools.combinations(ALL_OPERATORS, size)
])
def test_operator_subsets(make_instance, operators):
    for seed in range(6):
        dataset, neuron = make_instance(seed, concepts=7, overlap_density=0.5)
        expected = brute_force(dataset, neuron, 3, operators)
        result = optimal_search(dataset, neuron, 3, operators)
        assert result.iou == expected.iou
        assert set(result.label.operators) <= set(operators)


def test_backpropagation_does_not_change_result(make_instance):
    for seed in range(10):
        dataset, neuron = make_instance(seed, concepts=8, overlap_density=0.6)
        with_backprop = OptimalSearch(dataset, neuron, 3).run()
        without = OptimalSearch(dataset, neuron, 3, limits=SearchLimits(backpropagation=False)).run()
        assert with_backprop.iou == without.iou
        assert without.stats.backprop_updates == 0


def test_equivalences_can_be_disabled(make_instance):
    dataset, neuron = make_instance(4, concepts=8, overlap_density=0.6)
    plain = OptimalSearch(dataset, neuron, 3, limits=SearchLimits(equivalences=False)).run()
    assert plain.iou == brute_force(dataset, neuron, 3).iou


def test_node_budget_reports_exhaustion(worked_dataset, worked_neuron):
    result = OptimalSearch(worked_dataset, worked_neuron, 2, limits=SearchLimits(max_nodes=1)).run()
    assert not result.optimal
    assert result.warnings == ["budget_exhausted"]
    # أفضل ما وُجد قبل التوقف ما زال تسمية صالحة
    assert result.iou == iou(result.label, worked_neuron, worked_dataset)


def test_empty_neuron(worked_dataset):
    empty = NeuronMask(BitMatrix.zeros(1, 6))
    result = optimal_search(worked_dataset, empty, 3)
    assert result.warnings == ["empty_neuron"]
    assert result.iou == Rational(0, 1)
    assert result.optimal


def test_stats_are_counted(make_instance):
    dataset, neuron = make_instance(2, concepts=8)
    stats = optimal_search(dataset, neuron, 3).stats
    assert stats.visited >= dataset.size
    assert stats.estimated > 0
    assert stats.elapsed_ms >= 0.0


def _node(priority: Rational) -> SearchNode:
    return SearchNode(
        label=Label.atom(0), kind=PathKind.FINAL, tier=Tier.SAMPLE, paths=None, bounds=None,
        priority=priority, lower=Rational(0, 1),
    )


def test_frontier_order_and_reduction():
    state = SearchState(prefix_cache=LRUCache(maxsize=4))
    nodes = [_node(Rational(n, 10)) for n in (3, 7, 5, 7)]
    for node in nodes:
        assert state.push(node)
    assert state.pop() is nodes[1]

    state.raise_min_iou(Rational(1, 2))
    reduce_frontier(state)
    assert [e.node for e in state.frontier] == [nodes[3]]
    assert not nodes[0].alive and not nodes[2].alive
    assert state.stats.pruned == 2
    assert not state.push(_node(Rational(1, 2)))


def test_min_iou_never_decreases():
    state = SearchState(prefix_cache=LRUCache(maxsize=4))
    state.offer(Label.atom(0), Rational(2, 5))
    assert not state.raise_min_iou(Rational(1, 5))
    assert state.min_iou == Rational(2, 5)
    assert not state.offer(Label.atom(1), Rational(2, 5))
    assert state.best[0] == Label.atom(0)


@pytest.mark.slow
def test_large_instance_completes(make_instance):
    dataset, neuron = make_instance(0, concepts=64, samples=128, features=1024, overlap_density=0.3)
    started = time.perf_counter()
    result = optimal_search(dataset, neuron, 3)
    assert result.optimal
    assert time.perf_counter() - started < 120
    assert result.stats.estimated >= 10 * result.stats.expanded
    assert result.stats.expanded >= 2 * result.stats.visited
    assert result.iou == iou(result.label, neuron, dataset)
    assert np.isfinite(result.stats.elapsed_ms)


def test_operator_order_is_canonical(worked_dataset, worked_neuron):
    search = OptimalSearch(worked_dataset, worked_neuron, 2, (Operator.AND_NOT, Operator.OR))
    assert search.operators == (Operator.OR, Operator.AND_NOT)


def _registered(state: SearchState):
    return [node for waiting in state.registry.values() for node in waiting.values()]


def test_frontier_reduction_during_search(make_instance, monkeypatch):
    calls = []

    def checked(state):
        reduce_frontier(state)
        calls.append(state.min_iou)
        assert all(entry.node.priority > state.min_iou for entry in state.frontier)
        # كل عقدة منتظرة لبادئة حية وموجودة في الطابور
        live = {id(entry.node) for entry in state.frontier}
        assert all(node.alive and id(node) in live for node in _registered(state))

    monkeypatch.setattr(optimal_module, "reduce_frontier", checked)
    for seed in range(6):
        dataset, neuron = make_instance(seed, concepts=8, samples=16, features=64, overlap_density=0.6)
        search = OptimalSearch(dataset, neuron, 3)
        search.run()
        assert search.state.registry == {}
    assert calls


def test_pruned_node_leaves_registry():
    state = SearchState(prefix_cache=LRUCache(maxsize=4))
    waiting = SearchNode(
        label=Label.atom(0).extend(Operator.AND, 1).extend(Operator.OR, 2), kind=PathKind.FINAL, tier=Tier.SAMPLE,
        paths=None, bounds=None, priority=Rational(3, 10), lower=Rational(0, 1), pending=("(0 AND 1)",),
    )
    state.raise_min_iou(Rational(1, 2))
    assert not state.push(waiting)
    assert state.registry == {}

    state = SearchState(prefix_cache=LRUCache(maxsize=4))
    assert state.push(waiting)
    assert _registered(state) == [waiting]
    state.raise_min_iou(Rational(1, 2))
    reduce_frontier(state)
    assert state.registry == {}
    assert state.waiting_on("(0 AND 1)") == []


def test_backpropagation_without_matching_prefix(worked_dataset, worked_neuron):
    search = OptimalSearch(worked_dataset, worked_neuron, 2)
    assert backpropagate_prefix(search, "(0 AND 1)") == 0
    assert search.state.frontier == []


def test_backpropagation_updates_overlapping_instances(make_instance):
    updates = 0
    for seed in range(20):
        dataset, neuron = make_instance(seed, concepts=8, samples=16, features=64, overlap_density=0.8)
        updates += optimal_search(dataset, neuron, 3).stats.backprop_updates
    assert updates > 0


def test_backpropagation_never_raises_priority(make_instance, monkeypatch):
    original = optimal_module.backpropagate_prefix
    checks = []

    def recording(search, key):
        before = {}
        for node in search.state.registry.get(key, {}).values():
            slot = (node.label.key(), node.kind)
            before[slot] = max(before.get(slot, node.priority), node.priority)
        first = search.state.seq
        count = original(search, key)
        for entry in search.state.frontier:
            node = entry.node
            if node.seq >= first:
                checks.append(node.priority <= before[(node.label.key(), node.kind)])
        return count

    monkeypatch.setattr(optimal_module, "backpropagate_prefix", recording)
    for seed in range(20):
        dataset, neuron = make_instance(seed, concepts=8, samples=16, features=64, overlap_density=0.8)
        result = optimal_search(dataset, neuron, 3)
        assert result.iou == brute_force(dataset, neuron, 3).iou
    assert checks
    assert all(checks)
