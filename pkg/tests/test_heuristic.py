import numpy as np
import pytest

from concept_align.core.operators import ALL_OPERATORS, Operator
from concept_align.core.rational import Rational
from concept_align.services.heuristic.heuristic_estimator import HeuristicEstimator
from concept_align.services.heuristic.label_bounds import Granularity, QuantityBounds, estimate_label_bounds
from concept_align.services.heuristic.path_bounds import PathKind, estimate_path_bounds
from concept_align.services.labels.evaluation import evaluate_label, mask_iou
from concept_align.services.labels.label import Label
from concept_align.services.quantities.quantity_analyzer import QuantityAnalyzer, mask_quantities


def _random_legal_label(estimator, rng, length):
    label = Label.atom(int(rng.integers(estimator.concept_count)))
    while label.length < length:
        children = list(estimator.legal_children(label))
        if not children:
            break
        op, k = children[int(rng.integers(len(children)))]
        label = label.extend(op, k)
    return label


def _triples(make_instance, count, seeds=range(25)):
    """(analyzer, estimator, left label, op, k) عشوائية وغير متدهورة"""
    rng = np.random.default_rng(99)
    per_seed = max(1, count // len(seeds))
    for seed in seeds:
        dataset, neuron = make_instance(seed, overlap_density=float(rng.choice([0.0, 0.3, 0.7])))
        analyzer = QuantityAnalyzer(dataset, neuron, max_length=4)
        estimator = HeuristicEstimator(analyzer, ALL_OPERATORS, max_length=4)
        for _ in range(per_seed):
            left = _random_legal_label(estimator, rng, int(rng.integers(1, 3)))
            children = list(estimator.legal_children(left))
            if not children:
                continue
            op, k = children[int(rng.integers(len(children)))]
            yield analyzer, estimator, left, op, k


def test_label_bounds_bracket_true_quantities(make_instance):
    checked = 0
    for analyzer, estimator, left, op, k in _triples(make_instance, 500):
        split = analyzer.split
        left_exact = mask_quantities(evaluate_label(left, analyzer.dataset), split)
        disjoint = bool(estimator.disjoint_vector(left)[k])
        bounds = estimate_label_bounds(
            QuantityBounds.from_exact(left_exact, Granularity.SAMPLE),
            analyzer.concept(k), op, disjoint, split, Granularity.SAMPLE,
        )
        true = mask_quantities(evaluate_label(left.extend(op, k), analyzer.dataset), split)
        for name in ("ic", "ec"):
            assert np.all(bounds.lo[name] <= true.vector(name))
            assert np.all(true.vector(name) <= bounds.hi[name])
        for name in ("iu", "eu"):
            assert np.array_equal(bounds.lo[name], true.vector(name))
            assert np.array_equal(bounds.hi[name], true.vector(name))
        if disjoint:
            for name in ("ic", "ec"):
                assert np.array_equal(bounds.lo[name], true.vector(name))
                assert np.array_equal(bounds.hi[name], true.vector(name))
        checked += 1
    assert checked > 400


def test_aggregated_bounds_envelope_sample_bounds(make_instance):
    for analyzer, estimator, left, op, k in _triples(make_instance, 500):
        split = analyzer.split
        left_exact = mask_quantities(evaluate_label(left, analyzer.dataset), split)
        disjoint = bool(estimator.disjoint_vector(left)[k])
        per_sample = estimate_label_bounds(
            QuantityBounds.from_exact(left_exact, Granularity.SAMPLE),
            analyzer.concept(k), op, disjoint, split, Granularity.SAMPLE,
        )
        aggregated = estimate_label_bounds(
            QuantityBounds.from_exact(left_exact, Granularity.AGGREGATED),
            analyzer.concept(k), op, disjoint, split, Granularity.AGGREGATED,
        )
        sample_min, sample_max = per_sample.diou_bounds(split.n_total)
        agg_min, agg_max = aggregated.diou_bounds(split.n_total)
        assert agg_max >= sample_max
        assert agg_min <= sample_min
        true = mask_iou(evaluate_label(left.extend(op, k), analyzer.dataset), analyzer.neuron)
        assert sample_min <= true <= sample_max


def test_granularity_mismatch_rejected(worked_dataset, worked_neuron):
    analyzer = QuantityAnalyzer(worked_dataset, worked_neuron, 2)
    left = QuantityBounds.from_exact(analyzer.concept(0), Granularity.SAMPLE)
    with pytest.raises(ValueError):
        estimate_label_bounds(left, analyzer.concept(1), Operator.OR, False, analyzer.split, Granularity.AGGREGATED)


def test_worked_example_or_path(worked_dataset, worked_neuron):
    analyzer = QuantityAnalyzer(worked_dataset, worked_neuron, 2)
    bounds = QuantityBounds.from_exact(analyzer.concept(0), Granularity.AGGREGATED)
    paths = estimate_path_bounds(bounds, analyzer.topbott, analyzer.split, 1, [Operator.OR])
    assert paths[PathKind.OR].diou_max == Rational(3, 5)
    assert PathKind.COMBINED not in paths
    assert paths[PathKind.FINAL].diou_max == Rational(2, 5)


def test_path_budget_checks(worked_dataset, worked_neuron):
    analyzer = QuantityAnalyzer(worked_dataset, worked_neuron, 2)
    bounds = QuantityBounds.from_exact(analyzer.concept(0), Granularity.AGGREGATED)
    with pytest.raises(ValueError):
        estimate_path_bounds(bounds, analyzer.topbott, analyzer.split, 2, ALL_OPERATORS)
    with pytest.raises(ValueError):
        estimate_path_bounds(bounds, analyzer.topbott, analyzer.split, -1, ALL_OPERATORS)
    final_only = estimate_path_bounds(bounds, analyzer.topbott, analyzer.split, 0, ALL_OPERATORS)
    assert final_only.kinds == (PathKind.FINAL,)


def _reachable_max(label, estimator, dataset, neuron, max_length):
    """أكبر IoU بين التسمية وكل توسيعاتها بمفاهيم مختلفة، دون قيود الترتيب"""
    best = Rational(0, 1)
    stack = [(label, evaluate_label(label, dataset))]
    while stack:
        current, mask = stack.pop()
        best = max(best, mask_iou(mask, neuron))
        if current.length >= max_length:
            continue
        for op in estimator.operators:
            for k in range(dataset.size):
                if k not in current.concepts:
                    stack.append((current.extend(op, k), op.apply(mask, dataset.mask(k))))
    return best


def _legal_labels(estimator):
    frontier = [Label.atom(k) for k in range(estimator.concept_count)]
    while frontier:
        label = frontier.pop()
        yield label
        frontier.extend(label.extend(op, k) for op, k in estimator.legal_children(label))


@pytest.mark.parametrize("overlap", [0.0, 0.3, 0.7])
def test_path_bounds_are_admissible(make_instance, overlap):
    max_length = 3
    for seed in range(17):
        dataset, neuron = make_instance(100 + seed, concepts=6, samples=3, features=16, overlap_density=overlap)
        analyzer = QuantityAnalyzer(dataset, neuron, max_length)
        estimator = HeuristicEstimator(analyzer, ALL_OPERATORS, max_length)
        for label in _legal_labels(estimator):
            if label.length == max_length:
                continue
            best = _reachable_max(label, estimator, dataset, neuron, max_length)
            _, sample = estimator.sample_paths(label)
            aggregated = estimator.paths(label, estimator.label_bounds(label, Granularity.AGGREGATED))
            for paths in (sample, aggregated):
                assert paths.diou_min <= best <= paths.diou_max


def test_sample_paths_never_exceed_envelope(small_instance):
    dataset, neuron = small_instance
    analyzer = QuantityAnalyzer(dataset, neuron, 3)
    estimator = HeuristicEstimator(analyzer, ALL_OPERATORS, 3)
    for label in _legal_labels(estimator):
        if label.length == 3:
            continue
        aggregated = estimator.paths(label, estimator.label_bounds(label, Granularity.AGGREGATED))
        _, sample = estimator.sample_paths(label, envelope=aggregated)
        for kind in sample.kinds:
            assert sample[kind].diou_max <= aggregated[kind].diou_max


def test_degenerate_and_not_children_skipped(make_instance):
    dataset, neuron = make_instance(1, overlap_density=0.0)
    analyzer = QuantityAnalyzer(dataset, neuron, 2)
    estimator = HeuristicEstimator(analyzer, ALL_OPERATORS, 2)
    children = list(estimator.legal_children(Label.atom(0)))
    assert all(op is not Operator.AND_NOT for op, _ in children)
    assert estimator.has_degenerate_step(Label(0).extend(Operator.AND_NOT, 1))
    assert not estimator.has_degenerate_step(Label(0).extend(Operator.OR, 1))
