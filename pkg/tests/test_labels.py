import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from concept_align.core.errors import LabelError
from concept_align.core.operators import ALL_OPERATORS, Operator, parse_operators
from concept_align.core.rational import Rational
from concept_align.services.labels.evaluation import evaluate_label, exact_label_quantities, iou
from concept_align.services.labels.explanation import (
    DifferenceCategory,
    Explanation,
    SearchStats,
    classify_difference,
)
from concept_align.services.labels.label import (
    Label,
    canonicalize,
    equivalent_variants,
    is_expansion_allowed,
    normal_form,
    parse_label,
)
from concept_align.services.quantities.quantity_analyzer import compute_partition


@st.composite
def labels(draw, concepts=6, max_length=3):
    length = draw(st.integers(1, max_length))
    ids = draw(st.permutations(range(concepts)))[:length]
    ops = [draw(st.sampled_from(ALL_OPERATORS)) for _ in range(length - 1)]
    return Label(ids[0], tuple(zip(ops, ids[1:])))


def test_render_and_parse(worked_dataset):
    label = Label(0).extend(Operator.AND_NOT, 2).extend(Operator.OR, 1)
    text = label.render(worked_dataset.concept_names)
    assert text == "((c1 AND NOT c3) OR c2)"
    assert parse_label(text, worked_dataset.concept_names) == label


def test_parse_names_with_spaces():
    names = ["red car", "car", "sky AND sea"]
    label = Label(2).extend(Operator.AND, 0)
    assert parse_label(label.render(names), names) == label


def test_parse_rejects_garbage(worked_dataset):
    with pytest.raises(LabelError):
        parse_label("(c1 XOR c2)", worked_dataset.concept_names)


def test_repeated_concept_rejected():
    with pytest.raises(LabelError):
        Label(1).extend(Operator.OR, 1)


def test_prefixes():
    label = Label(0).extend(Operator.OR, 1).extend(Operator.AND, 2)
    assert [p.key() for p in label.prefixes()] == ["0", "(0 OR 1)", "((0 OR 1) AND 2)"]


def test_worked_example_iou(worked_dataset, worked_neuron):
    cases = {
        Label(0).extend(Operator.OR, 1): Rational(2, 6),
        Label(0).extend(Operator.OR, 2): Rational(3, 5),
        Label(0).extend(Operator.AND, 1): Rational(2, 3),
    }
    for label, expected in cases.items():
        value = iou(label, worked_neuron, worked_dataset)
        assert (value.num, value.den) == (expected.num, expected.den)


def test_worked_example_label_quantities(worked_dataset, worked_neuron):
    label = Label(0).extend(Operator.OR, 1)
    partition = compute_partition(worked_dataset)
    full = exact_label_quantities(label, worked_dataset, worked_neuron, partition)[-1]
    assert full.totals() == {"ic": 2, "iu": 0, "ec": 2, "eu": 1}


def test_decomposed_iou_equals_bitwise_iou(make_instance):
    rng = np.random.default_rng(2024)
    for seed in range(20):
        dataset, neuron = make_instance(seed, overlap_density=float(rng.choice([0.0, 0.3, 0.7])))
        partition = compute_partition(dataset)
        for _ in range(50):
            length = int(rng.integers(1, 4))
            ids = rng.permutation(dataset.size)[:length]
            ops = [ALL_OPERATORS[i] for i in rng.integers(3, size=length - 1)]
            label = Label(int(ids[0]), tuple(zip(ops, (int(k) for k in ids[1:]))))
            quantities = exact_label_quantities(label, dataset, neuron, partition)[-1]
            assert quantities.diou(neuron.mask.popcount()) == iou(label, neuron, dataset)


@given(labels())
def test_canonical_form_is_idempotent(label):
    once = canonicalize(label)
    assert canonicalize(once) == once
    assert once.head == label.head
    assert sorted(once.concepts) == sorted(label.concepts)


@given(labels(concepts=5), st.integers(0, 2 ** 16))
def test_equivalent_variants_share_mask(label, seed):
    rng = np.random.default_rng(seed)
    arrays = rng.random((5, 2, 9)) < 0.5
    from concept_align.services.masks.dataset import ConceptDataset

    dataset = ConceptDataset.from_bool([f"k{i}" for i in range(5)], list(arrays))
    expected = evaluate_label(label, dataset)
    assert evaluate_label(canonicalize(label), dataset) == expected
    for variant in equivalent_variants(label):
        assert evaluate_label(variant, dataset) == expected
    assert evaluate_label(normal_form(label), dataset) == expected


def test_head_swap_is_an_equivalent():
    label = Label(1).extend(Operator.AND, 0)
    assert [v.key() for v in equivalent_variants(label)] == ["(0 AND 1)"]
    assert normal_form(label).key() == "(0 AND 1)"
    assert equivalent_variants(Label(1).extend(Operator.AND_NOT, 0)) == []


def test_expansion_order_rule():
    label = Label(0).extend(Operator.OR, 3)
    assert not is_expansion_allowed(label, Operator.OR, 2)
    assert is_expansion_allowed(label, Operator.OR, 4)
    assert is_expansion_allowed(label, Operator.AND, 2)
    assert not is_expansion_allowed(label, Operator.AND, 3)


def test_parse_operators():
    assert parse_operators("andnot, or") == (Operator.OR, Operator.AND_NOT)
    with pytest.raises(ValueError):
        parse_operators("or,xor")


def _explanation(label, value):
    return Explanation(label=label, text=label.key(), iou=value, stats=SearchStats())


def test_classify_difference():
    a = _explanation(Label(0).extend(Operator.AND, 1), Rational(2, 3))
    assert classify_difference(a, _explanation(Label(1).extend(Operator.AND, 0), Rational(2, 3))) \
        is DifferenceCategory.SAME
    assert classify_difference(a, _explanation(Label(0).extend(Operator.OR, 1), Rational(2, 3))) \
        is DifferenceCategory.CAT3
    assert classify_difference(a, _explanation(Label(0).extend(Operator.OR, 2), Rational(3, 5))) \
        is DifferenceCategory.CAT1
    assert classify_difference(a, _explanation(Label(0).extend(Operator.OR, 1), Rational(1, 3))) \
        is DifferenceCategory.CAT2
