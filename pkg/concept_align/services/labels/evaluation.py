from typing import List, Optional

from ...core.rational import Rational
from ..masks.bit_matrix import BitMatrix
from ..masks.dataset import ConceptDataset, NeuronMask
from ..quantities.models import ConceptQuantities, NeuronSplit, Partition
from ..quantities.quantity_analyzer import compute_neuron_split, mask_quantities
from .label import Label


def evaluate_label(label: Label, dataset: ConceptDataset) -> BitMatrix:
    """طي الأقنعة من اليسار بالروابط بالترتيب"""
    mask = dataset.mask(label.head)
    for op, k in label.tail:
        mask = op.apply(mask, dataset.mask(k))
    return mask


def prefix_masks(label: Label, dataset: ConceptDataset) -> List[BitMatrix]:
    masks = [dataset.mask(label.head)]
    for op, k in label.tail:
        masks.append(op.apply(masks[-1], dataset.mask(k)))
    return masks


def mask_iou(mask: BitMatrix, neuron: NeuronMask) -> Rational:
    return Rational.ratio((mask & neuron.mask).popcount(), (mask | neuron.mask).popcount())


def iou(label: Label, neuron: NeuronMask, dataset: ConceptDataset) -> Rational:
    """
    IoU بين قناع التسمية وقناع العصبون

    Returns:
        Rational: |N ∩ M| / |N ∪ M|، و 0/1 إذا كان القناعان فارغين
    """
    neuron.check_compatible(dataset)
    return mask_iou(evaluate_label(label, dataset), neuron)


def exact_label_quantities(
    label: Label,
    dataset: ConceptDataset,
    neuron: NeuronMask,
    partition: Partition,
    split: Optional[NeuronSplit] = None,
) -> List[ConceptQuantities]:
    """
    الكميات الدقيقة لكل بادئة من التسمية، بالترتيب من الطول 1 إلى الطول الكامل
    """
    if split is None:
        split = compute_neuron_split(neuron, partition)
    return [mask_quantities(mask, split) for mask in prefix_masks(label, dataset)]
