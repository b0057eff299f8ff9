from typing import Dict, List, Optional, Sequence

import numpy as np

from ...utils.logging import logger
from ..masks.bit_matrix import POPCOUNT_TABLE, BitMatrix
from ..masks.dataset import ConceptDataset, NeuronMask
from .models import (
    QUANTITY_NAMES,
    ConceptQuantities,
    DisjointMatrix,
    NeuronSplit,
    Partition,
    TopBott,
)


def compute_partition(dataset: ConceptDataset) -> Partition:
    """
    تقسيم المواضع المعلَّمة إلى فريدة ومشتركة بعدّ التعليقات في كل موضع
    """
    counts = np.zeros(dataset.shape, dtype=np.int32)
    for mask in dataset.concept_masks:
        counts += mask.to_bool()
    return Partition(unique=BitMatrix.from_bool(counts == 1), common=BitMatrix.from_bool(counts >= 2))


def compute_neuron_split(neuron: NeuronMask, partition: Partition) -> NeuronSplit:
    """
    مواضع تنشيط العصبون على العناصر الفريدة والمشتركة، ومساحة الزوائد المتبقية
    """
    n = neuron.mask
    partition.unique.check_shape(n)
    nu = n & partition.unique
    nc = n & partition.common
    seu = partition.unique.andnot(n)
    sec = partition.common.andnot(n)
    return NeuronSplit(
        nu_per_sample=nu.popcount_per_sample(),
        nc_per_sample=nc.popcount_per_sample(),
        sec_per_sample=sec.popcount_per_sample(),
        seu_per_sample=seu.popcount_per_sample(),
        n_total=n.popcount(),
        nu_mask=nu,
        nc_mask=nc,
        seu_mask=seu,
        sec_mask=sec,
    )


def mask_quantities(mask: BitMatrix, split: NeuronSplit) -> ConceptQuantities:
    """الكميات الأربع لأي قناع (مفهوم أو تسمية مركبة)"""
    return ConceptQuantities(
        iu=(mask & split.nu_mask).popcount_per_sample(),
        ic=(mask & split.nc_mask).popcount_per_sample(),
        eu=(mask & split.seu_mask).popcount_per_sample(),
        ec=(mask & split.sec_mask).popcount_per_sample(),
    )


def compute_concept_quantities(
    k: int,
    neuron: NeuronMask,
    partition: Partition,
    dataset: ConceptDataset,
    split: Optional[NeuronSplit] = None,
) -> ConceptQuantities:
    if split is None:
        split = compute_neuron_split(neuron, partition)
    return mask_quantities(dataset.mask(k), split)


def compute_all_quantities(dataset: ConceptDataset, split: NeuronSplit) -> List[ConceptQuantities]:
    """كميات كل المفاهيم دفعة واحدة على البتات المضغوطة"""
    stacked = np.stack([m.bits for m in dataset.concept_masks])
    per_region = {}
    for name, region in (("iu", split.nu_mask), ("ic", split.nc_mask), ("eu", split.seu_mask), ("ec", split.sec_mask)):
        per_region[name] = POPCOUNT_TABLE[stacked & region.bits].sum(axis=2, dtype=np.int64)
    return [
        ConceptQuantities(
            iu=per_region["iu"][k], ic=per_region["ic"][k], eu=per_region["eu"][k], ec=per_region["ec"][k]
        )
        for k in range(dataset.size)
    ]


def compute_disjoint_matrix(dataset: ConceptDataset) -> DisjointMatrix:
    """D[k1, k2] صحيح إذا كان AND القناعين صفرياً"""
    stacked = np.stack([m.bits for m in dataset.concept_masks])
    size = dataset.size
    matrix = np.zeros((size, size), dtype=bool)
    for k in range(size):
        overlap = (stacked & stacked[k]).reshape(size, -1).any(axis=1)
        matrix[k] = ~overlap
    matrix.flags.writeable = False
    return DisjointMatrix(matrix)


def compute_top_bott(quantities: Sequence[ConceptQuantities], max_length: int) -> TopBott:
    """
    متجهات Top_t و Bott_1 لكل عينة ومجمعة، حتى t = n - 1

    Args:
        quantities: كميات كل المفاهيم
        max_length: الطول الأقصى للتسمية n
    """
    if max_length < 1:
        raise ValueError(f"max_length must be at least 1, got {max_length}")
    depth = max_length - 1
    top, bott, top_agg, bott_agg, bott_zero = {}, {}, {}, {}, {}
    for name in QUANTITY_NAMES:
        values = np.stack([q.vector(name) for q in quantities])  # (K, S)
        ordered = -np.sort(-values, axis=0)
        if ordered.shape[0] < depth:
            # أصفار تكميلية: المجموع التراكمي يتشبع
            pad = np.zeros((depth - ordered.shape[0], ordered.shape[1]), dtype=np.int64)
            ordered = np.vstack([ordered, pad])
        top[name] = np.cumsum(ordered[:depth], axis=0, dtype=np.int64)
        bott[name] = values.min(axis=0)

        totals = sorted((q.total(name) for q in quantities), reverse=True)
        totals += [0] * max(0, depth - len(totals))
        running, cumulative = 0, []
        for value in totals[:depth]:
            running += value
            cumulative.append(running)
        top_agg[name] = tuple(cumulative)
        bott_agg[name] = min(q.total(name) for q in quantities)
        bott_zero[name] = not bool(bott[name].any())
    return TopBott(top=top, bott=bott, top_agg=top_agg, bott_agg=bott_agg, bott_zero=bott_zero, depth=depth)


class QuantityAnalyzer:
    def __init__(self, dataset: ConceptDataset, neuron: NeuronMask, max_length: int):
        """
        تهيئة محلل الكميات لزوج (مجموعة مفاهيم، عصبون)

        الكميات الذرية تُحسب مرة واحدة وتُشارك بين كل الخوارزميات.
        """
        neuron.check_compatible(dataset)
        self.dataset = dataset
        self.neuron = neuron
        self.max_length = max_length

        self.partition = compute_partition(dataset)
        self.split = compute_neuron_split(neuron, self.partition)
        self.quantities = compute_all_quantities(dataset, self.split)
        self.disjoint = compute_disjoint_matrix(dataset)
        self.topbott = compute_top_bott(self.quantities, max_length)
        logger.debug(
            "الكميات جاهزة: K=%d |N|=%d |N^U|=%d |N^C|=%d",
            dataset.size, self.split.n_total, self.split.nu, self.split.nc,
        )

    @property
    def n_total(self) -> int:
        return self.split.n_total

    def concept(self, k: int) -> ConceptQuantities:
        return self.quantities[k]

    def analyze(self) -> Dict:
        """
        ملخص الكميات لكل مفهوم مع مصفوفة الانفصال

        Returns:
            Dict: جاهز للتحويل إلى JSON
        """
        concepts = []
        for k, q in enumerate(self.quantities):
            diou = q.diou(self.n_total)
            concepts.append({
                'id': k,
                'name': self.dataset.name(k),
                'quantities': q.totals(),
                'diou': str(diou),
                'diou_value': diou.decimal(),
            })
        return {
            'samples': self.dataset.samples,
            'features': self.dataset.features,
            'neuron': {
                'n_total': self.split.n_total,
                'nu': self.split.nu,
                'nc': self.split.nc,
                'sec': self.split.sec,
                'seu': self.split.seu,
            },
            'concepts': concepts,
            'disjoint_matrix': self.disjoint.matrix.astype(int).tolist(),
        }

    def per_sample(self) -> Dict:
        """متجهات الكميات لكل عينة"""
        return {
            self.dataset.name(k): {name: q.vector(name).tolist() for name in QUANTITY_NAMES}
            for k, q in enumerate(self.quantities)
        }
