"""
مولد مجموعات بيانات اصطناعية لاختبار البحث ومقارنته

الكثافة والتداخل يحددان درجة التعقيد: تداخل صفري يعطي مفاهيم منفصلة تماماً.
"""
from typing import List, Tuple

import numpy as np

from ...core.config import SynthConfig
from ...core.operators import ALL_OPERATORS
from ...utils.logging import logger
from .bit_matrix import BitMatrix
from .dataset import ConceptDataset, NeuronMask


class SyntheticGenerator:
    def __init__(self, config: SynthConfig):
        """
        تهيئة المولد

        Args:
            config: إعدادات التوليد (البذرة والأبعاد والكثافات)
        """
        self.config = config

    def generate(self) -> Tuple[ConceptDataset, NeuronMask]:
        """توليد مجموعة مفاهيم وعصبون واحد من نفس تدفق البذرة"""
        rng = np.random.default_rng(self.config.seed)
        masks = self._concept_masks(rng)
        neuron = self._plant_neuron(masks, rng)
        return self._dataset(masks), NeuronMask(BitMatrix.from_bool(neuron))

    def generate_units(self, units: int) -> Tuple[ConceptDataset, List[Tuple[str, NeuronMask]]]:
        """
        توليد مجموعة مفاهيم واحدة مع عدة عصبونات مستقلة

        Returns:
            المجموعة، وقائمة (اسم الوحدة، القناع) مرتبة حسب الاسم
        """
        rng = np.random.default_rng(self.config.seed)
        masks = self._concept_masks(rng)
        neurons = []
        for unit in range(units):
            unit_rng = np.random.default_rng((self.config.seed, unit + 1))
            mask = self._plant_neuron(masks, unit_rng)
            neurons.append((f"unit_{unit:04d}", NeuronMask(BitMatrix.from_bool(mask))))
        return self._dataset(masks), neurons

    def _dataset(self, masks: np.ndarray) -> ConceptDataset:
        names = [f"c{k + 1}" for k in range(self.config.concepts)]
        return ConceptDataset.from_bool(names, list(masks))

    def _concept_masks(self, rng: np.random.Generator) -> np.ndarray:
        cfg = self.config
        shape = (cfg.samples, cfg.features)
        masks = np.zeros((cfg.concepts,) + shape, dtype=bool)

        # المفهوم الأساسي لكل موضع معلَّم
        layer = rng.random(shape) < cfg.annotation_density
        primary = rng.integers(cfg.concepts, size=shape)
        rows, cols = np.nonzero(layer)
        masks[primary[rows, cols], rows, cols] = True

        # مفهوم ثانٍ ثم ثالث باحتمال التداخل
        for _ in range(1, cfg.max_concepts_per_feature):
            layer = layer & (rng.random(shape) < cfg.overlap_density)
            extra = rng.integers(cfg.concepts, size=shape)
            rows, cols = np.nonzero(layer)
            masks[extra[rows, cols], rows, cols] = True

        self._fill_empty(masks, rng)
        return masks

    def _fill_empty(self, masks: np.ndarray, rng: np.random.Generator) -> None:
        """إعطاء كل مفهوم فارغ موضعاً واحداً على الأقل مع الحفاظ على الانفصال ما أمكن"""
        for k in range(masks.shape[0]):
            if masks[k].any():
                continue
            counts = masks.sum(axis=0)
            free = np.argwhere(counts == 0)
            if len(free):
                x, j = free[rng.integers(len(free))]
                masks[k, x, j] = True
                logger.debug("المفهوم %d كان فارغاً، أُضيف له موضع غير معلَّم", k)
                continue

            # نقل موضع من مفهوم وحيد فيه ويملك موضعين على الأقل
            sizes = masks.reshape(masks.shape[0], -1).sum(axis=1)
            owner = masks.argmax(axis=0)
            movable = np.argwhere((counts == 1) & (sizes[owner] >= 2))
            if len(movable):
                x, j = movable[rng.integers(len(movable))]
                masks[owner[x, j], x, j] = False
                masks[k, x, j] = True
                logger.debug("المفهوم %d كان فارغاً، نُقل إليه موضع من المفهوم %d", k, owner[x, j])
                continue

            donor = int(sizes.argmax())
            x, j = np.argwhere(masks[donor])[0]
            masks[k, x, j] = True
            logger.debug("المفهوم %d كان فارغاً، شارك موضعاً مع المفهوم %d", k, donor)

    def _plant_neuron(self, masks: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        cfg = self.config
        shape = masks.shape[1:]
        neuron = np.zeros(shape, dtype=bool)

        length = min(cfg.planted_length, cfg.concepts)
        if length >= 1:
            concepts = rng.choice(cfg.concepts, size=length, replace=False)
            planted = masks[concepts[0]].copy()
            for k in concepts[1:]:
                op = ALL_OPERATORS[rng.integers(len(ALL_OPERATORS))]
                planted = op.apply(planted, masks[k])
            neuron |= planted & (rng.random(shape) < cfg.planted_recall)

        neuron |= rng.random(shape) < cfg.neuron_fire_rate
        return neuron


def generate_synthetic(config: SynthConfig) -> Tuple[ConceptDataset, NeuronMask]:
    return SyntheticGenerator(config).generate()


def generate_units(config: SynthConfig, units: int) -> Tuple[ConceptDataset, List[Tuple[str, NeuronMask]]]:
    return SyntheticGenerator(config).generate_units(units)
