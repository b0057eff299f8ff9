from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from ...core.errors import DimensionMismatchError, LabelError
from .bit_matrix import BitMatrix


@dataclass(frozen=True)
class NeuronMask:
    """قناع تنشيط العصبون الثنائي"""

    mask: BitMatrix

    @property
    def shape(self) -> Tuple[int, int]:
        return self.mask.shape

    @property
    def is_empty(self) -> bool:
        return not self.mask.any()

    def check_compatible(self, dataset: "ConceptDataset") -> None:
        if self.mask.shape != dataset.shape:
            raise DimensionMismatchError(
                f"neuron mask is {self.mask.shape[0]}x{self.mask.shape[1]} "
                f"but the dataset is {dataset.samples}x{dataset.features}"
            )


class ConceptDataset:
    """
    مجموعة المفاهيم المسماة مع أقنعتها

    Args:
        concept_names: أسماء المفاهيم (فريدة)
        concept_masks: قناع لكل مفهوم بنفس الأبعاد
    """

    def __init__(self, concept_names: Sequence[str], concept_masks: Sequence[BitMatrix]):
        names = list(concept_names)
        masks = list(concept_masks)
        if not names:
            raise ValueError("a concept dataset needs at least one concept")
        if len(names) != len(masks):
            raise ValueError(f"{len(names)} names for {len(masks)} masks")
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"duplicate concept names: {duplicates}")
        shape = masks[0].shape
        for name, mask in zip(names, masks):
            if mask.shape != shape:
                raise DimensionMismatchError(f"concept {name!r} is {mask.shape}, expected {shape}")

        self._names: Tuple[str, ...] = tuple(names)
        self._masks: Tuple[BitMatrix, ...] = tuple(masks)
        self._index: Dict[str, int] = {n: i for i, n in enumerate(names)}

    @classmethod
    def from_bool(cls, concept_names: Sequence[str], arrays) -> "ConceptDataset":
        return cls(concept_names, [BitMatrix.from_bool(a) for a in arrays])

    @property
    def concept_names(self) -> Tuple[str, ...]:
        return self._names

    @property
    def concept_masks(self) -> Tuple[BitMatrix, ...]:
        return self._masks

    @property
    def size(self) -> int:
        return len(self._names)

    def __len__(self) -> int:
        return len(self._names)

    @property
    def samples(self) -> int:
        return self._masks[0].samples

    @property
    def features(self) -> int:
        return self._masks[0].features

    @property
    def shape(self) -> Tuple[int, int]:
        return self._masks[0].shape

    def mask(self, k: int) -> BitMatrix:
        if not 0 <= k < len(self._masks):
            raise LabelError(f"unknown concept id {k}")
        return self._masks[k]

    def name(self, k: int) -> str:
        if not 0 <= k < len(self._names):
            raise LabelError(f"unknown concept id {k}")
        return self._names[k]

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise LabelError(f"unknown concept name {name!r}") from None

    def empty_concepts(self) -> List[int]:
        return [k for k, m in enumerate(self._masks) if not m.any()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConceptDataset):
            return NotImplemented
        return self._names == other._names and self._masks == other._masks

    def __repr__(self) -> str:
        return f"ConceptDataset(concepts={self.size}, samples={self.samples}, features={self.features})"
