from typing import Optional

import numpy as np

from ...core.errors import DimensionMismatchError

# عدد البتات المضبوطة لكل قيمة بايت
POPCOUNT_TABLE = np.unpackbits(np.arange(256, dtype=np.uint8)[:, None], axis=1).sum(axis=1).astype(np.uint8)


def row_bytes(features: int) -> int:
    """عدد البايتات لكل عينة: ceil(d/8)"""
    return (features + 7) // 8


class BitMatrix:
    """
    مصفوفة ثنائية S×d مضغوطة بتياً

    الترتيب حسب العينة، والبت j من العينة x في البايت x*ceil(d/8)+floor(j/8)
    عند الموضع j mod 8 بدءاً من البت الأقل أهمية. بتات الحشو دائماً أصفار.
    """

    __slots__ = ("samples", "features", "bits")

    def __init__(self, samples: int, features: int, bits: np.ndarray):
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        if bits.shape != (samples, row_bytes(features)):
            raise DimensionMismatchError(
                f"payload shape {bits.shape} does not match ({samples}, {row_bytes(features)})"
            )
        pad = _padding_mask(features)
        if pad is not None and np.any(bits[:, -1] & ~pad):
            raise ValueError("padding bits beyond the last feature must be zero")
        bits.flags.writeable = False
        self.samples = samples
        self.features = features
        self.bits = bits

    @classmethod
    def from_bool(cls, array) -> "BitMatrix":
        array = np.asarray(array, dtype=bool)
        if array.ndim == 1:
            array = array[None, :]
        samples, features = array.shape
        return cls(samples, features, np.packbits(array, axis=1, bitorder="little"))

    @classmethod
    def zeros(cls, samples: int, features: int) -> "BitMatrix":
        return cls(samples, features, np.zeros((samples, row_bytes(features)), dtype=np.uint8))

    @classmethod
    def from_bytes(cls, samples: int, features: int, payload: bytes) -> "BitMatrix":
        bits = np.frombuffer(payload, dtype=np.uint8).reshape(samples, row_bytes(features)).copy()
        return cls(samples, features, bits)

    @property
    def shape(self):
        return (self.samples, self.features)

    def to_bool(self) -> np.ndarray:
        return np.unpackbits(self.bits, axis=1, count=self.features, bitorder="little").astype(bool)

    def to_bytes(self) -> bytes:
        return self.bits.tobytes()

    def popcount(self) -> int:
        return int(POPCOUNT_TABLE[self.bits].sum(dtype=np.int64))

    def popcount_per_sample(self) -> np.ndarray:
        return POPCOUNT_TABLE[self.bits].sum(axis=1, dtype=np.int64)

    def any(self) -> bool:
        return bool(self.bits.any())

    def check_shape(self, other: "BitMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shape {other.shape} does not match {self.shape}")

    def __and__(self, other: "BitMatrix") -> "BitMatrix":
        self.check_shape(other)
        return BitMatrix(self.samples, self.features, self.bits & other.bits)

    def __or__(self, other: "BitMatrix") -> "BitMatrix":
        self.check_shape(other)
        return BitMatrix(self.samples, self.features, self.bits | other.bits)

    def __invert__(self) -> "BitMatrix":
        bits = ~self.bits
        pad = _padding_mask(self.features)
        if pad is not None:
            bits[:, -1] &= pad
        return BitMatrix(self.samples, self.features, bits)

    def andnot(self, other: "BitMatrix") -> "BitMatrix":
        self.check_shape(other)
        return BitMatrix(self.samples, self.features, self.bits & ~other.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.samples, self.features, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix(samples={self.samples}, features={self.features}, popcount={self.popcount()})"


def _padding_mask(features: int) -> Optional[np.uint8]:
    used = features % 8
    if used == 0:
        return None
    return np.uint8((1 << used) - 1)
