"""
قراءة وكتابة ملفات الأقنعة الثنائية

التنسيقات (كل الأعداد little-endian):
    CMA1: u32 K, u32 S, u32 d، ثم K أسماء (u16 طول + UTF-8)، ثم K حمولات بطول S*ceil(d/8)
    NAM1: u32 S, u32 d، ثم حمولة واحدة
    NAF1: u32 S, u32 d، ثم S*d قيمة float32
"""
import struct
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from ...core.errors import ArchiveFormatError, EmptyConceptError
from ...utils.logging import logger
from .activations import binarize_activations
from .bit_matrix import BitMatrix, row_bytes
from .dataset import ConceptDataset, NeuronMask

CONCEPT_MAGIC = b"CMA1"
NEURON_MAGIC = b"NAM1"
ACTIVATION_MAGIC = b"NAF1"

PathLike = Union[str, Path]


class _Reader:
    """قارئ متسلسل يتتبع موضع البايت لرسائل الخطأ"""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise ArchiveFormatError(
                f"truncated {what}: expected {size} bytes, found {len(self.data) - self.offset}",
                self.offset,
            )
        chunk = self.data[self.offset:end]
        self.offset = end
        return chunk

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def u16(self, what: str) -> int:
        return struct.unpack("<H", self.take(2, what))[0]

    def magic(self, expected: bytes) -> None:
        found = self.take(4, "magic")
        if found != expected:
            raise ArchiveFormatError(f"bad magic {found!r}, expected {expected!r}", 0)

    def finish(self) -> None:
        if self.offset != len(self.data):
            raise ArchiveFormatError(
                f"{len(self.data) - self.offset} trailing bytes after the last payload", self.offset
            )


def _read(path: PathLike) -> bytes:
    return Path(path).read_bytes()


def _payload(reader: _Reader, samples: int, features: int, what: str) -> BitMatrix:
    start = reader.offset
    size = samples * row_bytes(features)
    chunk = reader.take(size, what)
    try:
        return BitMatrix.from_bytes(samples, features, chunk)
    except ValueError as e:
        raise ArchiveFormatError(f"{what}: {e}", start) from e


def read_concept_archive(data: bytes, strict: bool = True) -> ConceptDataset:
    """
    فك ترميز أرشيف المفاهيم CMA1 من البايتات

    Args:
        data: محتوى الملف
        strict: رفض المفاهيم الفارغة (وإلا يُسجَّل تحذير فقط)
    """
    reader = _Reader(data)
    reader.magic(CONCEPT_MAGIC)
    count = reader.u32("concept count")
    samples = reader.u32("sample count")
    features = reader.u32("feature count")
    if count == 0:
        raise ArchiveFormatError("archive declares zero concepts", 4)
    if samples == 0 or features == 0:
        raise ArchiveFormatError(f"invalid dimensions {samples}x{features}", 8)

    names: List[str] = []
    seen = set()
    for i in range(count):
        start = reader.offset
        length = reader.u16(f"name length of concept {i}")
        raw = reader.take(length, f"name of concept {i}")
        try:
            name = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ArchiveFormatError(f"name of concept {i} is not valid UTF-8", start + 2) from e
        if name in seen:
            raise ArchiveFormatError(f"duplicate concept name {name!r}", start)
        seen.add(name)
        names.append(name)

    expected = count * samples * row_bytes(features)
    remaining = len(data) - reader.offset
    if remaining != expected:
        raise ArchiveFormatError(
            f"payload size mismatch: expected {expected} bytes "
            f"({count} x {samples} x {row_bytes(features)}), found {remaining}",
            reader.offset,
        )

    masks = []
    for i, name in enumerate(names):
        start = reader.offset
        mask = _payload(reader, samples, features, f"mask of concept {name!r}")
        if not mask.any():
            if strict:
                raise EmptyConceptError(f"concept {name!r} has no annotation", start)
            logger.warning("المفهوم %r بدون أي تعليق، كل تسمية تحتويه متدهورة", name)
        masks.append(mask)
    reader.finish()

    logger.info("تم تحميل أرشيف المفاهيم: K=%d S=%d d=%d", count, samples, features)
    return ConceptDataset(names, masks)


def encode_concept_archive(dataset: ConceptDataset) -> bytes:
    parts = [CONCEPT_MAGIC, struct.pack("<III", dataset.size, dataset.samples, dataset.features)]
    for name in dataset.concept_names:
        raw = name.encode("utf-8")
        if len(raw) > 0xFFFF:
            raise ValueError(f"concept name too long: {len(raw)} bytes")
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
    parts.extend(m.to_bytes() for m in dataset.concept_masks)
    return b"".join(parts)


def load_concept_archive(path: PathLike, strict: bool = True) -> ConceptDataset:
    return read_concept_archive(_read(path), strict=strict)


def write_concept_archive(dataset: ConceptDataset, path: PathLike) -> None:
    Path(path).write_bytes(encode_concept_archive(dataset))


def read_neuron_mask(data: bytes) -> NeuronMask:
    reader = _Reader(data)
    reader.magic(NEURON_MAGIC)
    samples = reader.u32("sample count")
    features = reader.u32("feature count")
    if samples == 0 or features == 0:
        raise ArchiveFormatError(f"invalid dimensions {samples}x{features}", 4)
    expected = samples * row_bytes(features)
    if len(data) - reader.offset != expected:
        raise ArchiveFormatError(
            f"payload size mismatch: expected {expected} bytes, found {len(data) - reader.offset}",
            reader.offset,
        )
    mask = _payload(reader, samples, features, "neuron mask")
    reader.finish()
    return NeuronMask(mask)


def encode_neuron_mask(neuron: NeuronMask) -> bytes:
    m = neuron.mask
    return NEURON_MAGIC + struct.pack("<II", m.samples, m.features) + m.to_bytes()


def load_neuron_mask(path: PathLike) -> NeuronMask:
    return read_neuron_mask(_read(path))


def write_neuron_mask(neuron: NeuronMask, path: PathLike) -> None:
    Path(path).write_bytes(encode_neuron_mask(neuron))


def read_raw_activations(data: bytes) -> np.ndarray:
    """فك ترميز ملف تنشيطات NAF1 إلى مصفوفة float32 بأبعاد S×d"""
    reader = _Reader(data)
    reader.magic(ACTIVATION_MAGIC)
    samples = reader.u32("sample count")
    features = reader.u32("feature count")
    if samples == 0 or features == 0:
        raise ArchiveFormatError(f"invalid dimensions {samples}x{features}", 4)
    expected = samples * features * 4
    if len(data) - reader.offset != expected:
        raise ArchiveFormatError(
            f"payload size mismatch: expected {expected} bytes, found {len(data) - reader.offset}",
            reader.offset,
        )
    values = np.frombuffer(reader.take(expected, "activations"), dtype="<f4")
    return values.reshape(samples, features).astype(np.float32)


def load_raw_activations(path: PathLike) -> np.ndarray:
    return read_raw_activations(_read(path))


def write_raw_activations(raw, path: PathLike) -> None:
    raw = np.asarray(raw, dtype="<f4")
    if raw.ndim != 2:
        raise ValueError("activations must be a 2-D S x d array")
    samples, features = raw.shape
    Path(path).write_bytes(ACTIVATION_MAGIC + struct.pack("<II", samples, features) + raw.tobytes())


def sniff_magic(path: PathLike) -> bytes:
    """قراءة أول أربعة بايتات لتحديد نوع الملف"""
    with open(path, "rb") as fh:
        return fh.read(4)


def load_neuron(path: PathLike, quantile: float, upper_value: Optional[float] = None) -> NeuronMask:
    """
    تحميل عصبون من ملف NAM1 مباشرة أو من تنشيطات NAF1 بعد تحويلها إلى قناع
    """
    magic = sniff_magic(path)
    if magic == NEURON_MAGIC:
        return load_neuron_mask(path)
    if magic == ACTIVATION_MAGIC:
        return binarize_activations(load_raw_activations(path), quantile, upper_value)
    raise ArchiveFormatError(f"unknown neuron file magic {magic!r}, expected NAM1 or NAF1", 0)
