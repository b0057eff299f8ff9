import math
from typing import Optional

import numpy as np

from ...core.errors import InvalidActivationsError
from ...utils.logging import logger
from .bit_matrix import BitMatrix
from .dataset import NeuronMask


def _top_threshold(values: np.ndarray, fraction: float) -> float:
    """قيمة العنصر رقم k الأكبر حيث k = ceil(fraction * n)"""
    n = values.size
    k = max(1, math.ceil(fraction * n - 1e-9))
    k = min(k, n)
    return float(np.partition(values, n - k)[n - k])


def binarize_activations(
    raw,
    quantile: float,
    upper_value: Optional[float] = None,
) -> NeuronMask:
    """
    تحويل تنشيطات العصبون الحقيقية إلى قناع ثنائي

    تُجمع كل قيم S×d معاً ويُضبط البت حيث التنشيط >= عتبة الكمية (1 - quantile).

    Args:
        raw: مصفوفة التنشيطات بأبعاد S×d
        quantile: نسبة القيم العليا المعتبرة نشطة، ضمن (0, 1)
        upper_value: حد علوي اختياري للمجال؛ يُضبط البت فقط حيث التنشيط <= هذه القيمة

    Returns:
        NeuronMask: القناع الثنائي
    """
    if not 0.0 < quantile < 1.0:
        raise InvalidActivationsError(f"quantile must be in (0, 1), got {quantile}")
    values = np.asarray(raw, dtype=np.float64)
    if values.ndim == 1:
        values = values[None, :]
    if values.ndim != 2 or values.size == 0:
        raise InvalidActivationsError(f"activations must be a non-empty S x d matrix, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise InvalidActivationsError("activations contain NaN or infinite values")

    flat = values.ravel()
    threshold = _top_threshold(flat, quantile)
    mask = values >= threshold

    if upper_value is not None:
        if not math.isfinite(upper_value):
            raise InvalidActivationsError(f"upper cutoff must be finite, got {upper_value}")
        mask &= values <= upper_value

    logger.debug(
        "عتبة التنشيط %.6g: %d من %d موضع نشط",
        threshold, int(mask.sum()), values.size,
    )
    return NeuronMask(BitMatrix.from_bool(mask))
