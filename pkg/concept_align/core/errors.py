"""
أخطاء حزمة concept-align
"""
from typing import Optional


class ConceptAlignError(Exception):
    """الخطأ الأساسي لكل أخطاء الحزمة"""


class ConfigError(ConceptAlignError):
    """إعدادات أو معاملات غير صالحة"""


class ArchiveFormatError(ConceptAlignError):
    """
    ملف أقنعة تالف أو غير متوافق مع التنسيق

    Args:
        message: وصف الخطأ
        offset: موضع البايت الذي اكتُشف عنده الخطأ
    """

    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


class EmptyConceptError(ArchiveFormatError):
    """مفهوم بدون أي تعليق توضيحي"""


class DimensionMismatchError(ConceptAlignError):
    """أبعاد قناع العصبون لا تطابق أبعاد مجموعة المفاهيم"""


class InvalidActivationsError(ConceptAlignError):
    """قيم تنشيط غير منتهية أو معامل كمية خارج المجال"""


class LabelError(ConceptAlignError):
    """تسمية منطقية غير صالحة"""


class SearchCapExceededError(ConceptAlignError):
    """حجم فضاء البحث يتجاوز الحد المسموح للبحث الشامل"""
