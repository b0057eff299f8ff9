"""
إعدادات الحزمة: نماذج pydantic للتحقق من المعاملات وقراءة متغيرات البيئة
"""
import os
from typing import Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .operators import ALL_OPERATORS, Operator
from .errors import ConfigError

DEFAULT_QUANTILE = 0.005
DEFAULT_BRUTE_FORCE_CAP = 10 ** 7
DEFAULT_PREFIX_CACHE_SIZE = 4096


def _canonical_operators(value: Tuple[Operator, ...]) -> Tuple[Operator, ...]:
    if not value:
        raise ValueError("at least one operator is required")
    return tuple(sorted(set(value), key=ALL_OPERATORS.index))


class SynthConfig(BaseModel):
    """إعدادات توليد مجموعة بيانات اصطناعية"""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(0, ge=0, lt=2 ** 64)
    concepts: int = Field(8, ge=1)
    samples: int = Field(16, ge=1)
    features: int = Field(64, ge=1)
    annotation_density: float = Field(0.5, ge=0.0, le=1.0)
    overlap_density: float = Field(0.3, ge=0.0, le=1.0)
    neuron_fire_rate: float = Field(0.05, ge=0.0, le=1.0)
    max_concepts_per_feature: int = Field(3, ge=1)
    # طول التسمية المزروعة في العصبون (0 = تنشيط عشوائي فقط)
    planted_length: int = Field(2, ge=0)
    planted_recall: float = Field(0.9, ge=0.0, le=1.0)


class SearchLimits(BaseModel):
    """حدود الميزانية وخيارات البحث الأمثل"""

    model_config = ConfigDict(frozen=True)

    max_nodes: Optional[int] = Field(None, ge=1)
    max_seconds: Optional[float] = Field(None, gt=0)
    prefix_cache_size: int = Field(DEFAULT_PREFIX_CACHE_SIZE, ge=1)
    backpropagation: bool = True
    equivalences: bool = True
    max_equivalents: int = Field(24, ge=1)


class BeamConfig(BaseModel):
    """إعدادات البحث الشعاعي"""

    model_config = ConfigDict(frozen=True)

    beam_size: int = Field(5, ge=1)
    max_length: int = Field(3, ge=1)
    operators: Tuple[Operator, ...] = ALL_OPERATORS

    @field_validator("operators")
    @classmethod
    def _check_operators(cls, value: Tuple[Operator, ...]) -> Tuple[Operator, ...]:
        return _canonical_operators(value)


class Settings(BaseModel):
    """إعدادات العملية المقروءة من متغيرات البيئة"""

    model_config = ConfigDict(frozen=True)

    log_level: str = "warn"
    brute_force_cap: int = Field(DEFAULT_BRUTE_FORCE_CAP, ge=1)
    quantile: float = Field(DEFAULT_QUANTILE, gt=0.0, lt=1.0)

    @field_validator("log_level")
    @classmethod
    def _check_level(cls, value: str) -> str:
        value = value.strip().lower()
        if value not in ("error", "warn", "info", "debug", "trace"):
            raise ValueError(f"unknown log level: {value}")
        return value

    @classmethod
    def from_env(cls) -> "Settings":
        """قراءة الإعدادات من البيئة بعد تحميل ملف .env إن وجد"""
        load_dotenv()
        values = {}
        if "CONCEPT_ALIGN_LOG" in os.environ:
            values["log_level"] = os.environ["CONCEPT_ALIGN_LOG"]
        if "CONCEPT_ALIGN_BRUTE_FORCE_CAP" in os.environ:
            values["brute_force_cap"] = os.environ["CONCEPT_ALIGN_BRUTE_FORCE_CAP"]
        if "CONCEPT_ALIGN_QUANTILE" in os.environ:
            values["quantile"] = os.environ["CONCEPT_ALIGN_QUANTILE"]
        return build(cls, **values)


def build(model: type, **values):
    """
    إنشاء نموذج إعدادات وتحويل أخطاء التحقق إلى ConfigError
    """
    try:
        return model(**values)
    except ValidationError as e:
        raise ConfigError(f"خطأ في الإعدادات: {e}") from e


ALGORITHMS = ("optimal", "beam", "beam-vanilla", "brute")


class RunConfig(BaseModel):
    """إعدادات تشغيل خوارزمية واحدة على وحدة واحدة، تُعاد في التقرير كما هي"""

    model_config = ConfigDict(frozen=True)

    algorithm: str = "optimal"
    max_length: int = Field(3, ge=1)
    beam_size: int = Field(5, ge=1)
    operators: Tuple[Operator, ...] = ALL_OPERATORS
    backpropagation: bool = True
    max_nodes: Optional[int] = Field(None, ge=1)
    max_seconds: Optional[float] = Field(None, gt=0)
    top: int = Field(10, ge=1)
    seedless_output: bool = False

    @field_validator("algorithm")
    @classmethod
    def _check_algorithm(cls, value: str) -> str:
        if value not in ALGORITHMS:
            raise ValueError(f"unknown algorithm: {value}")
        return value

    @field_validator("operators")
    @classmethod
    def _check_operators(cls, value: Tuple[Operator, ...]) -> Tuple[Operator, ...]:
        return _canonical_operators(value)

    def limits(self) -> SearchLimits:
        return SearchLimits(
            max_nodes=self.max_nodes,
            max_seconds=self.max_seconds,
            backpropagation=self.backpropagation,
        )

    def beam(self) -> BeamConfig:
        return BeamConfig(beam_size=self.beam_size, max_length=self.max_length, operators=self.operators)

    def echo(self) -> dict:
        """نسخة JSON من الإعدادات للتقرير"""
        values = self.model_dump(mode="json", exclude={"seedless_output"})
        if self.algorithm not in ("beam", "beam-vanilla"):
            values.pop("beam_size")
        if self.algorithm != "optimal":
            for key in ("backpropagation", "max_nodes", "max_seconds"):
                values.pop(key)
        if self.algorithm != "brute":
            values.pop("top")
        return values
