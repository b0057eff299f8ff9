"""
الإعدادات والأخطاء المشتركة
"""

from .config import ALGORITHMS, BeamConfig, RunConfig, SearchLimits, Settings, SynthConfig
from .errors import (
    ArchiveFormatError,
    ConceptAlignError,
    ConfigError,
    DimensionMismatchError,
    EmptyConceptError,
    InvalidActivationsError,
    LabelError,
    SearchCapExceededError,
)
from .operators import ALL_OPERATORS, Operator, parse_operators
from .rational import ZERO, Rational
