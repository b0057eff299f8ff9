"""
خدمة التقارير: نماذج JSON وتشغيل الوحدات وتجميع المقارنات
"""

from .models import (
    BenchReport,
    BenchRow,
    ComparisonReport,
    ComparisonSummary,
    IouValue,
    QuantityReport,
    RankedLabel,
    RunReport,
    RunStats,
    UnitComparison,
    dump,
)
from .schema import REPORT_KINDS, load_schema, validate_report
from .unit_analyzer import (
    BatchRunner,
    UnitAnalyzer,
    UnitResult,
    discover_units,
    summarize_bench,
    summarize_comparison,
)

__version__ = "0.1.0"
