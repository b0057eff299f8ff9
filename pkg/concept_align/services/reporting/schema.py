"""
التحقق من تقارير JSON مقابل المخطط المرفق بالحزمة
"""
import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

from jsonschema import Draft202012Validator

SCHEMA_PATH = Path(__file__).resolve().parents[2] / "schemas" / "report.schema.json"
REPORT_KINDS = ("RunReport", "ComparisonReport", "BenchReport", "QuantityReport")


@lru_cache(maxsize=1)
def load_schema() -> Dict[str, Any]:
    return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def _validator(kind: str) -> Draft202012Validator:
    schema = load_schema()
    return Draft202012Validator({
        "$schema": schema["$schema"],
        "$defs": schema["$defs"],
        "$ref": f"#/$defs/{kind}",
    })


def validate_report(kind: str, report: Dict[str, Any]) -> None:
    """
    يرفع jsonschema.ValidationError إذا لم يطابق التقرير تعريف النوع
    """
    if kind not in REPORT_KINDS:
        raise ValueError(f"unknown report kind: {kind}")
    _validator(kind).validate(report)
