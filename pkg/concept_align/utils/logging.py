"""
إعداد سجل الأحداث للحزمة

كل رسائل التشخيص تذهب إلى stderr، ويبقى stdout لتقارير JSON.
"""
import logging
import sys
from typing import Optional

TRACE = 5
logging.addLevelName(TRACE, "TRACE")

_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
    "trace": TRACE,
}

logger = logging.getLogger("concept_align")


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """
    ضبط مستوى السجل ومعالج stderr

    Args:
        level: أحد error/warn/info/debug/trace، وإن لم يُحدد يُقرأ من CONCEPT_ALIGN_LOG
    """
    if level is None:
        from ..core.config import Settings

        level = Settings.from_env().log_level
    logger.setLevel(_LEVELS.get(level.lower(), logging.WARNING))
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)
    else:
        # stderr قد يُستبدل بين الاستدعاءات (مثل CliRunner)
        for handler in logger.handlers:
            if isinstance(handler, logging.StreamHandler):
                handler.setStream(sys.stderr)
    return logger


def trace(message: str, *args) -> None:
    if logger.isEnabledFor(TRACE):
        logger.log(TRACE, message, *args)
