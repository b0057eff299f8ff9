"""
أدوات مساعدة مشتركة
"""

from .logging import configure_logging, logger
