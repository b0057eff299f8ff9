"""
concept-align: تفسيرات تركيبية مثلى لعصبونات الشبكات العصبية
"""

__version__ = "0.1.0"
