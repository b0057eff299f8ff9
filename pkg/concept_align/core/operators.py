from enum import Enum
from typing import Tuple


class Operator(str, Enum):
    """
    الروابط المنطقية المدعومة، وكلها تحافظ على الصفر: (0, 0) -> 0
    """

    OR = "OR"
    AND = "AND"
    AND_NOT = "AND NOT"

    def apply(self, left, right):
        """تطبيق الرابط على مصفوفتين (أو قناعين) بالعمليات البتية"""
        if self is Operator.OR:
            return left | right
        if self is Operator.AND:
            return left & right
        return left & ~right

    @classmethod
    def parse(cls, text: str) -> "Operator":
        key = text.strip().lower().replace(" ", "").replace("_", "")
        try:
            return _ALIASES[key]
        except KeyError:
            raise ValueError(f"unknown operator: {text}") from None


ALL_OPERATORS: Tuple[Operator, ...] = (Operator.OR, Operator.AND, Operator.AND_NOT)

_ALIASES = {
    "or": Operator.OR,
    "and": Operator.AND,
    "andnot": Operator.AND_NOT,
}


def parse_operators(text: str) -> Tuple[Operator, ...]:
    """تحويل قائمة مفصولة بفواصل مثل "or,and,andnot" إلى روابط"""
    ops = [Operator.parse(part) for part in text.split(",") if part.strip()]
    return tuple(op for op in ALL_OPERATORS if op in ops)
