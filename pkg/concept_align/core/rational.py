from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from functools import total_ordering
from math import gcd


@total_ordering
@dataclass(frozen=True, eq=False)
class Rational:
    """
    كسر غير سالب بدون اختزال

    المقارنة بالضرب التبادلي على أعداد صحيحة كاملة الدقة، فلا أعداد عشرية عائمة.
    """

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError(f"denominator must be positive, got {self.den}")
        if self.num < 0:
            raise ValueError(f"numerator must be non-negative, got {self.num}")

    @classmethod
    def ratio(cls, num: int, den: int) -> "Rational":
        """نسبة مع تعريف 0/0 كـ 0/1"""
        if den == 0:
            return ZERO
        return cls(int(num), int(den))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rational):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __lt__(self, other: "Rational") -> bool:
        if not isinstance(other, Rational):
            return NotImplemented
        return self.num * other.den < other.num * self.den

    def __hash__(self) -> int:
        g = gcd(self.num, self.den)
        return hash((self.num // g, self.den // g))

    def __float__(self) -> float:
        return self.num / self.den

    def decimal(self, places: int = 12) -> str:
        """قيمة عشرية مقربة إلى عدد محدد من المنازل"""
        with localcontext() as ctx:
            ctx.prec = max(50, places + len(str(self.num)) + 5)
            value = Decimal(self.num) / Decimal(self.den)
            return format(value.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN), "f")

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


ZERO = Rational(0, 1)
