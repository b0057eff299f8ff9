"""
التسميات المنطقية ذات البنية اليسارية: (((c0 op1 c1) op2 c2) ...)
"""
from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from ...core.errors import LabelError
from ...core.operators import Operator

Step = Tuple[Operator, int]

# روابط تتبادل فيما بينها: X & a & ~b == X & ~b & a
_INTERSECTING = (Operator.AND, Operator.AND_NOT)


@dataclass(frozen=True)
class Label:
    """
    تسمية: مفهوم أول ثم سلسلة من (رابط، مفهوم)

    Args:
        head: معرف المفهوم الأول
        tail: الإضافات المتتالية
    """

    head: int
    tail: Tuple[Step, ...] = ()

    def __post_init__(self):
        ids = self.concepts
        if len(set(ids)) != len(ids):
            raise LabelError(f"label repeats a concept: {self.key()}")
        if any(k < 0 for k in ids):
            raise LabelError(f"negative concept id in {self.key()}")

    @classmethod
    def atom(cls, k: int) -> "Label":
        return cls(int(k))

    @property
    def length(self) -> int:
        return 1 + len(self.tail)

    def __len__(self) -> int:
        return self.length

    @property
    def concepts(self) -> Tuple[int, ...]:
        return (self.head,) + tuple(k for _, k in self.tail)

    @property
    def operators(self) -> Tuple[Operator, ...]:
        return tuple(op for op, _ in self.tail)

    @property
    def last_operator(self) -> Optional[Operator]:
        return self.tail[-1][0] if self.tail else None

    @property
    def last_concept(self) -> int:
        return self.tail[-1][1] if self.tail else self.head

    def extend(self, op: Operator, k: int) -> "Label":
        return Label(self.head, self.tail + ((op, int(k)),))

    def prefix(self, length: int) -> "Label":
        if not 1 <= length <= self.length:
            raise LabelError(f"prefix length {length} out of range for {self.key()}")
        return Label(self.head, self.tail[: length - 1])

    def prefixes(self) -> List["Label"]:
        return [self.prefix(i) for i in range(1, self.length + 1)]

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        """الصيغة الكاملة بالأقواس، بالأسماء أو بالمعرفات"""
        def show(k: int) -> str:
            return names[k] if names is not None else str(k)

        text = show(self.head)
        for op, k in self.tail:
            text = f"({text} {op.value} {show(k)})"
        return text

    def key(self) -> str:
        return self.render()

    def __str__(self) -> str:
        return self.key()


def canonicalize(label: Label) -> Label:
    """
    ترتيب المعرفات تصاعدياً داخل كل سلسلة متتالية من نفس الرابط في الذيل
    """
    tail: List[Step] = []
    run: List[Step] = []
    for step in label.tail:
        if run and step[0] != run[-1][0]:
            tail.extend(sorted(run, key=lambda s: s[1]))
            run = []
        run.append(step)
    tail.extend(sorted(run, key=lambda s: s[1]))
    return Label(label.head, tuple(tail))


def is_expansion_allowed(label: Label, op: Operator, k: int) -> bool:
    if k in label.concepts:
        return False
    if label.last_operator is op and k <= label.last_concept:
        return False
    return True


def _rewrites(label: Label) -> Iterable[Label]:
    """تبديلات متجاورة تحافظ على قناع التسمية"""
    tail = list(label.tail)
    for i in range(len(tail) - 1):
        (op1, _), (op2, _) = tail[i], tail[i + 1]
        if op1 is op2 or (op1 in _INTERSECTING and op2 in _INTERSECTING):
            swapped = tail[:i] + [tail[i + 1], tail[i]] + tail[i + 2:]
            yield Label(label.head, tuple(swapped))
    if tail and tail[0][0] in (Operator.OR, Operator.AND):
        op, k = tail[0]
        yield Label(k, ((op, label.head),) + tuple(tail[1:]))


def equivalent_variants(label: Label, limit: int = 24) -> List[Label]:
    """
    تسميات مكافئة منطقياً يمكن الوصول إليها بتبديلات متجاورة

    النتيجة بالشكل القانوني، بدون التسمية نفسها، ومحدودة بعدد limit.
    """
    start = canonicalize(label)
    seen = {start.key()}
    queue = deque([start])
    variants: List[Label] = []
    while queue and len(variants) < limit:
        current = queue.popleft()
        for candidate in _rewrites(current):
            candidate = canonicalize(candidate)
            key = candidate.key()
            if key in seen:
                continue
            seen.add(key)
            variants.append(candidate)
            queue.append(candidate)
            if len(variants) >= limit:
                break
    return variants


def normal_form(label: Label, limit: int = 256) -> Label:
    """الممثل ذو أصغر مفتاح بين التسمية ومكافئاتها"""
    candidates = [canonicalize(label)] + equivalent_variants(label, limit)
    return min(candidates, key=lambda lab: lab.key())


def _split_operator(text: str) -> Optional[Tuple[str, Operator]]:
    for op in (Operator.AND_NOT, Operator.AND, Operator.OR):
        suffix = f" {op.value}"
        if text.endswith(suffix):
            return text[: -len(suffix)], op
    return None


def parse_label(text: str, names: Sequence[str]) -> Label:
    """
    تحليل نص تسمية مثل "((a AND NOT b) OR c)" بالاعتماد على أسماء المفاهيم المعروفة

    المطابقة من اليمين لليسار مع التراجع، فالأسماء قد تحتوي مسافات أو أقواساً.
    """
    index = {name: k for k, name in enumerate(names)}
    by_length = sorted(index, key=len, reverse=True)

    def parse(fragment: str) -> Optional[Label]:
        if fragment in index:
            return Label.atom(index[fragment])
        if not (fragment.startswith("(") and fragment.endswith(")")):
            return None
        inner = fragment[1:-1]
        for name in by_length:
            if not inner.endswith(" " + name):
                continue
            split = _split_operator(inner[: -len(name) - 1])
            if split is None:
                continue
            left_text, op = split
            left = parse(left_text)
            if left is None or index[name] in left.concepts:
                continue
            return left.extend(op, index[name])
        return None

    label = parse(text.strip())
    if label is None:
        raise LabelError(f"cannot parse label: {text!r}")
    return label
