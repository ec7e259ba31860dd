"""Eventually periodic sequences of cardinals indexed from 1.

These carry the ranks of the homogeneous pieces of a basic subgroup
(index n counts the summands isomorphic to Z(p^n)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .cardinal import INF, ZERO, Cardinal, as_cardinal, card_sum
from .errors import InputError

__all__ = [
    "MultiplicitySeq",
    "UNBOUNDED",
    "seq_at",
    "seq_eq",
    "seq_tail_sum",
    "seq_partial_sum",
    "seq_final_rank",
    "seq_support_bound",
    "parse_seq",
]

UNBOUNDED = "unbounded"

CardLike = Union[Cardinal, int, str]


def _primitive_root(pattern: Tuple[Cardinal, ...]) -> Tuple[Cardinal, ...]:
    m = len(pattern)
    for d in range(1, m + 1):
        if m % d == 0 and pattern[:d] * (m // d) == pattern:
            return pattern[:d]
    return pattern


@dataclass(frozen=True, init=False)
class MultiplicitySeq:
    """Sequence ``s(1), s(2), ...`` stored as a finite head and a repeating tail.

    ``head[i-1]`` is the value at index ``i < offset`` (``offset = len(head)+1``);
    from ``offset`` on the values cycle through ``pattern``.  Instances are
    always canonical: the pattern is primitive and the head is as short as
    possible, so dataclass equality coincides with pointwise equality.
    """

    head: Tuple[Cardinal, ...]
    pattern: Tuple[Cardinal, ...]

    def __init__(
        self,
        exceptions: Optional[Mapping[int, CardLike]] = None,
        offset: Optional[int] = None,
        pattern: Optional[Sequence[CardLike]] = None,
    ):
        exceptions = {int(k): as_cardinal(v) for k, v in (exceptions or {}).items()}
        if any(k < 1 for k in exceptions):
            raise InputError("sequence indices start at 1")
        pat = tuple(as_cardinal(c) for c in (pattern if pattern is not None else [ZERO]))
        if not pat:
            raise InputError("pattern must be nonempty")
        if offset is None:
            offset = max(exceptions, default=0) + 1
        if offset < 1:
            raise InputError("offset must be at least 1")
        if any(k >= offset for k in exceptions):
            raise InputError("exception index must lie before the periodic part")
        head = [exceptions.get(i, ZERO) for i in range(1, offset)]
        pat = _primitive_root(pat)
        # absorb head entries that agree with the pattern run backwards
        while head and head[-1] == pat[-1]:
            head.pop()
            pat = pat[-1:] + pat[:-1]
        object.__setattr__(self, "head", tuple(head))
        object.__setattr__(self, "pattern", pat)

    @classmethod
    def finite(cls, values: Mapping[int, CardLike]) -> "MultiplicitySeq":
        """Finitely supported sequence; unspecified indices are 0."""
        return cls(values)

    @classmethod
    def constant(cls, value: CardLike) -> "MultiplicitySeq":
        return cls({}, 1, [value])

    @classmethod
    def zero(cls) -> "MultiplicitySeq":
        return cls()

    @property
    def offset(self) -> int:
        return len(self.head) + 1

    @property
    def period(self) -> int:
        return len(self.pattern)

    @property
    def exceptions(self) -> Dict[int, Cardinal]:
        return {i + 1: c for i, c in enumerate(self.head)}

    def __getitem__(self, n: int) -> Cardinal:
        return seq_at(self, n)

    def is_zero(self) -> bool:
        return not self.head and self.pattern == (ZERO,)

    def tail_is_zero(self) -> bool:
        return self.pattern == (ZERO,)

    def nonzero_items(self):
        """(index, value) pairs of a finitely supported sequence."""
        if not self.tail_is_zero():
            raise ValueError("sequence has infinite support")
        return [(i + 1, c) for i, c in enumerate(self.head) if c != ZERO]

    def __str__(self):
        return format_seq(self)

    def __repr__(self):
        return f"MultiplicitySeq({format_seq(self)})"


def seq_at(s: MultiplicitySeq, n: int) -> Cardinal:
    if n < 1:
        raise ValueError("index must be positive")
    if n <= len(s.head):
        return s.head[n - 1]
    return s.pattern[(n - s.offset) % s.period]


def seq_eq(a: MultiplicitySeq, b: MultiplicitySeq) -> bool:
    """Pointwise equality, checked over one full joint period past both heads."""
    horizon = max(a.offset, b.offset) + math.lcm(a.period, b.period)
    return all(seq_at(a, n) == seq_at(b, n) for n in range(1, horizon))


def seq_tail_sum(s: MultiplicitySeq, i: int) -> Cardinal:
    if i < 1:
        raise ValueError("index must be positive")
    if not s.tail_is_zero():
        return INF
    return card_sum(s.head[i - 1:])


def seq_partial_sum(s: MultiplicitySeq, i: int, N: int) -> Cardinal:
    if not 1 <= i <= N:
        raise ValueError("need 1 <= i <= N")
    return card_sum(seq_at(s, k) for k in range(i, N + 1))


def seq_final_rank(s: MultiplicitySeq) -> Cardinal:
    return ZERO if s.tail_is_zero() else INF


def seq_support_bound(s: MultiplicitySeq):
    """Largest index with a nonzero value, 0 for the zero sequence, or UNBOUNDED."""
    if not s.tail_is_zero():
        return UNBOUNDED
    for i in range(len(s.head), 0, -1):
        if s.head[i - 1] != ZERO:
            return i
    return 0


def format_seq(s: MultiplicitySeq) -> str:
    if s.tail_is_zero():
        items = [f"{i}:{c}" for i, c in s.nonzero_items()]
        return "{ " + " ".join(items) + (" }" if items else "}")
    items = [f"{i + 1}:{c}" for i, c in enumerate(s.head)]
    pat = " ".join(str(c) for c in s.pattern)
    body = " ".join(items + [f"; tail period {s.period} [{pat}]"])
    return "{ " + body + " }"


def parse_seq(text: str) -> MultiplicitySeq:
    """Parse ``{ i:c ... ; tail period m [c1 ... cm] }``.

    When a tail is given the periodic part starts right after the largest
    listed index.
    """
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise InputError(f"sequence must be enclosed in braces: {text!r}")
    t = t[1:-1]
    head_part, _, tail_part = t.partition(";")
    exceptions = {}
    for tok in head_part.split():
        idx, sep, val = tok.partition(":")
        if not sep or not idx.isdigit():
            raise InputError(f"bad sequence entry {tok!r}")
        if int(idx) in exceptions:
            raise InputError(f"index {idx} listed twice")
        exceptions[int(idx)] = as_cardinal(val)
    if not tail_part.strip():
        return MultiplicitySeq(exceptions)
    toks = tail_part.replace("[", " [ ").replace("]", " ] ").split()
    if toks[:2] != ["tail", "period"] or len(toks) < 5 or toks[3] != "[" or toks[-1] != "]":
        raise InputError(f"bad tail clause {tail_part.strip()!r}")
    try:
        m = int(toks[2])
    except ValueError:
        raise InputError(f"bad period {toks[2]!r}") from None
    pat = [as_cardinal(c) for c in toks[4:-1]]
    if len(pat) != m or m < 1:
        raise InputError(f"tail period {m} but {len(pat)} values given")
    return MultiplicitySeq(exceptions, max(exceptions, default=0) + 1, pat)
