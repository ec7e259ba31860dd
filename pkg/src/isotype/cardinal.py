"""Cardinals with every infinite cardinal collapsed to a single ``INF``.

All equalities in the classification theorems are of the form "finite and
equal, or both infinite", so nothing finer than this is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import InputError

__all__ = ["Cardinal", "INF", "ZERO", "fin", "as_cardinal", "card_add", "card_sum", "card_geq", "parse_cardinal"]


@dataclass(frozen=True, order=False)
class Cardinal:
    """``Fin(n)`` when ``n`` is an int, ``Inf`` when ``n`` is None."""

    n: Optional[int]

    def __post_init__(self):
        if self.n is not None and (not isinstance(self.n, int) or self.n < 0):
            raise ValueError(f"finite cardinal must be a natural number, got {self.n!r}")

    @property
    def is_inf(self) -> bool:
        return self.n is None

    @property
    def is_finite(self) -> bool:
        return self.n is not None

    def __add__(self, other):
        return card_add(self, as_cardinal(other))

    __radd__ = __add__

    def __ge__(self, other):
        return card_geq(self, as_cardinal(other))

    def __le__(self, other):
        return card_geq(as_cardinal(other), self)

    def __gt__(self, other):
        return not card_geq(as_cardinal(other), self)

    def __lt__(self, other):
        return not card_geq(self, as_cardinal(other))

    def __bool__(self):
        return self.n != 0

    def __str__(self):
        return "inf" if self.n is None else str(self.n)

    def __repr__(self):
        return "Inf" if self.n is None else f"Fin({self.n})"


INF = Cardinal(None)
ZERO = Cardinal(0)


def fin(n: int) -> Cardinal:
    return Cardinal(n)


def as_cardinal(x: Union[Cardinal, int, str, None]) -> Cardinal:
    """Coerce ints, ``"inf"`` and ``float('inf')`` to a Cardinal."""
    if isinstance(x, Cardinal):
        return x
    if x is None:
        return INF
    if isinstance(x, str):
        return parse_cardinal(x)
    if isinstance(x, float) and x == float("inf"):
        return INF
    if isinstance(x, int) and not isinstance(x, bool):
        return Cardinal(x)
    raise TypeError(f"cannot interpret {x!r} as a cardinal")


def card_add(a: Cardinal, b: Cardinal) -> Cardinal:
    if a.n is None or b.n is None:
        return INF
    return Cardinal(a.n + b.n)


def card_sum(xs: Iterable[Cardinal]) -> Cardinal:
    total = ZERO
    for x in xs:
        total = card_add(total, as_cardinal(x))
        if total.is_inf:
            return INF
    return total


def card_geq(a: Cardinal, b: Cardinal) -> bool:
    if a.n is None:
        return True
    if b.n is None:
        return False
    return a.n >= b.n


def parse_cardinal(text: str) -> Cardinal:
    t = text.strip().lower()
    if t in ("inf", "infinity", "∞"):
        return INF
    if not t.isdigit():
        raise InputError(f"not a cardinal: {text!r}")
    return Cardinal(int(t))
