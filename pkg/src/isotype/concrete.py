"""Exact arithmetic in  (+)_d Z(p^inf)  (+)  (+)_j Z(p^{e_j}).

Divisible coordinates are Pruefer values ``(a, k)`` meaning a/p^k mod 1 in
lowest terms; cyclic coordinates are residues mod p^{e_j}.  Heights are
natural numbers or ``math.inf``; every height at or beyond omega is reported
as ``math.inf``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .cardinal import fin
from .errors import CapExceeded, InputError, SpecError
from .groupspec import PGroupSpec
from .multiplicity import UNBOUNDED, MultiplicitySeq, seq_support_bound

__all__ = [
    "StandardGroup",
    "GroupElement",
    "DEFAULT_MAX_SUBGROUP",
    "vp",
    "elt_add",
    "elt_neg",
    "elt_sub",
    "elt_scalar",
    "elt_order_exp",
    "elt_height",
    "divide_by_p",
    "generate_subgroup",
    "minimal_divisible_rank",
    "subgroup_basis",
    "is_independent",
    "standard_group_from_spec",
    "parse_element",
    "format_element",
]

DEFAULT_MAX_SUBGROUP = 200_000

Pruefer = Tuple[int, int]


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _canon_pruefer(a: int, k: int, p: int) -> Pruefer:
    q = p ** k
    a %= q
    if a == 0:
        return (0, 0)
    while a % p == 0:
        a //= p
        k -= 1
    return (a, k)


@dataclass(frozen=True)
class StandardGroup:
    p: int
    d_copies: int = 0
    exponents: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if any(e < 1 for e in self.exponents) or self.d_copies < 0:
            raise SpecError("exponents must be positive and d_copies natural")
        PGroupSpec(self.p)  # validates the prime

    @property
    def is_finite(self) -> bool:
        return self.d_copies == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise SpecError("group has a divisible summand and is infinite")
        return self.p ** sum(self.exponents)

    @property
    def max_exponent(self) -> int:
        return max(self.exponents, default=0)

    def zero(self) -> "GroupElement":
        return GroupElement(((0, 0),) * self.d_copies, (0,) * len(self.exponents))

    def cyclic_generator(self, j: int) -> "GroupElement":
        cyc = [0] * len(self.exponents)
        cyc[j] = 1
        return GroupElement(((0, 0),) * self.d_copies, tuple(cyc))

    def pruefer(self, i: int, a: int, k: int) -> "GroupElement":
        div = [(0, 0)] * self.d_copies
        div[i] = _canon_pruefer(a, k, self.p)
        return GroupElement(tuple(div), (0,) * len(self.exponents))

    def element(self, div: Sequence[Pruefer] = (), cyc: Sequence[int] = ()) -> "GroupElement":
        """Build a canonical element; missing trailing coordinates are zero."""
        div = list(div) + [(0, 0)] * (self.d_copies - len(div))
        cyc = list(cyc) + [0] * (len(self.exponents) - len(cyc))
        if len(div) != self.d_copies or len(cyc) != len(self.exponents):
            raise InputError("too many coordinates for this group")
        return GroupElement(
            tuple(_canon_pruefer(a, k, self.p) for a, k in div),
            tuple(v % self.p ** e for v, e in zip(cyc, self.exponents)),
        )

    def elements(self, max_size: int = DEFAULT_MAX_SUBGROUP) -> List["GroupElement"]:
        """All elements of a finite group, in lexicographic coordinate order."""
        if self.order > max_size:
            raise CapExceeded("group", self.order, max_size)
        nodiv = ((0, 0),) * self.d_copies
        ranges = [range(self.p ** e) for e in self.exponents]
        return [GroupElement(nodiv, c) for c in itertools.product(*ranges)]

    def spec(self) -> PGroupSpec:
        counts: Dict[int, int] = {}
        for e in self.exponents:
            counts[e] = counts.get(e, 0) + 1
        return PGroupSpec(self.p, fin(self.d_copies), MultiplicitySeq.finite(counts))

    def __str__(self):
        parts = [f"Z({self.p}^inf)"] * self.d_copies + [f"Z({self.p}^{e})" for e in self.exponents]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, order=True)
class GroupElement:
    div: Tuple[Pruefer, ...]
    cyc: Tuple[int, ...]

    def is_zero(self) -> bool:
        return all(a == 0 for a, _ in self.div) and not any(self.cyc)

    def in_divisible_part(self) -> bool:
        return not any(self.cyc)


def standard_group_from_spec(s: PGroupSpec) -> StandardGroup:
    """The concrete model of a spec with finite kappa0, finite kappa, gamma = 0."""
    if not s.gamma.is_zero():
        raise SpecError("no concrete model for a group with nonzero Ulm part")
    if s.kappa0.is_inf or seq_support_bound(s.kappa) == UNBOUNDED:
        raise SpecError("concrete models need finite divisible rank and finite basic subgroup")
    exps = []
    for n, c in s.kappa.nonzero_items():
        if c.is_inf:
            raise SpecError("concrete models need finite basic subgroup ranks")
        exps += [n] * c.n
    return StandardGroup(s.p, s.kappa0.n, tuple(exps))


def _check(G: StandardGroup, *xs: GroupElement):
    for x in xs:
        if len(x.div) != G.d_copies or len(x.cyc) != len(G.exponents):
            raise InputError("element does not belong to this group (component length mismatch)")


def elt_add(G: StandardGroup, x: GroupElement, y: GroupElement) -> GroupElement:
    _check(G, x, y)
    p = G.p
    div = []
    for (a, k), (b, l) in zip(x.div, y.div):
        m = max(k, l)
        div.append(_canon_pruefer(a * p ** (m - k) + b * p ** (m - l), m, p))
    cyc = tuple((u + v) % p ** e for u, v, e in zip(x.cyc, y.cyc, G.exponents))
    return GroupElement(tuple(div), cyc)


def elt_scalar(G: StandardGroup, n: int, x: GroupElement) -> GroupElement:
    _check(G, x)
    p = G.p
    div = tuple(_canon_pruefer(a * n, k, p) for a, k in x.div)
    cyc = tuple((n * v) % p ** e for v, e in zip(x.cyc, G.exponents))
    return GroupElement(div, cyc)


def elt_neg(G: StandardGroup, x: GroupElement) -> GroupElement:
    return elt_scalar(G, -1, x)


def elt_sub(G: StandardGroup, x: GroupElement, y: GroupElement) -> GroupElement:
    return elt_add(G, x, elt_scalar(G, -1, y))


def elt_order_exp(G: StandardGroup, x: GroupElement) -> int:
    _check(G, x)
    t = max((k for _, k in x.div), default=0)
    for v, e in zip(x.cyc, G.exponents):
        if v:
            t = max(t, e - vp(v, G.p))
    return t


def elt_height(G: StandardGroup, x: GroupElement):
    _check(G, x)
    hs = [vp(v, G.p) for v in x.cyc if v]
    return min(hs) if hs else math.inf


def divide_by_p(G: StandardGroup, x: GroupElement, r: int) -> Optional[GroupElement]:
    """Some y with p^r y = x (minimal preimages coordinatewise), or None."""
    if r < 0:
        raise ValueError("r must be natural")
    if elt_height(G, x) < r:
        return None
    p = G.p
    div = tuple(_canon_pruefer(a, k + r, p) if a else (0, 0) for a, k in x.div)
    cyc = tuple(v // p ** r for v in x.cyc)
    return GroupElement(div, cyc)


def _multiples(G: StandardGroup, x: GroupElement) -> List[GroupElement]:
    out = [G.zero()]
    for _ in range(G.p ** elt_order_exp(G, x) - 1):
        out.append(elt_add(G, out[-1], x))
    return out


def generate_subgroup(
    G: StandardGroup, tuple_: Sequence[GroupElement], max_size: int = DEFAULT_MAX_SUBGROUP
) -> Set[GroupElement]:
    """The finite subgroup generated by ``tuple_``."""
    if not tuple_:
        raise InputError("need at least one generator")
    H = {G.zero()}
    for g in tuple_:
        if g in H:
            continue
        mult = _multiples(G, g)
        new = set()
        for h in H:
            for m in mult:
                new.add(elt_add(G, h, m))
                if len(new) > max_size:
                    raise CapExceeded("subgroup", len(new), max_size)
        H = new
    return H


def _log_p(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def socle_dim(G: StandardGroup, H: Iterable[GroupElement]) -> int:
    return _log_p(sum(1 for h in H if elt_order_exp(G, h) <= 1), G.p)


def minimal_divisible_rank(
    G: StandardGroup, tuple_: Sequence[GroupElement], max_size: int = DEFAULT_MAX_SUBGROUP
) -> int:
    """Rank of the smallest divisible summand containing elements of the divisible part."""
    if any(not x.in_divisible_part() for x in tuple_):
        raise InputError("all elements must lie in the divisible part")
    if not tuple_:
        return 0
    return socle_dim(G, generate_subgroup(G, tuple_, max_size))


def is_independent(G: StandardGroup, xs: Sequence[GroupElement], max_size: int = DEFAULT_MAX_SUBGROUP) -> bool:
    """Nonzero elements with  sum m_i x_i = 0  only when every m_i x_i = 0."""
    if any(x.is_zero() for x in xs):
        return False
    if not xs:
        return True
    size = len(generate_subgroup(G, xs, max_size))
    return size == G.p ** sum(elt_order_exp(G, x) for x in xs)


def _span(G: StandardGroup, H: Set[GroupElement], x: GroupElement) -> Set[GroupElement]:
    return {elt_add(G, h, m) for h in H for m in _multiples(G, x)}


def _coset_order(G: StandardGroup, x: GroupElement, H: Set[GroupElement]) -> int:
    t = 0
    y = x
    while y not in H:
        y = elt_scalar(G, G.p, y)
        t += 1
    return t


def subgroup_basis(
    G: StandardGroup,
    gens: Sequence[GroupElement],
    start: Sequence[GroupElement] = (),
    max_size: int = DEFAULT_MAX_SUBGROUP,
) -> List[GroupElement]:
    """Independent elements generating ``<start, gens>`` and extending ``start``.

    ``start`` must itself be independent and span a direct summand of the
    generated subgroup.  If the nonzero ``gens`` (deduplicated) are already
    independent together with ``start`` they are returned unchanged.
    """
    seen = []
    for g in gens:
        if not g.is_zero() and g not in seen:
            seen.append(g)
    if is_independent(G, list(start) + seen, max_size):
        return list(start) + seen
    U = generate_subgroup(G, list(start) + seen, max_size) if (start or seen) else {G.zero()}
    basis = list(start)
    H = generate_subgroup(G, basis, max_size) if basis else {G.zero()}
    while len(H) < len(U):
        best = None
        for y in sorted(U - H):
            t = _coset_order(G, y, H)
            if elt_order_exp(G, y) != t:
                continue
            if best is None or t > best[0]:
                best = (t, y)
        assert best is not None, "start does not span a direct summand"
        basis.append(best[1])
        H = _span(G, H, best[1])
    return basis


# -- element syntax -----------------------------------------------------------

_TERM = re.compile(r"^\s*([DC])\((\d+)\)\s*=\s*(-?\d+)(?:\s*/\s*(\d+)(?:\s*\^\s*(\d+))?)?\s*$")


def parse_element(G: StandardGroup, text: str) -> GroupElement:
    """Parse ``D(i)=a/p^k + C(j)=v``; omitted coordinates are zero, ``0`` is zero."""
    x = G.zero()
    t = text.strip()
    if t in ("", "0"):
        return x
    for term in t.split("+"):
        m = _TERM.match(term)
        if not m:
            raise InputError(f"bad element term {term.strip()!r}")
        kind, idx, num, den, power = m.groups()
        idx, num = int(idx), int(num)
        if kind == "D":
            if idx >= G.d_copies:
                raise InputError(f"D({idx}) out of range for {G}")
            if den is None:
                raise InputError(f"divisible coordinate needs a fraction: {term.strip()!r}")
            if power is not None:
                if int(den) != G.p:
                    raise InputError(f"denominator base must be p={G.p}")
                k = int(power)
            else:
                try:
                    k = _log_p(int(den), G.p)
                except ValueError:
                    raise InputError(f"denominator {den} is not a power of {G.p}") from None
            x = elt_add(G, x, G.pruefer(idx, num, k))
        else:
            if idx >= len(G.exponents):
                raise InputError(f"C({idx}) out of range for {G}")
            if den is not None:
                raise InputError("cyclic coordinates are integers")
            x = elt_add(G, x, elt_scalar(G, num, G.cyclic_generator(idx)))
    return x


def format_element(G: StandardGroup, x: GroupElement) -> str:
    terms = [f"D({i})={a}/{G.p ** k}" for i, (a, k) in enumerate(x.div) if a]
    terms += [f"C({j})={v}" for j, v in enumerate(x.cyc) if v]
    return " + ".join(terms) if terms else "0"
