"""Brute-force ground truth on finite Abelian groups.

Everything here is computed by enumerating the whole group and reading
definitions off literally (images p^n G, socles, solvability of p^r y = x,
Tarski semantics with quantifiers over all elements).  Nothing in this
module calls the symbolic calculators it is used to check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .cardinal import ZERO, fin
from .concrete import GroupElement, StandardGroup
from .errors import CapExceeded, InputError
from .groupspec import SzmielewInvariants
from .multiplicity import MultiplicitySeq

__all__ = [
    "FiniteAbelian",
    "as_finite",
    "oracle_invariants",
    "oracle_order",
    "oracle_height",
    "oracle_profile",
    "oracle_automorphism_extend",
    "oracle_eval",
    "oracle_eval_table",
    "DEFAULT_MAX_GROUP",
    "DEFAULT_MAX_AUT",
    "DEFAULT_MAX_EVAL",
]

DEFAULT_MAX_GROUP = 10 ** 6
DEFAULT_MAX_EVAL = 1 << 22
DEFAULT_MAX_ENUM = 200_000
DEFAULT_MAX_AUT = None  # p^8, resolved per group

_NO_HEIGHT = np.iinfo(np.int64).max


@dataclass(frozen=True)
class FiniteAbelian:
    """Z/m_1 + ... + Z/m_J with elements coded in mixed radix."""

    moduli: Tuple[int, ...]

    @property
    def size(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def strides(self) -> np.ndarray:
        s, out = 1, []
        for m in reversed(self.moduli):
            out.append(s)
            s *= m
        return np.array(out[::-1], dtype=np.int64)

    @cached_property
    def _mods(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    def coords(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        if not self.moduli:
            return np.zeros(codes.shape + (0,), dtype=np.int64)
        return (codes[..., None] // self.strides) % self._mods

    def encode(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        if not self.moduli:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        return ((coords % self._mods) * self.strides).sum(axis=-1)

    def all_codes(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def times(self, n: int, codes) -> np.ndarray:
        return self.encode(self.coords(codes) * n)

    def add(self, x, y) -> np.ndarray:
        return self.encode(self.coords(x) + self.coords(y))


def as_finite(G: Union[StandardGroup, FiniteAbelian]) -> FiniteAbelian:
    if isinstance(G, FiniteAbelian):
        return G
    if not G.is_finite:
        raise InputError("the oracle only handles finite groups")
    return FiniteAbelian(tuple(G.p ** e for e in G.exponents))


def _code(G: StandardGroup, x: GroupElement) -> int:
    F = as_finite(G)
    if any(a for a, _ in x.div):
        raise InputError("element has a divisible component")
    return int(F.encode(np.array(x.cyc, dtype=np.int64)))


def _element(G: StandardGroup, code: int) -> GroupElement:
    F = as_finite(G)
    return GroupElement((), tuple(int(c) for c in F.coords(code)))


def _guard(size: int, cap: int, what="group"):
    if size > cap:
        raise CapExceeded(what, size, cap)


def _log_p(n: int, p: int) -> int:
    k = 0
    while n > 1:
        assert n % p == 0
        n //= p
        k += 1
    return k


def _images(F: FiniteAbelian, p: int) -> List[np.ndarray]:
    """Sorted codes of p^n F for n = 0, 1, ... until the zero subgroup."""
    out = [F.all_codes()]
    while out[-1].size > 1:
        out.append(np.unique(F.times(p, out[-1])))
    return out


def _socle_size(F: FiniteAbelian, p: int, codes: np.ndarray) -> int:
    return int(np.count_nonzero(F.times(p, codes) == 0))


def oracle_invariants(G: StandardGroup, max_size: int = DEFAULT_MAX_GROUP) -> SzmielewInvariants:
    """D, Tf, U(p, n-1) and Exp computed from subgroup enumeration."""
    F = as_finite(G)
    _guard(F.size, max_size)
    p = G.p
    images = _images(F, p)
    socle_dims = [_log_p(_socle_size(F, p, im), p) for im in images]
    # past the last image every p^n G is zero, so limits have been reached
    d = socle_dims[-1]
    n = len(images) - 1
    stable = np.unique(F.times(p, images[n]))
    tf = _log_p(images[n].size // stable.size, p)
    ulm = {n: socle_dims[n - 1] - socle_dims[n] for n in range(1, len(images))}
    exp = p ** (len(images) - 1)
    return SzmielewInvariants(fin(d), fin(tf), MultiplicitySeq.finite(ulm), fin(exp))


def oracle_order(G: StandardGroup, x: GroupElement) -> int:
    """Order exponent by repeated addition."""
    F = as_finite(G)
    c = _code(G, x)
    acc, n = c, 1
    while acc != 0:
        acc = int(F.add(acc, c))
        n += 1
    return _log_p(n, G.p)


class _HeightTable:
    def __init__(self, G: StandardGroup, max_size: int):
        F = as_finite(G)
        _guard(F.size, max_size)
        self.F = F
        h = np.full(F.size, -1, dtype=np.int64)
        for r, im in enumerate(_images(F, G.p)):
            h[im] = r
        h[0] = _NO_HEIGHT
        self.h = h

    def __call__(self, code: int):
        v = int(self.h[code])
        return math.inf if v == _NO_HEIGHT else v


def oracle_height(G: StandardGroup, x: GroupElement, max_size: int = DEFAULT_MAX_GROUP):
    """Largest r with p^r y = x solvable, from the images p^r G; inf for 0."""
    return _HeightTable(G, max_size)(_code(G, x))


def oracle_profile(
    G: StandardGroup,
    tuple_: Sequence[GroupElement],
    max_size: int = DEFAULT_MAX_GROUP,
    max_enum: int = DEFAULT_MAX_ENUM,
):
    from .typecalc import TypeProfile

    F = as_finite(G)
    heights = _HeightTable(G, max_size)
    p, m = G.p, len(tuple_)
    orders = _order_table(F, p)
    codes = [_code(G, a) for a in tuple_]
    L = max((int(orders[c]) for c in codes), default=0)
    _guard(p ** (L * m), max_enum, "profile")
    alphas = list(itertools.product(range(p ** L), repeat=m))
    coords = np.zeros((len(alphas), len(F.moduli)), dtype=np.int64)
    if m:
        A = np.array(alphas, dtype=np.int64)
        coords = A @ F.coords(np.array(codes, dtype=np.int64))
    totals = F.encode(coords)
    entries = {al: (int(orders[c]), heights(int(c))) for al, c in zip(alphas, totals)}
    return TypeProfile(p, m, L, entries)


def _order_table(F: FiniteAbelian, p: int) -> np.ndarray:
    """Order exponent of every element, by repeated multiplication by p."""
    order = np.zeros(F.size, dtype=np.int64)
    cur = F.all_codes()
    t = 0
    while cur.any():
        t += 1
        order[cur != 0] = t
        cur = F.times(p, cur)
    return order


# -- automorphism search ----------------------------------------------------

def oracle_automorphism_extend(
    G: StandardGroup,
    a: Sequence[GroupElement],
    b: Sequence[GroupElement],
    max_size: Optional[int] = DEFAULT_MAX_AUT,
) -> Optional[Dict[GroupElement, GroupElement]]:
    """Search for an automorphism sending a_i to b_i; returns its full table.

    Backtracks over images of the generating set  a_1..a_m, g_1..g_J  (g_j the
    cyclic generators).  A partial map is kept only while it is a well
    defined, injective homomorphism on the subgroup generated so far that
    preserves heights; all three are necessary for an automorphism.
    """
    if len(a) != len(b):
        raise InputError("tuples must have equal length")
    F = as_finite(G)
    cap = G.p ** 8 if max_size is None else max_size
    _guard(F.size, cap)
    p = G.p
    height = _HeightTable(G, F.size).h
    elements = [tuple(int(v) for v in row) for row in F.coords(F.all_codes())]
    mods = F.moduli

    def add(x, y):
        return tuple((u + v) % m for u, v, m in zip(x, y, mods))

    def mul(n, x):
        return tuple((n * u) % m for u, m in zip(x, mods))

    def h(x):
        return int(height[int(F.encode(np.array(x, dtype=np.int64)))]) if mods else _NO_HEIGHT

    zero = tuple(0 for _ in mods)

    def extend(f, x, y):
        if x in f:
            return f if f[x] == y else None
        t, z = 1, mul(p, x)
        while z not in f:
            t, z = t + 1, mul(p, z)
        if mul(p ** t, y) != f[z]:
            return None
        image = set(f.values())
        g = dict(f)
        xs, ys = zero, zero
        for _ in range(1, p ** t):
            xs, ys = add(xs, x), add(ys, y)
            for s, fs in f.items():
                u, v = add(s, xs), add(fs, ys)
                if v in image or h(u) != h(v):
                    return None
                g[u] = v
            image.update(g[add(s, xs)] for s in f)
        return g

    f = {zero: zero}
    for x, y in zip(a, b):
        f = extend(f, tuple(x.cyc), tuple(y.cyc))
        if f is None:
            return None

    gens = [tuple(1 if i == j else 0 for i in range(len(mods))) for j in range(len(mods))]

    def search(f, j):
        while j < len(gens) and gens[j] in f:
            j += 1
        if j == len(gens):
            return f
        for y in elements:
            g = extend(f, gens[j], y)
            if g is not None:
                done = search(g, j + 1)
                if done is not None:
                    return done
        return None

    f = search(f, 0)
    if f is None:
        return None
    return {GroupElement((), x): GroupElement((), y) for x, y in f.items()}


# -- formula evaluation -----------------------------------------------------

class _Evaluator:
    def __init__(self, F: FiniteAbelian, max_cells: int):
        self.F = F
        self.N = F.size
        self.max_cells = max_cells
        codes = F.all_codes()
        self.add_table = F.add(codes[:, None], codes[None, :])
        self._mul: Dict[int, np.ndarray] = {}
        self._div: Dict[int, np.ndarray] = {}

    def mul(self, c: int) -> np.ndarray:
        if c not in self._mul:
            self._mul[c] = self.F.times(c, self.F.all_codes())
        return self._mul[c]

    def divisible_by(self, n: int) -> np.ndarray:
        # x is divisible by n iff x lies in the image nG
        if n not in self._div:
            mask = np.zeros(self.N, dtype=bool)
            mask[self.mul(n)] = True
            self._div[n] = mask
        return self._div[n]

    def _axis(self, axes, v):
        for i in range(len(axes) - 1, -1, -1):
            if axes[i] == v:
                return i
        return None

    def term(self, coeffs, axes, fixed):
        shape = (1,) * len(axes)
        val = np.zeros(shape, dtype=np.int64)
        for v, c in coeffs.items():
            i = self._axis(axes, v)
            if i is not None:
                idx = np.arange(self.N, dtype=np.int64).reshape(
                    tuple(self.N if k == i else 1 for k in range(len(axes))))
            elif v in fixed:
                idx = np.full(shape, fixed[v], dtype=np.int64)
            else:
                raise InputError(f"free variable {v!r} has no value")
            val = self.add_table[val, self.mul(c)[idx]]
        return val

    def eval(self, phi, axes, fixed):
        from . import formulas as fm

        if isinstance(phi, fm.Eq):
            return self.term(phi.term.coeffs, axes, fixed) == 0
        if isinstance(phi, fm.Div):
            return self.divisible_by(phi.modulus)[self.term(phi.term.coeffs, axes, fixed)]
        if isinstance(phi, fm.Not):
            return ~self.eval(phi.body, axes, fixed)
        if isinstance(phi, fm.And):
            return self.eval(phi.left, axes, fixed) & self.eval(phi.right, axes, fixed)
        if isinstance(phi, fm.Or):
            return self.eval(phi.left, axes, fixed) | self.eval(phi.right, axes, fixed)
        if isinstance(phi, fm.Implies):
            return ~self.eval(phi.left, axes, fixed) | self.eval(phi.right, axes, fixed)
        if isinstance(phi, (fm.Exists, fm.Forall)):
            inner = axes + [phi.var]
            _guard(self.N ** len(inner), self.max_cells, "evaluation table")
            fx = {k: v for k, v in fixed.items() if k != phi.var}
            r = self.eval(phi.body, inner, fx)
            return r.any(axis=-1) if isinstance(phi, fm.Exists) else r.all(axis=-1)
        raise TypeError(f"not a formula: {phi!r}")


def _env_code(F: FiniteAbelian, G, x) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(G, StandardGroup):
        return _code(G, x)
    return int(F.encode(np.array(x, dtype=np.int64)))


def oracle_eval(
    G: Union[StandardGroup, FiniteAbelian],
    phi,
    env: Optional[Mapping[str, object]] = None,
    max_cells: int = DEFAULT_MAX_EVAL,
    max_size: int = 4096,
) -> bool:
    """Truth of ``phi`` in G with free variables assigned by ``env``."""
    F = as_finite(G)
    _guard(F.size, max_size)
    fixed = {v: _env_code(F, G, x) for v, x in (env or {}).items()}
    ev = _Evaluator(F, max_cells)
    return bool(ev.eval(phi, [], fixed))


def oracle_eval_table(
    G: Union[StandardGroup, FiniteAbelian],
    phi,
    variables: Sequence[str],
    max_cells: int = DEFAULT_MAX_EVAL,
    max_size: int = 4096,
    evaluator: Optional[_Evaluator] = None,
) -> np.ndarray:
    """Truth values of ``phi`` for every assignment of ``variables`` (one axis each)."""
    F = as_finite(G)
    _guard(F.size, max_size)
    _guard(F.size ** len(variables), max_cells, "evaluation table")
    ev = evaluator or _Evaluator(F, max_cells)
    res = ev.eval(phi, list(variables), {})
    return np.broadcast_to(res, (F.size,) * len(variables))
