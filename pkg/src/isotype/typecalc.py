"""Type profiles of tuples, tuple normalization and realization, homogeneity.

A profile records the order exponent and height of every linear combination
of a tuple with coefficients mod p^L.  Descriptors summarize a normalized
tuple b_1..b_N as three blocks:

* indices 1..r: height 0, every nontrivial combination has finite height;
* indices r+1..r+s: height 0, with p^{m_i} b the first multiple of infinite
  height;
* indices r+s+1..N: infinite height.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .cardinal import Cardinal, card_add, card_geq, card_sum, fin
from .concrete import (
    DEFAULT_MAX_SUBGROUP,
    GroupElement,
    StandardGroup,
    _canon_pruefer,
    divide_by_p,
    elt_add,
    elt_height,
    elt_order_exp,
    elt_scalar,
    elt_sub,
    format_element,
    generate_subgroup,
    is_independent,
    subgroup_basis,
    vp,
)
from .errors import CapExceeded, InputError
from .groupspec import PGroupSpec
from .multiplicity import seq_at, seq_tail_sum

__all__ = [
    "TypeProfile",
    "TupleDescriptor",
    "AutomorphismWitness",
    "profile_of",
    "profiles_equal",
    "format_profile",
    "normalize_tuple",
    "realizes",
    "realizes_violation",
    "realize_in_group",
    "homogeneity_automorphism",
    "parse_descriptor",
    "format_descriptor",
    "DEFAULT_MAX_ENUM",
]

DEFAULT_MAX_ENUM = 200_000

Height = object  # int or math.inf


@dataclass(frozen=True)
class TypeProfile:
    p: int
    m: int
    L: int
    entries: Mapping[Tuple[int, ...], Tuple[int, Height]] = field(compare=False, hash=False)

    def at(self, alpha: Sequence[int]) -> Tuple[int, Height]:
        q = self.p ** self.L
        return self.entries[tuple(a % q for a in alpha)]

    def __eq__(self, other):
        if not isinstance(other, TypeProfile):
            return NotImplemented
        return (self.p, self.m, self.L) == (other.p, other.m, other.L) and dict(self.entries) == dict(
            other.entries
        )

    def __hash__(self):
        return hash((self.p, self.m, self.L))


def _combination(G: StandardGroup, alpha: Sequence[int], tuple_: Sequence[GroupElement]) -> GroupElement:
    x = G.zero()
    for c, a in zip(alpha, tuple_):
        if c:
            x = elt_add(G, x, elt_scalar(G, c, a))
    return x


def profile_of(G: StandardGroup, tuple_: Sequence[GroupElement], max_enum: int = DEFAULT_MAX_ENUM) -> TypeProfile:
    """Order exponent and height of every combination, coefficients mod p^L."""
    p, m = G.p, len(tuple_)
    L = max((elt_order_exp(G, a) for a in tuple_), default=0)
    if p ** (L * m) > max_enum:
        raise CapExceeded("profile", p ** (L * m), max_enum)
    entries = {}
    for alpha in itertools.product(range(p ** L), repeat=m):
        x = _combination(G, alpha, tuple_)
        entries[alpha] = (elt_order_exp(G, x), elt_height(G, x))
    return TypeProfile(p, m, L, entries)


def profiles_equal(P: TypeProfile, Q: TypeProfile) -> bool:
    if P.p != Q.p or P.m != Q.m:
        raise InputError(f"profiles have different shapes: p={P.p}, m={P.m} vs p={Q.p}, m={Q.m}")
    if P.L == Q.L:
        return dict(P.entries) == dict(Q.entries)
    # both tuples are killed by p^L for the larger L; compare on that range
    L = max(P.L, Q.L)
    return all(P.at(a) == Q.at(a) for a in itertools.product(range(P.p ** L), repeat=P.m))


def _fmt_height(h) -> str:
    return "inf" if h == math.inf else str(h)


def format_profile(P: TypeProfile) -> str:
    lines = [f"profile p={P.p} m={P.m} L={P.L}"]
    for alpha in sorted(P.entries):
        o, h = P.entries[alpha]
        lines.append(f"({','.join(map(str, alpha))}) -> ({o},{_fmt_height(h)})")
    return "\n".join(lines)


# -- descriptors --------------------------------------------------------------

@dataclass(frozen=True)
class TupleDescriptor:
    N: int
    r: int
    s: int
    orders: Tuple[int, ...]
    ulm_shifts: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        object.__setattr__(self, "ulm_shifts", tuple(self.ulm_shifts))
        if min(self.N, self.r, self.s) < 0 or self.r + self.s > self.N:
            raise InputError("descriptor needs r + s <= N with naturals")
        if len(self.orders) != self.N or len(self.ulm_shifts) != self.s:
            raise InputError("descriptor needs N orders and s shifts")
        if any(l < 1 for l in self.orders):
            raise InputError("orders must be positive")
        for i, m in enumerate(self.ulm_shifts):
            if not 0 < m < self.orders[self.r + i]:
                raise InputError(f"shift {m} must lie strictly between 0 and order {self.orders[self.r + i]}")

    def finite_part(self) -> Tuple[int, ...]:
        return self.orders[: self.r]

    def shifted_part(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(zip(self.orders[self.r : self.r + self.s], self.ulm_shifts))

    def infinite_part(self) -> Tuple[int, ...]:
        return self.orders[self.r + self.s :]

    def nu(self, k: int) -> int:
        return sum(1 for l in self.finite_part() if l == k) + sum(1 for m in self.ulm_shifts if m == k)

    def mu(self, k: int) -> int:
        return sum(1 for l, m in self.shifted_part() if l - m == k) + sum(
            1 for l in self.infinite_part() if l == k
        )

    @property
    def M(self) -> int:
        ks = [l - m for l, m in self.shifted_part()] + list(self.infinite_part())
        return max(ks, default=0)

    @property
    def K(self) -> int:
        return max(list(self.finite_part()) + list(self.ulm_shifts), default=0)

    def canonical(self) -> "TupleDescriptor":
        fp = sorted(self.finite_part())
        sp = sorted(self.shifted_part())
        ip = sorted(self.infinite_part())
        return TupleDescriptor(self.N, self.r, self.s, tuple(fp + [l for l, _ in sp] + ip), tuple(m for _, m in sp))


def format_descriptor(d: TupleDescriptor) -> str:
    orders = " ".join(map(str, d.orders))
    shifts = " ".join(map(str, d.ulm_shifts))
    return f"descriptor {{ {d.N} {d.r} {d.s} ; orders {orders} ; shifts {shifts} }}".replace("  ", " ")


_DESC = re.compile(
    r"^\s*descriptor\s*\{\s*(\d+)\s+(\d+)\s+(\d+)\s*;\s*orders\s*([\d\s]*);\s*shifts\s*([\d\s]*)\}\s*$"
)


def parse_descriptor(text: str) -> TupleDescriptor:
    m = _DESC.match(text)
    if not m:
        raise InputError(f"bad descriptor syntax: {text.strip()!r}")
    N, r, s = (int(m.group(i)) for i in (1, 2, 3))
    return TupleDescriptor(N, r, s, tuple(int(x) for x in m.group(4).split()), tuple(int(x) for x in m.group(5).split()))


# -- normalization ------------------------------------------------------------

def _r_part(G: StandardGroup, x: GroupElement) -> GroupElement:
    return GroupElement(G.zero().div, x.cyc)


def _d_part(G: StandardGroup, x: GroupElement) -> GroupElement:
    return GroupElement(x.div, G.zero().cyc)


def _images(G: StandardGroup, H: Set[GroupElement]) -> List[Set[GroupElement]]:
    out = [H]
    while len(out[-1]) > 1:
        out.append({elt_scalar(G, G.p, x) for x in out[-1]})
    return out


def _is_pure(G: StandardGroup, S: Set[GroupElement], T: Set[GroupElement]) -> bool:
    """Is the subgroup S pure in the finite subgroup T (p^k S = S cap p^k T)?"""
    return all(iS == S & iT for iS, iT in itertools.zip_longest(_images(G, S), _images(G, T), fillvalue={G.zero()}))


def _purify_in_reduced(G: StandardGroup, gens: List[GroupElement], max_size: int) -> List[GroupElement]:
    """Enlarge <gens> inside the reduced part until it is pure there; returns generators."""
    gens = list(gens)
    U = generate_subgroup(G, gens, max_size)
    while True:
        levels = _images(G, U)
        for x in sorted(U):
            if x.is_zero():
                continue
            hU = max(k for k, lv in enumerate(levels) if x in lv)
            if elt_height(G, x) > hU:
                gens.append(divide_by_p(G, x, hU + 1))
                U = generate_subgroup(G, gens, max_size)
                break
        else:
            return gens


def _coefficients(G: StandardGroup, basis: Sequence[GroupElement], max_size: int) -> Dict[GroupElement, Tuple[int, ...]]:
    """Map every element of the span of an independent basis to its coefficients."""
    orders = [G.p ** elt_order_exp(G, b) for b in basis]
    total = math.prod(orders)
    if total > max_size:
        raise CapExceeded("subgroup", total, max_size)
    out = {}
    for coeffs in itertools.product(*(range(o) for o in orders)):
        out[_combination(G, coeffs, basis)] = coeffs
    return out


@dataclass(frozen=True)
class Normalization:
    descriptor: TupleDescriptor
    basis: Tuple[GroupElement, ...]
    expression: Tuple[Tuple[int, ...], ...]


def normalize_tuple(
    G: StandardGroup, tuple_: Sequence[GroupElement], max_size: int = DEFAULT_MAX_SUBGROUP
) -> Normalization:
    """Independent b_1..b_N in the three-block shape with a_i = sum_j c_ij b_j."""
    p = G.p
    # heights 0 or infinity: a_i = p^{h_i} c_i
    shifts, cs = [], []
    for a in tuple_:
        h = elt_height(G, a)
        if a.is_zero():
            shifts.append(None)
            cs.append(a)
        elif h == math.inf:
            shifts.append(0)
            cs.append(a)
        else:
            shifts.append(h)
            cs.append(divide_by_p(G, a, h))
    finite = [c for c, h in zip(cs, shifts) if h is not None and elt_height(G, c) == 0]
    infinite = [c for c, h in zip(cs, shifts) if h is not None and elt_height(G, c) == math.inf]

    # a pure subgroup of the reduced part containing the reduced projections
    proj = []
    for c in finite:
        x = _r_part(G, c)
        if not x.is_zero() and x not in proj:
            proj.append(x)
    us = subgroup_basis(G, _purify_in_reduced(G, proj, max_size), max_size=max_size) if proj else []
    lifts = []
    for u in us:
        match = next((c for c in finite if _r_part(G, c) == u), None)
        lifts.append(match if match is not None else u)
    o = [elt_order_exp(G, u) for u in us]
    z = [elt_scalar(G, p ** oj, f) for oj, f in zip(o, lifts)]
    u_coeffs = _coefficients(G, us, max_size)

    def lam(c):
        return u_coeffs[_r_part(G, c)]

    etas = []
    for c in finite:
        etas.append(elt_sub(G, c, _combination(G, lam(c), lifts)))

    # choose which lifts keep an infinite-height multiple (the shifted block)
    cand = sorted((j for j in range(len(us)) if not z[j].is_zero()), key=lambda j: (-elt_order_exp(G, z[j]), j))
    accepted: List[int] = []
    for j in cand:
        if is_independent(G, [z[i] for i in accepted + [j]], max_size):
            accepted.append(j)
    while True:
        ys = {}
        for j in range(len(us)):
            if j not in accepted and not z[j].is_zero():
                ys[j] = divide_by_p(G, z[j], o[j])
        dgens = [x for x in etas + infinite + [z[j] for j in range(len(us))] + list(ys.values()) if not x.is_zero()]
        Z = generate_subgroup(G, dgens, max_size) if dgens else {G.zero()}
        zX = [z[j] for j in accepted]
        S = generate_subgroup(G, zX, max_size) if zX else {G.zero()}
        if _is_pure(G, S, Z):
            break
        accepted.pop()
    bs = list(lifts)
    for j, y in ys.items():
        bs[j] = elt_sub(G, lifts[j], y)
    zbasis = subgroup_basis(G, dgens, start=zX, max_size=max_size)
    es = zbasis[len(zX):]

    r_idx = [j for j in range(len(us)) if j not in accepted]
    s_idx = accepted
    blocks = (
        sorted(r_idx, key=lambda j: (o[j], j)),
        sorted(s_idx, key=lambda j: (o[j] + elt_order_exp(G, z[j]), o[j], j)),
        sorted(range(len(es)), key=lambda k: (elt_order_exp(G, es[k]), k)),
    )
    basis = [bs[j] for j in blocks[0]] + [bs[j] for j in blocks[1]] + [es[k] for k in blocks[2]]
    orders = [elt_order_exp(G, b) for b in basis]
    descriptor = TupleDescriptor(
        len(basis), len(blocks[0]), len(blocks[1]), tuple(orders), tuple(o[j] for j in blocks[1])
    )

    # coefficients: c = sum lambda_j b_j + w with w in the span of z_X and e
    zcoef = _coefficients(G, zX + es, max_size)
    col = {("f", j): i for i, j in enumerate(blocks[0] + blocks[1])}
    off = len(blocks[0]) + len(blocks[1])
    for pos, k in enumerate(blocks[2]):
        col[("e", k)] = off + pos
    expression = []
    for a, c, h in zip(tuple_, cs, shifts):
        row = [0] * len(basis)
        if h is not None:
            lm = lam(c) if elt_height(G, c) == 0 else (0,) * len(us)
            w = elt_sub(G, c, _combination(G, lm, bs))
            wc = zcoef[w]
            for j in range(len(us)):
                row[col[("f", j)]] += lm[j]
            for i, j in enumerate(accepted):
                row[col[("f", j)]] += wc[i] * p ** o[j]
            for k in range(len(es)):
                row[col[("e", k)]] += wc[len(zX) + k]
            row = [p ** h * v for v in row]
            row = [v % p ** l for v, l in zip(row, orders)]
        expression.append(tuple(row))
        assert _combination(G, row, basis) == a, "reconstruction failed"
    return Normalization(descriptor, tuple(basis), tuple(expression))


# -- realization --------------------------------------------------------------

def realizes_violation(spec: PGroupSpec, d: TupleDescriptor, strict_gamma: bool = False) -> Optional[str]:
    """First failed budget inequality for realizing ``d`` in a group with ``spec``, or None.

    The infinite-height budget counts the divisible rank kappa0 together with
    the Ulm tail sums unless ``strict_gamma`` asks for the Ulm sums alone.
    """
    for k in range(1, d.K + 1):
        if not card_geq(seq_at(spec.kappa, k), fin(d.nu(k))):
            return f"kappa_{k} >= nu_{k} fails: {seq_at(spec.kappa, k)} < {d.nu(k)}"
    for j in range(1, d.M + 1):
        budget = seq_tail_sum(spec.gamma, j)
        if not strict_gamma:
            budget = card_add(spec.kappa0, budget)
        need = card_sum(fin(d.mu(k)) for k in range(j, d.M + 1))
        if not card_geq(budget, need):
            lhs = f"sum_{{i>={j}}} gamma_i" if strict_gamma else f"kappa0 + sum_{{i>={j}}} gamma_i"
            return f"{lhs} >= sum_{{k>={j}}} mu_k fails: {budget} < {need}"
    return None


def realizes(spec: PGroupSpec, d: TupleDescriptor, strict_gamma: bool = False) -> bool:
    return realizes_violation(spec, d, strict_gamma) is None


def realize_in_group(G: StandardGroup, d: TupleDescriptor) -> Optional[Tuple[GroupElement, ...]]:
    """A tuple of G in descriptor order whose normalization has descriptor ``d``."""
    if not realizes(G.spec(), d):
        return None
    free = {}
    for j, e in enumerate(G.exponents):
        free.setdefault(e, []).append(j)
    for v in free.values():
        v.reverse()
    next_div = iter(range(G.d_copies))
    out = []
    for l in d.finite_part():
        out.append(G.cyclic_generator(free[l].pop()))
    for l, m in d.shifted_part():
        c = G.cyclic_generator(free[m].pop())
        out.append(elt_add(G, c, G.pruefer(next(next_div), 1, l)))
    for l in d.infinite_part():
        out.append(G.pruefer(next(next_div), 1, l))
    return tuple(out)


# -- homogeneity --------------------------------------------------------------

@dataclass(frozen=True)
class AutomorphismWitness:
    """An automorphism of G restricted to the layer G[p^K].

    ``generator_images`` lists the images of the standard generators of
    G[p^K] (the divisible ones first); they determine ``table``.  The block
    matrices record the coordinate form: ``divisible`` (D to D, invertible
    mod p), ``cross`` (reduced generators to D) and ``reduced`` (R to R,
    invertible).  There is no D to R block, which is what makes the map the
    restriction of an automorphism of the whole group.
    """

    group: StandardGroup
    precision: int
    source: Tuple[GroupElement, ...]
    target: Tuple[GroupElement, ...]
    generators: Tuple[GroupElement, ...]
    generator_images: Tuple[GroupElement, ...]
    divisible: Tuple[Tuple[int, ...], ...]
    cross: Tuple[Tuple[int, ...], ...]
    reduced: Tuple[Tuple[int, ...], ...]
    table: Mapping[GroupElement, GroupElement] = field(compare=False, hash=False, repr=False)

    def __call__(self, x: GroupElement) -> GroupElement:
        return self.table[x]

    def verify(self) -> Optional[str]:
        """None if the witness is additive, bijective and sends source to target."""
        G = self.group
        if len(set(self.table.values())) != len(self.table):
            return "not injective"
        if set(self.table.values()) != set(self.table):
            return "not onto the layer"
        for x in self.table:
            for g, gi in zip(self.generators, self.generator_images):
                if self.table[elt_add(G, x, g)] != elt_add(G, self.table[x], gi):
                    return f"not additive at {format_element(G, x)} + {format_element(G, g)}"
        for a, b in zip(self.source, self.target):
            if self.table.get(a) != b:
                return f"{format_element(G, a)} is not sent to {format_element(G, b)}"
        return None


class _Model:
    """The finite group Z(p^W)^d + R whose p^K-layer is G[p^K] with the same heights."""

    def __init__(self, G: StandardGroup, K: int):
        self.G, self.K, self.p = G, K, G.p
        self.W = K + max(G.max_exponent, 1)
        self.mods = tuple([G.p ** self.W] * G.d_copies + [G.p ** e for e in G.exponents])
        self.d = G.d_copies

    def embed(self, x: GroupElement) -> Tuple[int, ...]:
        p, W = self.p, self.W
        return tuple(a * p ** (W - k) % p ** W for a, k in x.div) + tuple(x.cyc)

    def back(self, v: Tuple[int, ...]) -> GroupElement:
        p, W = self.p, self.W
        div = []
        for c in v[: self.d]:
            if c == 0:
                div.append((0, 0))
            else:
                t = vp(c, p)
                div.append(_canon_pruefer(c // p ** t, W - t, p))
        return GroupElement(tuple(div), tuple(v[self.d :]))

    def add(self, x, y):
        return tuple((u + v) % m for u, v, m in zip(x, y, self.mods))

    def mul(self, n, x):
        return tuple((n * u) % m for u, m in zip(x, self.mods))

    def height(self, x):
        hs = [vp(u, self.p) for u in x if u]
        return min(hs) if hs else math.inf

    def zero(self):
        return (0,) * len(self.mods)

    def socle(self):
        ranges = [range(self.p) for _ in self.mods]
        return [tuple(c * m // self.p for c, m in zip(cs, self.mods)) for cs in itertools.product(*ranges)]

    def divide(self, x):
        if any(u % self.p for u in x):
            return None
        return tuple(u // self.p for u in x)

    def layer_generators(self):
        """Generators of the p^K layer, each as its chain g, then p g, ... (deepest first)."""
        gens = []
        for j, m in enumerate(self.mods):
            e = _log(m, self.p)
            t = min(e, self.K)
            gens.append(tuple(m // self.p ** t if i == j else 0 for i in range(len(self.mods))))
        return gens


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


class _PartialIso:
    def __init__(self, model: _Model):
        self.M = model
        z = model.zero()
        self.f: Dict[Tuple[int, ...], Tuple[int, ...]] = {z: z}
        self.image: Set[Tuple[int, ...]] = {z}

    def extend(self, x, y) -> Optional["_PartialIso"]:
        """One-step extension x -> y where p x already lies in the domain."""
        M, f = self.M, self.f
        if x in f:
            return self if f[x] == y else None
        if M.mul(M.p, y) != f[M.mul(M.p, x)] or y in self.image:
            return None
        new = {}
        xs, ys = M.zero(), M.zero()
        for _ in range(1, M.p):
            xs, ys = M.add(xs, x), M.add(ys, y)
            for s, t in f.items():
                u, v = M.add(s, xs), M.add(t, ys)
                if M.height(u) != M.height(v):
                    return None
                new[u] = v
        g = _PartialIso(M)
        g.f = {**f, **new}
        g.image = self.image | set(new.values())
        return g

    def candidates(self, x):
        M = self.M
        y0 = M.divide(self.f[M.mul(M.p, x)])
        if y0 is None:
            return []
        h = M.height(x)
        return [y for y in (M.add(y0, s) for s in M.socle()) if M.height(y) == h]


def _chain(M: _Model, x) -> List[Tuple[int, ...]]:
    out = [x]
    while any(out[-1]):
        out.append(M.mul(M.p, out[-1]))
    return list(reversed(out[:-1]))


def homogeneity_automorphism(
    G: StandardGroup,
    a: Sequence[GroupElement],
    b: Sequence[GroupElement],
    precision: int,
    max_size: int = DEFAULT_MAX_SUBGROUP,
    max_enum: int = DEFAULT_MAX_ENUM,
) -> Optional[AutomorphismWitness]:
    """An automorphism of G[p^K] sending a to b that extends to G, or None.

    Works in a finite model of G whose p^K-layer has the heights of G, and
    extends the partial map a_i -> b_i one element at a time, each new
    element having its p-multiple already in the domain and each image
    chosen with matching heights on the whole new coset.
    """
    if len(a) != len(b):
        raise InputError("tuples must have equal length")
    if not profiles_equal(profile_of(G, a, max_enum), profile_of(G, b, max_enum)):
        return None
    L = max((elt_order_exp(G, x) for x in list(a) + list(b)), default=0)
    if precision < L:
        raise InputError(f"precision too small: {precision} < max order exponent {L}")
    M = _Model(G, precision)
    size = M.p ** (precision * G.d_copies + sum(min(e, precision) for e in G.exponents))
    if size > max_size:
        raise CapExceeded("layer", size, max_size)

    phi = _PartialIso(M)
    for x, y in zip(a, b):
        for xs, ys in zip(_chain(M, M.embed(x)), _chain(M, M.embed(y))):
            phi = phi.extend(xs, ys)
            if phi is None:
                # equal profiles make this map height preserving, so it never fails
                raise AssertionError("profile-equal tuples gave an inconsistent partial map")

    steps = [x for g in M.layer_generators() for x in _chain(M, g)]

    def search(phi: _PartialIso, i: int) -> Optional[_PartialIso]:
        while i < len(steps) and steps[i] in phi.f:
            i += 1
        if i == len(steps):
            return phi
        for y in phi.candidates(steps[i]):
            nxt = phi.extend(steps[i], y)
            if nxt is not None:
                done = search(nxt, i + 1)
                if done is not None:
                    return done
        return None

    phi = search(phi, 0)
    if phi is None:
        return None
    table = {M.back(x): M.back(y) for x, y in phi.f.items()}
    gens = M.layer_generators()
    images = [phi.f[g] for g in gens]
    d = G.d_copies
    shift = M.p ** (M.W - precision)

    def coords(v, j):
        return v[j] // shift if j < d else v[j]

    divisible = tuple(tuple(coords(images[i], j) for j in range(d)) for i in range(d))
    cross = tuple(tuple(coords(images[i], j) for j in range(d)) for i in range(d, len(gens)))
    reduced = tuple(tuple(images[i][j] for j in range(d, len(gens))) for i in range(d, len(gens)))
    return AutomorphismWitness(
        G,
        precision,
        tuple(a),
        tuple(b),
        tuple(M.back(g) for g in gens),
        tuple(M.back(y) for y in images),
        divisible,
        cross,
        reduced,
        table,
    )
