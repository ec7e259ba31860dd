"""Symbolic descriptions of Abelian p-groups and periodic groups.

A p-group is described by

* ``kappa0`` -- rank of the divisible part, a direct sum of copies of Z(p^inf);
* ``kappa``  -- ``kappa[n]`` is the number of Z(p^n) summands in a basic
  subgroup of the reduced part;
* ``gamma``  -- ``gamma[k]`` is the number of Z(p^k) summands in a basic
  subgroup of the first Ulm subgroup (elements of infinite height).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple, Union

from sympy import isprime

from .cardinal import INF, ZERO, Cardinal, as_cardinal, fin
from .errors import InputError, SpecError
from .multiplicity import (
    UNBOUNDED,
    MultiplicitySeq,
    format_seq,
    parse_seq,
    seq_at,
    seq_final_rank,
    seq_support_bound,
)

__all__ = [
    "PGroupSpec",
    "PeriodicGroupSpec",
    "SzmielewInvariants",
    "zero_spec",
    "spec_ulm_invariant",
    "spec_tf_invariant",
    "spec_d_invariant",
    "spec_exp",
    "spec_invariants",
    "spec_realizable",
    "periodic_exp",
    "parse_group_file",
    "format_pgroup",
]


@dataclass(frozen=True)
class PGroupSpec:
    p: int
    kappa0: Cardinal = ZERO
    kappa: MultiplicitySeq = field(default_factory=MultiplicitySeq.zero)
    gamma: MultiplicitySeq = field(default_factory=MultiplicitySeq.zero)

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise SpecError(f"{self.p!r} is not prime")
        object.__setattr__(self, "kappa0", as_cardinal(self.kappa0))

    @property
    def is_separable(self) -> bool:
        """True when the reduced part has no elements of infinite height."""
        return self.gamma.is_zero()

    def __str__(self):
        return format_pgroup(self)


def zero_spec(p: int) -> PGroupSpec:
    return PGroupSpec(p)


@dataclass(frozen=True)
class PeriodicGroupSpec:
    """Direct sum of p-components; primes not listed have a zero component."""

    components: Mapping[int, PGroupSpec] = field(default_factory=dict)

    def __post_init__(self):
        comps = dict(sorted(self.components.items()))
        for p, s in comps.items():
            if s.p != p:
                raise SpecError(f"component keyed by {p} describes a {s.p}-group")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *specs: PGroupSpec) -> "PeriodicGroupSpec":
        comps = {}
        for s in specs:
            if s.p in comps:
                raise SpecError(f"two components for the prime {s.p}")
            comps[s.p] = s
        return cls(comps)

    def component(self, p: int) -> PGroupSpec:
        return self.components.get(p) or zero_spec(p)

    def __hash__(self):
        return hash(tuple(self.components.items()))


@dataclass(frozen=True)
class SzmielewInvariants:
    """The elementary invariants D, Tf, U(n-1) = u[n] and Exp of a p-group.

    ``exp`` is a Cardinal: ``Fin(p^N)`` for a bounded group, ``INF`` otherwise.
    """

    d: Cardinal
    tf: Cardinal
    u: MultiplicitySeq
    exp: Cardinal


def spec_ulm_invariant(s: PGroupSpec, n: int) -> Cardinal:
    return seq_at(s.kappa, n)


def spec_tf_invariant(s: PGroupSpec) -> Cardinal:
    return seq_final_rank(s.kappa)


def spec_d_invariant(s: PGroupSpec) -> Cardinal:
    if seq_support_bound(s.kappa) == UNBOUNDED:
        return INF
    return s.kappa0


def spec_exp(s: PGroupSpec) -> Cardinal:
    bound = seq_support_bound(s.kappa)
    if s.kappa0 != ZERO or bound == UNBOUNDED or not s.gamma.is_zero():
        return INF
    return fin(s.p ** bound)


def spec_invariants(s: PGroupSpec) -> SzmielewInvariants:
    return SzmielewInvariants(
        d=spec_d_invariant(s),
        tf=spec_tf_invariant(s),
        u=s.kappa,
        exp=spec_exp(s),
    )


def spec_realizable(s: PGroupSpec) -> Tuple[bool, Optional[str]]:
    """Whether some reduced-plus-divisible p-group has these invariants.

    Only the basic-subgroup rank condition for Ulm length two is checked: a
    nonzero first Ulm subgroup forces the first Ulm factor, and hence the
    basic subgroup, to be unbounded.
    """
    if s.gamma.is_zero() or seq_support_bound(s.kappa) == UNBOUNDED:
        return True, None
    return False, "condition (c): nonzero Ulm part requires unbounded basic subgroup"


def periodic_exp(g: PeriodicGroupSpec) -> Cardinal:
    total = 1
    for s in g.components.values():
        e = spec_exp(s)
        if e.is_inf:
            return INF
        total *= e.n
    return fin(total)


# -- group files ------------------------------------------------------------

def format_pgroup(s: PGroupSpec, name: str = "G") -> str:
    lines = [f"group {name} {{", f"  prime {s.p}", f"  divisible {s.kappa0}", f"  basic {format_seq(s.kappa)}"]
    if not s.gamma.is_zero():
        lines.append(f"  ulm {format_seq(s.gamma)}")
    lines.append("}")
    return "\n".join(lines)


_NAME = r"[A-Za-z_][A-Za-z0-9_.-]*"


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _lineno(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def parse_group_file(text: str) -> Dict[str, Union[PGroupSpec, PeriodicGroupSpec]]:
    """Parse ``group`` and ``periodic`` blocks; returns name -> spec in file order."""
    text = _strip_comments(text)
    out: Dict[str, Union[PGroupSpec, PeriodicGroupSpec]] = {}
    pos = 0
    block = re.compile(r"\s*(group|periodic)\s+(" + _NAME + r")\s*\{", re.S)
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = block.match(text, pos)
        if not m:
            raise InputError(f"line {_lineno(text, pos)}: expected 'group <name> {{' or 'periodic <name> {{'")
        kind, name = m.group(1), m.group(2)
        if name in out:
            raise InputError(f"line {_lineno(text, pos)}: duplicate name {name!r}")
        body_start = m.end()
        body_end = _matching_brace(text, body_start - 1)
        body = text[body_start:body_end]
        try:
            if kind == "group":
                out[name] = _parse_group_body(body)
            else:
                out[name] = _parse_periodic_body(body, out)
        except InputError as e:
            raise InputError(f"line {_lineno(text, pos)}: in {kind} {name}: {e}") from None
        pos = body_end + 1
    return out


def _matching_brace(text: str, open_pos: int) -> int:
    depth = 0
    for i in range(open_pos, len(text)):
        if text[i] == "{":
            depth += 1
        elif text[i] == "}":
            depth -= 1
            if depth == 0:
                return i
    raise InputError(f"line {_lineno(text, open_pos)}: unbalanced braces")


def _parse_group_body(body: str) -> PGroupSpec:
    fields = {}
    pos = 0
    item = re.compile(r"\s*(prime|divisible|basic|ulm)\b\s*", re.S)
    while True:
        while pos < len(body) and body[pos].isspace():
            pos += 1
        if pos >= len(body):
            break
        m = item.match(body, pos)
        if not m:
            raise InputError(f"unexpected text {body[pos:pos + 20].strip()!r}")
        key = m.group(1)
        if key in fields:
            raise InputError(f"{key} given twice")
        pos = m.end()
        if key in ("basic", "ulm"):
            if pos >= len(body) or body[pos] != "{":
                raise InputError(f"{key} expects a braced sequence")
            end = _matching_brace(body, pos)
            fields[key] = parse_seq(body[pos:end + 1])
            pos = end + 1
        else:
            tok = re.match(r"\S+", body[pos:])
            if not tok:
                raise InputError(f"{key} expects a value")
            fields[key] = tok.group(0)
            pos += tok.end()
    if "prime" not in fields:
        raise InputError("missing 'prime'")
    try:
        p = int(fields["prime"])
    except ValueError:
        raise InputError(f"bad prime {fields['prime']!r}") from None
    return PGroupSpec(
        p=p,
        kappa0=as_cardinal(fields.get("divisible", "0")),
        kappa=fields.get("basic", MultiplicitySeq.zero()),
        gamma=fields.get("ulm", MultiplicitySeq.zero()),
    )


def _parse_periodic_body(body: str, known) -> PeriodicGroupSpec:
    toks = body.split()
    if len(toks) % 2:
        raise InputError("expected 'component <groupname>' pairs")
    specs = []
    for kw, name in zip(toks[::2], toks[1::2]):
        if kw != "component":
            raise InputError(f"expected 'component', got {kw!r}")
        s = known.get(name)
        if not isinstance(s, PGroupSpec):
            raise InputError(f"unknown group {name!r}")
        specs.append(s)
    return PeriodicGroupSpec.of(*specs)
