"""First-order formulas of Abelian groups: parsing, pp elimination, checks.

Atoms are ``t = 0`` for integer linear terms t and ``n | t`` (t divisible by
n).  A positive primitive formula is an existential block over a conjunction
of atoms; ``pp_normalize`` removes the quantifiers with a Smith normal form
of the bound-variable block.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

from sympy import factorint

from .errors import InputError
from .smith import matmul, smith_normal_form

__all__ = [
    "Term",
    "Eq",
    "Div",
    "Not",
    "And",
    "Or",
    "Implies",
    "Exists",
    "Forall",
    "TRUE",
    "FormulaSyntaxError",
    "PPFormula",
    "PPElimination",
    "parse",
    "format_formula",
    "free_vars",
    "conj",
    "is_pp",
    "to_pp",
    "pp_eliminate",
    "pp_normalize",
    "pp_holds",
    "classify",
    "Classification",
]


# -- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    """Integer linear combination of variables; zero coefficients dropped."""

    items: Tuple[Tuple[str, int], ...] = ()

    @staticmethod
    def of(coeffs: Mapping[str, int]) -> "Term":
        return Term(tuple(sorted((v, int(c)) for v, c in coeffs.items() if c)))

    @property
    def coeffs(self) -> Dict[str, int]:
        return dict(self.items)

    def __add__(self, other: "Term") -> "Term":
        c = self.coeffs
        for v, k in other.items:
            c[v] = c.get(v, 0) + k
        return Term.of(c)

    def scale(self, n: int) -> "Term":
        return Term.of({v: n * c for v, c in self.items})

    def __neg__(self) -> "Term":
        return self.scale(-1)

    def __sub__(self, other: "Term") -> "Term":
        return self + (-other)

    def rename(self, old: str, new: str) -> "Term":
        return Term.of({(new if v == old else v): c for v, c in self.items})

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Eq:
    term: Term


@dataclass(frozen=True)
class Div:
    modulus: int
    term: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Eq, Div, Not, And, Or, Implies, Exists, Forall]
TRUE = Eq(Term())


def conj(atoms: Sequence[Formula]) -> Formula:
    if not atoms:
        return TRUE
    out = atoms[0]
    for a in atoms[1:]:
        out = And(out, a)
    return out


def free_vars(phi: Formula) -> Set[str]:
    if isinstance(phi, (Eq, Div)):
        return {v for v, _ in phi.term.items}
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def _all_vars(phi: Formula) -> Set[str]:
    if isinstance(phi, (Eq, Div)):
        return {v for v, _ in phi.term.items}
    if isinstance(phi, Not):
        return _all_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return _all_vars(phi.left) | _all_vars(phi.right)
    return _all_vars(phi.body) | {phi.var}


def _rename_free(phi: Formula, old: str, new: str) -> Formula:
    if isinstance(phi, Eq):
        return Eq(phi.term.rename(old, new))
    if isinstance(phi, Div):
        return Div(phi.modulus, phi.term.rename(old, new))
    if isinstance(phi, Not):
        return Not(_rename_free(phi.body, old, new))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(_rename_free(phi.left, old, new), _rename_free(phi.right, old, new))
    if phi.var == old:
        return phi
    return type(phi)(phi.var, _rename_free(phi.body, old, new))


def _fresh(base: str, taken: Set[str]) -> str:
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def rename_bound(phi: Formula) -> Formula:
    """Rename quantified variables so none is free elsewhere or bound twice."""
    taken = set(_all_vars(phi))
    seen = set(free_vars(phi))

    def go(f):
        if isinstance(f, (Eq, Div)):
            return f
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, (And, Or, Implies)):
            return type(f)(go(f.left), go(f.right))
        v, body = f.var, f.body
        if v in seen:
            nv = _fresh(v, taken)
            taken.add(nv)
            body = _rename_free(body, v, nv)
            v = nv
        seen.add(v)
        return type(f)(v, go(body))

    return go(phi)


# -- printing -----------------------------------------------------------------

def format_term(t: Term) -> str:
    if not t.items:
        return "0"
    parts = []
    for i, (v, c) in enumerate(t.items):
        mag = abs(c)
        body = v if mag == 1 else f"{mag}*{v}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Eq):
        return f"{format_term(phi.term)} = 0"
    if isinstance(phi, Div):
        return f"{phi.modulus} | {format_term(phi.term)}"
    if isinstance(phi, Not):
        return f"!{_wrap(phi.body)}"
    if isinstance(phi, And):
        return f"{_wrap(phi.left)} & {_wrap(phi.right)}"
    if isinstance(phi, Or):
        return f"{_wrap(phi.left)} v {_wrap(phi.right)}"
    if isinstance(phi, Implies):
        return f"{_wrap(phi.left)} -> {_wrap(phi.right)}"
    q = "E" if isinstance(phi, Exists) else "A"
    return f"{q} {phi.var}. {format_formula(phi.body)}"


def _wrap(phi: Formula) -> str:
    s = format_formula(phi)
    return s if isinstance(phi, (Eq, Div)) else f"({s})"


# -- parsing ------------------------------------------------------------------

class FormulaSyntaxError(InputError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col = line, col


_TOKEN = re.compile(r"\s*(?:(->)|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([()=|&!+\-*.]))")
_KEYWORDS = {"A", "E", "v"}


def _tokenize(text: str):
    toks, pos = [], 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            rest = text[pos:]
            if rest.strip():
                raise FormulaSyntaxError(f"unexpected character {rest.strip()[0]!r}", *_linecol(text, pos + len(rest) - len(rest.lstrip())))
            break
        start = m.start(m.lastindex)
        toks.append((m.group(m.lastindex), m.lastindex, start))
        pos = m.end()
    toks.append(("", 0, len(text)))
    return toks


def _linecol(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg):
        _, _, pos = self.peek()
        raise FormulaSyntaxError(msg, *_linecol(self.text, pos))

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok[0] != value:
            self.error(f"expected {value!r}, found {tok[0] or 'end of input'!r}")
        self.i += 1
        return tok

    def formula(self):
        tok = self.peek()
        if tok[0] in ("A", "E") and tok[1] == 3:
            self.take()
            v = self.take()
            if v[1] != 3 or v[0] in _KEYWORDS:
                self.i -= 1
                self.error("expected a variable after quantifier")
            self.take(".")
            body = self.formula()
            return Forall(v[0], body) if tok[0] == "A" else Exists(v[0], body)
        return self.imp()

    def imp(self):
        left = self.disj()
        if self.peek()[0] == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek()[0] == "v" and self.peek()[1] == 3:
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.neg()
        while self.peek()[0] == "&":
            self.take()
            left = And(left, self.neg())
        return left

    def neg(self):
        tok = self.peek()
        if tok[0] == "!":
            self.take()
            return Not(self.neg())
        if tok[0] == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok[0] in ("A", "E") and tok[1] == 3:
            return self.formula()
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok[1] == 2 and self.peek(1)[0] == "|":
            n = int(self.take()[0])
            if n < 1:
                self.i -= 1
                self.error("divisibility modulus must be positive")
            self.take("|")
            return Div(n, self.term())
        left = self.term()
        self.take("=")
        right = self.term()
        return Eq(left - right)

    def term(self):
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        t = self.addend().scale(sign)
        while self.peek()[0] in ("+", "-"):
            s = 1 if self.take()[0] == "+" else -1
            t = t + self.addend().scale(s)
        return t

    def addend(self):
        sign = 1
        if self.peek()[0] == "-" and self.peek(1)[1] == 2:
            self.take()
            sign = -1
        tok = self.peek()
        if tok[1] == 2:
            if self.peek(1)[0] == "*":
                self.take()
                self.take("*")
                return Term.of({self.var(): sign * int(tok[0])})
            if tok[0] == "0" or int(tok[0]) == 0:
                self.take()
                return Term()
            self.error("constants other than 0 are not terms; write n*x")
        return Term.of({self.var(): sign})

    def var(self):
        tok = self.peek()
        if tok[1] != 3 or tok[0] in _KEYWORDS:
            self.error(f"expected a variable, found {tok[0] or 'end of input'!r}")
        self.take()
        return tok[0]


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek()[1] != 0:
        p.error(f"unexpected {p.peek()[0]!r}")
    return rename_bound(f)


# -- positive primitive formulas ----------------------------------------------

@dataclass(frozen=True)
class PPFormula:
    free: Tuple[str, ...]
    bound: Tuple[str, ...]
    equations: Tuple[Term, ...]
    divisibilities: Tuple[Tuple[int, Term], ...]

    def to_formula(self) -> Formula:
        body = conj([Eq(t) for t in self.equations] + [Div(n, t) for n, t in self.divisibilities])
        for v in reversed(self.bound):
            body = Exists(v, body)
        return body


def is_pp(phi: Formula) -> bool:
    if isinstance(phi, (Eq, Div)):
        return True
    if isinstance(phi, And):
        return is_pp(phi.left) and is_pp(phi.right)
    if isinstance(phi, Exists):
        return is_pp(phi.body)
    return False


def to_pp(phi: Formula) -> PPFormula:
    """Prenex form of a syntactically pp formula."""
    if not is_pp(phi):
        raise InputError(f"not a positive primitive formula: {format_formula(phi)}")
    phi = rename_bound(phi)
    bound, eqs, divs = [], [], []

    def go(f):
        if isinstance(f, Eq):
            eqs.append(f.term)
        elif isinstance(f, Div):
            divs.append((f.modulus, f.term))
        elif isinstance(f, And):
            go(f.left)
            go(f.right)
        else:
            bound.append(f.var)
            go(f.body)

    go(phi)
    return PPFormula(tuple(sorted(free_vars(phi))), tuple(bound), tuple(eqs), tuple(divs))


def _prime_powers(n: int) -> List[int]:
    return [q ** k for q, k in sorted(factorint(n).items())]


def _canonical_div(q: int, k: int, coeffs: Dict[str, int]) -> Optional[Div]:
    mod = q ** k
    c = {v: a % mod for v, a in coeffs.items() if a % mod}
    if not c:
        return None
    # scale the first coefficient to a power of q, then pick the smallest
    # representative among the units that keep it fixed
    first = c[min(c)]
    v, unit = 0, first
    while unit % q == 0:
        unit //= q
        v += 1
    inv = pow(unit, -1, mod)
    best = None
    for t in range(q ** v):
        u = inv * (1 + t * q ** (k - v)) % mod
        cand = tuple(sorted((x, a * u % mod) for x, a in c.items()))
        if best is None or [a for _, a in cand] < [a for _, a in best]:
            best = cand
    return Div(mod, Term.of(dict(best)))


def _canonical_eq(coeffs: Dict[str, int]) -> Optional[Eq]:
    t = Term.of(coeffs)
    if not t.items:
        return None
    return Eq(t if t.items[0][1] > 0 else -t)


def _atom_key(a: Formula):
    return (0, (), a.term.items) if isinstance(a, Eq) else (1, a.modulus, a.term.items)


@dataclass(frozen=True)
class PPElimination:
    """Quantifier-free result with the Smith certificate U * B * V = S."""

    atoms: Tuple[Formula, ...]
    free: Tuple[str, ...]
    unknowns: Tuple[str, ...]
    bound_block: Tuple[Tuple[int, ...], ...]
    free_block: Tuple[Tuple[int, ...], ...]
    U: Tuple[Tuple[int, ...], ...]
    V: Tuple[Tuple[int, ...], ...]
    S: Tuple[Tuple[int, ...], ...]

    def formula(self) -> Formula:
        return conj(list(self.atoms))

    def __str__(self):
        return format_formula(self.formula())


def pp_eliminate(phi: Union[PPFormula, Formula]) -> PPElimination:
    pp = phi if isinstance(phi, PPFormula) else to_pp(phi)
    free = list(pp.free)
    taken = set(free) | set(pp.bound)
    unknowns = list(pp.bound)
    rows = [t.coeffs for t in pp.equations]
    for n, t in pp.divisibilities:
        # n | t  becomes  t - n*z = 0  with a fresh unknown z
        z = _fresh("z", taken)
        taken.add(z)
        unknowns.append(z)
        c = t.coeffs
        c[z] = c.get(z, 0) - n
        rows.append(c)
    X = [[r.get(v, 0) for v in free] for r in rows]
    B = [[r.get(v, 0) for v in unknowns] for r in rows]
    atoms: List[Formula] = []
    if unknowns and rows:
        S, U, V = smith_normal_form(B)
        UX = matmul(U, X)
        for i, row in enumerate(UX):
            coeffs = dict(zip(free, row))
            d = S[i][i] if i < len(unknowns) else 0
            if d == 0:
                a = _canonical_eq(coeffs)
                if a is not None:
                    atoms.append(a)
            else:
                for qk in _prime_powers(d):
                    q = min(factorint(qk))
                    a = _canonical_div(q, _log(qk, q), coeffs)
                    if a is not None:
                        atoms.append(a)
    else:
        S, U, V = [], [], []
        for r in rows:
            a = _canonical_eq({v: r.get(v, 0) for v in free})
            if a is not None:
                atoms.append(a)
    uniq = sorted(set(atoms), key=_atom_key)
    tup = lambda M: tuple(tuple(r) for r in M)
    return PPElimination(tuple(uniq), tuple(free), tuple(unknowns), tup(B), tup(X), tup(U), tup(V), tup(S))


def _log(n: int, q: int) -> int:
    k = 0
    while n > 1:
        n //= q
        k += 1
    return k


def pp_normalize(phi: Union[PPFormula, Formula]) -> Formula:
    """Equivalent conjunction of equations and prime-power divisibilities in the free variables."""
    return pp_eliminate(phi).formula()


def _drop_foreign_divisibility(phi: Formula, p: int) -> Formula:
    if isinstance(phi, Div):
        keep = [qk for qk in _prime_powers(phi.modulus) if qk % p == 0]
        return Div(keep[0], phi.term) if keep else TRUE
    if isinstance(phi, And):
        return And(_drop_foreign_divisibility(phi.left, p), _drop_foreign_divisibility(phi.right, p))
    if isinstance(phi, Exists):
        return Exists(phi.var, _drop_foreign_divisibility(phi.body, p))
    return phi


def pp_holds(profile, phi: Union[PPFormula, Formula], variables: Optional[Sequence[str]] = None) -> bool:
    """Truth of a pp formula at a tuple, read off the tuple's profile.

    ``variables`` names the tuple positions (default x1..xm).  In a p-group
    divisibility by a power of another prime always holds, so those atoms are
    removed before elimination.
    """
    if isinstance(phi, PPFormula):
        phi = phi.to_formula()
    variables = list(variables) if variables is not None else [f"x{i + 1}" for i in range(profile.m)]
    if len(variables) != profile.m:
        raise InputError(f"profile has arity {profile.m} but {len(variables)} variables were named")
    extra = free_vars(phi) - set(variables)
    if extra:
        raise InputError(f"free variables {sorted(extra)} are not tuple positions")
    elim = pp_eliminate(_drop_foreign_divisibility(phi, profile.p))
    pos = {v: i for i, v in enumerate(variables)}
    for a in elim.atoms:
        alpha = [0] * profile.m
        for v, c in a.term.items:
            alpha[pos[v]] += c
        order, height = profile.at(alpha)
        if isinstance(a, Eq):
            if order != 0:
                return False
        elif a.modulus % profile.p == 0:
            if height < _log(a.modulus, profile.p):
                return False
    return True


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    kind: str  # "pp" or "boolean"
    pp_cores: Tuple[Formula, ...] = ()
    sentences: Tuple[Formula, ...] = ()
    forall_exists: Tuple[Formula, ...] = ()
    other: Tuple[Formula, ...] = ()

    def report(self) -> str:
        if self.kind == "pp":
            return "pp"
        lines = ["boolean combination"]
        for f in self.pp_cores:
            lines.append(f"  pp core: {format_formula(f)}")
        for f in self.sentences:
            tag = "forall-exists sentence" if f in self.forall_exists else "sentence"
            lines.append(f"  {tag}: {format_formula(f)}")
        for f in self.other:
            lines.append(f"  other: {format_formula(f)}")
        return "\n".join(lines)


def _quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Eq, Div)):
        return True
    if isinstance(phi, Not):
        return _quantifier_free(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return _quantifier_free(phi.left) and _quantifier_free(phi.right)
    return False


def _is_forall_exists(phi: Formula) -> bool:
    while isinstance(phi, Forall):
        phi = phi.body
    while isinstance(phi, Exists):
        phi = phi.body
    return _quantifier_free(phi)


def classify(phi: Formula) -> Classification:
    """Syntactic split into pp cores and sentence parts; not a full elimination."""
    if is_pp(phi):
        return Classification("pp")
    cores, sentences, ae, other = [], [], [], []

    def go(f):
        if is_pp(f) and free_vars(f):
            cores.append(f)
        elif not free_vars(f):
            sentences.append(f)
            if _is_forall_exists(f):
                ae.append(f)
        elif isinstance(f, Not):
            go(f.body)
        elif isinstance(f, (And, Or, Implies)):
            go(f.left)
            go(f.right)
        else:
            other.append(f)

    go(phi)
    return Classification("boolean", tuple(cores), tuple(sentences), tuple(ae), tuple(other))
