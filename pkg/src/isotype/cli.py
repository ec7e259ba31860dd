"""Command-line front end: ``isotype <subcommand> ...``.

Decision subcommands exit 0 for yes, 1 for no, 2 on usage or input errors
and 3 when a configured cap is exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Dict, List, Optional, Sequence, Union

from .cardinal import Cardinal
from .concrete import DEFAULT_MAX_SUBGROUP, StandardGroup, format_element, parse_element, standard_group_from_spec
from .deciders import (
    ee_p_violation,
    ee_violation,
    isotypic_p_violation,
    isotypic_violation,
)
from .errors import CapExceeded, InputError, IsotypeError
from .formulas import (
    classify,
    format_formula,
    free_vars,
    is_pp,
    parse,
    pp_eliminate,
)
from .groupspec import (
    PeriodicGroupSpec,
    PGroupSpec,
    SzmielewInvariants,
    format_pgroup,
    parse_group_file,
    spec_invariants,
    spec_realizable,
)
from .multiplicity import format_seq
from .typecalc import (
    DEFAULT_MAX_ENUM,
    format_descriptor,
    format_profile,
    homogeneity_automorphism,
    normalize_tuple,
    parse_descriptor,
    profile_of,
    realize_in_group,
    realizes_violation,
)

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

Spec = Union[PGroupSpec, PeriodicGroupSpec]


# -- argument resolution -------------------------------------------------------

def _inline_group(text: str) -> StandardGroup:
    fields = {}
    for tok in text.split():
        if "=" not in tok:
            raise InputError(f"inline group expects key=value tokens, got {tok!r}")
        k, v = tok.split("=", 1)
        fields[k] = v
    unknown = set(fields) - {"p", "d", "e"}
    if unknown or "p" not in fields:
        raise InputError("inline group syntax: 'p=<prime> [d=<copies>] [e=<e1>,<e2>,...]'")
    try:
        exps = tuple(int(x) for x in fields.get("e", "").split(",") if x)
        return StandardGroup(int(fields["p"]), int(fields.get("d", "0")), exps)
    except ValueError:
        raise InputError(f"bad inline group {text!r}") from None


def load_spec(arg: str) -> Spec:
    """``file.grp[:name]`` or an inline ``p=.. d=.. e=..`` group."""
    if "=" in arg and not os.path.exists(arg):
        return _inline_group(arg).spec()
    path, name = arg, None
    if not os.path.exists(path) and ":" in arg:
        path, name = arg.rsplit(":", 1)
    try:
        with open(path, encoding="utf-8") as fh:
            groups = parse_group_file(fh.read())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    if not groups:
        raise InputError(f"{path}: no groups defined")
    if name is not None:
        if name not in groups:
            raise InputError(f"{path}: no group named {name!r}")
        return groups[name]
    periodic = [g for g in groups.values() if isinstance(g, PeriodicGroupSpec)]
    return periodic[-1] if periodic else list(groups.values())[-1]


def load_group(arg: str) -> StandardGroup:
    if "=" in arg and not os.path.exists(arg):
        return _inline_group(arg)
    s = load_spec(arg)
    if isinstance(s, PeriodicGroupSpec):
        if len(s.components) != 1:
            raise InputError("concrete commands need a single p-group")
        s = next(iter(s.components.values()))
    return standard_group_from_spec(s)


def _as_periodic(s: Spec) -> PeriodicGroupSpec:
    return s if isinstance(s, PeriodicGroupSpec) else PeriodicGroupSpec.of(s)


def _warn_unrealizable(s: Spec, label: str):
    comps = s.components.values() if isinstance(s, PeriodicGroupSpec) else [s]
    for c in comps:
        ok, diag = spec_realizable(c)
        if not ok:
            print(f"warning: {label} ({c.p}-component) is not realizable: {diag}", file=sys.stderr)


# -- output helpers ----------------------------------------------------------------

def _card(c: Cardinal) -> str:
    return str(c)


def _height(h) -> str:
    return "inf" if h == math.inf else str(h)


def _invariants_obj(p: int, inv: SzmielewInvariants) -> Dict:
    return {"p": p, "D": _card(inv.d), "Tf": _card(inv.tf), "U": format_seq(inv.u), "Exp": _card(inv.exp)}


def _emit(args, obj: Dict, text: str):
    if args.json:
        print(json.dumps(obj))
    else:
        print(text)


def _decision(args, name: str, violation: Optional[str], agree_note: str) -> int:
    ok = violation is None
    obj = {"decision": name, "result": ok}
    text = f"{name}: {'yes' if ok else 'no'}"
    if args.explain:
        obj["reason"] = agree_note if ok else violation
        text += f"\n  {obj['reason']}"
    _emit(args, obj, text)
    return EXIT_YES if ok else EXIT_NO


# -- subcommands --------------------------------------------------------------------

def cmd_invariants(args) -> int:
    s = _as_periodic(load_spec(args.group))
    objs = [_invariants_obj(p, spec_invariants(c)) for p, c in s.components.items()]
    lines = []
    for o in objs:
        lines.append(f"p={o['p']}: D={o['D']} Tf={o['Tf']} U={o['U']} Exp={o['Exp']}")
    _emit(args, {"invariants": objs}, "\n".join(lines) if lines else "trivial group")
    return EXIT_YES


def _pair(args):
    a, b = load_spec(args.a), load_spec(args.b)
    _warn_unrealizable(a, args.a)
    _warn_unrealizable(b, args.b)
    if isinstance(a, PGroupSpec) and isinstance(b, PGroupSpec):
        return a, b, True
    return _as_periodic(a), _as_periodic(b), False


def cmd_ee(args) -> int:
    a, b, single = _pair(args)
    v = ee_p_violation(a, b) if single else ee_violation(a, b)
    return _decision(args, "elementarily equivalent", v, "D, Tf, every U(p,n) and Exp agree")


def cmd_isotypic(args) -> int:
    a, b, single = _pair(args)
    v = isotypic_p_violation(a, b) if single else isotypic_violation(a, b)
    note = "basic invariants agree and the divisible rank plus Ulm tail sums coincide"
    return _decision(args, "isotypic", v, note)


def cmd_realizable(args) -> int:
    s = _as_periodic(load_spec(args.group))
    for p, c in s.components.items():
        ok, diag = spec_realizable(c)
        if not ok:
            return _decision(args, "realizable", f"{p}-component: {diag}", "")
    return _decision(args, "realizable", None, "every component with a nonzero Ulm part has an unbounded basic subgroup")


def _elements(G: StandardGroup, texts: Sequence[str]):
    return [parse_element(G, t) for t in texts]


def cmd_profile(args) -> int:
    G = load_group(args.group)
    P = profile_of(G, _elements(G, args.elements), args.max_enum)
    obj = {
        "p": P.p,
        "m": P.m,
        "L": P.L,
        "entries": [[list(a), P.entries[a][0], _height(P.entries[a][1])] for a in sorted(P.entries)],
    }
    _emit(args, obj, format_profile(P))
    return EXIT_YES


def cmd_normalize(args) -> int:
    G = load_group(args.group)
    n = normalize_tuple(G, _elements(G, args.elements), args.max_subgroup)
    basis = [format_element(G, b) for b in n.basis]
    obj = {"descriptor": format_descriptor(n.descriptor), "basis": basis, "expression": [list(r) for r in n.expression]}
    lines = [format_descriptor(n.descriptor)]
    lines += [f"b{j + 1} = {b}" for j, b in enumerate(basis)]
    for i, row in enumerate(n.expression):
        terms = [f"{c}*b{j + 1}" for j, c in enumerate(row) if c]
        lines.append(f"a{i + 1} = {' + '.join(terms) if terms else '0'}")
    _emit(args, obj, "\n".join(lines))
    return EXIT_YES


def cmd_realizes(args) -> int:
    s = load_spec(args.group)
    if isinstance(s, PeriodicGroupSpec):
        if len(s.components) != 1:
            raise InputError("realizes needs a single p-group")
        s = next(iter(s.components.values()))
    d = parse_descriptor(args.descriptor)
    v = realizes_violation(s, d, args.strict_gamma)
    return _decision(args, "realizes", v, "all nu and mu budget inequalities hold")


def cmd_realize(args) -> int:
    G = load_group(args.group)
    d = parse_descriptor(args.descriptor)
    t = realize_in_group(G, d)
    if t is None:
        _emit(args, {"tuple": None}, "no realization")
        return EXIT_NO
    elts = [format_element(G, x) for x in t]
    _emit(args, {"tuple": elts}, "\n".join(elts) if elts else "empty tuple")
    return EXIT_YES


def cmd_homog(args) -> int:
    G = load_group(args.group)
    a, b = _elements(G, args.source), _elements(G, args.target)
    K = args.precision
    if K is None:
        K = max([G.max_exponent, 1])
    w = homogeneity_automorphism(G, a, b, K, args.max_subgroup, args.max_enum)
    if w is None:
        obj = {"automorphism": None}
        text = "no automorphism: the type profiles differ"
        _emit(args, obj, text)
        return EXIT_NO
    gens = [[format_element(G, g), format_element(G, y)] for g, y in zip(w.generators, w.generator_images)]
    obj = {"automorphism": True, "precision": K, "layer_size": len(w.table), "generators": gens}
    lines = [f"automorphism of G[p^{K}] ({len(w.table)} elements):"]
    lines += [f"  {g} -> {y}" for g, y in gens]
    _emit(args, obj, "\n".join(lines))
    return EXIT_YES


def cmd_eval(args) -> int:
    from .oracle import oracle_eval

    G = load_group(args.group)
    phi = parse(args.formula)
    env = {}
    for item in args.env or []:
        if "=" not in item:
            raise InputError(f"--env expects var=element, got {item!r}")
        v, e = item.split("=", 1)
        env[v.strip()] = parse_element(G, e)
    missing = free_vars(phi) - set(env)
    if missing:
        raise InputError(f"no value for free variables {sorted(missing)}")
    ok = oracle_eval(G, phi, env, max_cells=args.max_enum * 16)
    _emit(args, {"formula": format_formula(phi), "result": ok}, "true" if ok else "false")
    return EXIT_YES if ok else EXIT_NO


def cmd_ppnf(args) -> int:
    phi = parse(args.formula)
    if not is_pp(phi):
        report = classify(phi)
        _emit(args, {"pp": False, "report": report.report()}, report.report())
        return EXIT_NO
    elim = pp_eliminate(phi)
    obj = {"pp": True, "normal_form": str(elim)}
    text = str(elim)
    if args.explain:
        obj["certificate"] = {"unknowns": list(elim.unknowns), "U": elim.U, "V": elim.V, "S": elim.S}
        text += f"\n  unknowns {' '.join(elim.unknowns)}\n  U={elim.U}\n  V={elim.V}\n  S={elim.S}"
    _emit(args, obj, text)
    return EXIT_YES


def cmd_oracle(args) -> int:
    from .crosscheck import run_suites

    rows = run_suites(args.seed, args.trials)
    ok = all(not f for _, _, f in rows)
    obj = {"seed": args.seed, "suites": [{"suite": n, "trials": t, "failures": f} for n, t, f in rows]}
    lines = [f"{'suite':<16} {'trials':>6}  result"]
    for n, t, f in rows:
        lines.append(f"{n:<16} {t:>6}  {'pass' if not f else 'FAIL (' + str(len(f)) + ')'}")
        lines += [f"    {msg}" for msg in f[:3]]
    _emit(args, obj, "\n".join(lines))
    return EXIT_YES if ok else EXIT_NO


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--explain", action="store_true", help="name the deciding invariant or inequality")
    common.add_argument("--max-subgroup", type=int, default=DEFAULT_MAX_SUBGROUP, help="subgroup size cap")
    common.add_argument("--max-enum", type=int, default=DEFAULT_MAX_ENUM, help="enumeration cap")
    common.add_argument("--precision", type=int, default=None, help="layer K for automorphism witnesses")

    ap = argparse.ArgumentParser(prog="isotype", description="Elementary and isotypic equivalence of periodic Abelian groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    add("invariants", cmd_invariants, "Szmielew invariants").add_argument("group")
    for name, func, h in (("ee", cmd_ee, "elementary equivalence"), ("isotypic", cmd_isotypic, "isotypic equivalence")):
        p = add(name, func, h)
        p.add_argument("a")
        p.add_argument("b")
    add("realizable", cmd_realizable, "check that a spec describes a group").add_argument("group")
    for name, func, h in (("profile", cmd_profile, "type profile of a tuple"), ("normalize", cmd_normalize, "normalize a tuple")):
        p = add(name, func, h)
        p.add_argument("group")
        p.add_argument("elements", nargs="*")
    p = add("realizes", cmd_realizes, "can a group realize a descriptor")
    p.add_argument("group")
    p.add_argument("descriptor")
    p.add_argument("--strict-gamma", action="store_true", help="budget infinite heights by Ulm sums alone")
    p = add("realize", cmd_realize, "build a tuple with a descriptor")
    p.add_argument("group")
    p.add_argument("descriptor")
    p = add("homog", cmd_homog, "automorphism sending one tuple to another")
    p.add_argument("group")
    p.add_argument("-a", "--source", action="append", default=[], help="source element (repeat)")
    p.add_argument("-b", "--target", action="append", default=[], help="target element (repeat)")
    p = add("eval", cmd_eval, "evaluate a formula in a finite group")
    p.add_argument("group")
    p.add_argument("formula")
    p.add_argument("--env", action="append", help="var=element assignment (repeat)")
    add("ppnf", cmd_ppnf, "quantifier-free form of a pp formula").add_argument("formula")
    p = add("oracle", cmd_oracle, "randomized cross-checks against brute force")
    p.add_argument("action", choices=["check"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, IsotypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
