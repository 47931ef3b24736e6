"""JSON documents and the ``ordcalc`` command line.

Documents are UTF-8 JSON objects tagged by ``kind``.  Element names are
strings; indices never appear in files.  References to a semigroup (``on``,
``from``, ``to``) are an inline semigroup document, a path relative to the
referring file, or a fixture description such as ``NBAR(2)``.

Exit codes: 0 pass, 1 property failure (the report carries witnesses),
2 usage or parse error (diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .completion import complete, embedding_check
from .dynamics import ActionError, GroupAction, dyn_quotient, invariant_closed_ideals, is_minimal, trivial_action, validate_action
from .functionals import (
    INF,
    ExtState,
    almost_unperforated,
    dyn_strict_comparison,
    extended_functionals,
    functional_transfer_check,
    normalised_vertices,
)
from .genpair import generate_normal, generate_prenormal
from .ideals import BudgetExceeded, Ideal, closure, enumerate_ideals, generated_ideal, is_order_unit, is_simple, pair_of_ideal
from .iso import find_isomorphism
from .pairs import Pair, PreconditionError, classify_pair
from .quotients import QuotientResult, quotient
from .relcore import Relation
from .wstruct import (
    AxiomReport,
    FixtureSpecError,
    WMorphism,
    WSemigroup,
    check_cu_axioms,
    check_morphism,
    check_w_axioms,
    fixture,
)

KINDS = ("semigroup", "relation", "action", "morphism", "pair", "report")
FIELDS = {
    "semigroup": {"kind", "elements", "zero", "add", "prec"},
    "relation": {"kind", "on", "pairs"},
    "action": {"kind", "on", "generators"},
    "morphism": {"kind", "from", "to", "map"},
    "pair": {"kind", "on", "aux", "order"},
    "report": {"kind", "command", "status", "result"},
}


class DocumentError(ValueError):
    """Parse failure with a stable code: E_JSON, E_SCHEMA, E_ADD_SHAPE, E_NAME or E_REF."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


@dataclass(frozen=True, eq=False)
class NamedSemigroup:
    semigroup: WSemigroup
    names: tuple[str, ...]

    def index(self, name: Any) -> int:
        if not isinstance(name, str):
            raise DocumentError("E_SCHEMA", f"element names must be strings, got {name!r}")
        try:
            return self.names.index(name)
        except ValueError:
            raise DocumentError("E_NAME", f"unknown element name {name!r}") from None

    def name(self, a: int) -> str:
        return self.names[int(a)]

    def same_as(self, other: NamedSemigroup) -> bool:
        return self.names == other.names and self.semigroup == other.semigroup


@dataclass(frozen=True, eq=False)
class Document:
    """A parsed document: its canonical JSON ``data`` and the decoded ``value``.

    ``value`` is a ``NamedSemigroup`` (semigroup), ``Relation`` (relation),
    a tuple of permutations (action), ``WMorphism`` (morphism), ``Pair`` (pair)
    or the raw result object (report).  ``on`` is the resolved carrier.
    """

    kind: str
    data: dict
    value: Any
    on: NamedSemigroup | None = None
    target: NamedSemigroup | None = None


# parsing ---------------------------------------------------------------------------


def _schema(cond: bool, message: str) -> None:
    if not cond:
        raise DocumentError("E_SCHEMA", message)


def _name_pairs(ns: NamedSemigroup, raw: Any, field_name: str) -> Relation:
    _schema(isinstance(raw, list), f"{field_name} must be a list of name pairs")
    bits = np.zeros((ns.semigroup.n, ns.semigroup.n), dtype=bool)
    for item in raw:
        _schema(isinstance(item, list) and len(item) == 2, f"{field_name} entries must be [name, name]")
        bits[ns.index(item[0]), ns.index(item[1])] = True
    return Relation(bits)


def _name_map(src: NamedSemigroup, dst: NamedSemigroup, raw: Any, what: str) -> np.ndarray:
    _schema(isinstance(raw, dict), f"{what} must be an object from names to names")
    out = np.full(src.semigroup.n, -1, dtype=np.intp)
    for key, val in raw.items():
        out[src.index(key)] = dst.index(val)
    missing = [src.name(a) for a in np.flatnonzero(out < 0)]
    _schema(not missing, f"{what} is not total; missing {missing[:3]}")
    return out


def _pairs_data(ns: NamedSemigroup, rel: Relation) -> list[list[str]]:
    return [[ns.name(a), ns.name(b)] for a, b in rel.pairs()]


def semigroup_data(ns: NamedSemigroup) -> dict:
    s = ns.semigroup
    return {
        "kind": "semigroup",
        "elements": list(ns.names),
        "zero": ns.name(s.zero),
        "add": [[ns.name(s.add[a, b]) for b in range(s.n)] for a in range(s.n)],
        "prec": _pairs_data(ns, s.prec),
    }


def _parse_semigroup(obj: dict) -> Document:
    names = obj["elements"]
    _schema(isinstance(names, list) and names, "elements must be a nonempty list")
    _schema(all(isinstance(x, str) for x in names), "element names must be strings")
    if len(set(names)) != len(names):
        dup = next(x for x in names if names.count(x) > 1)
        raise DocumentError("E_NAME", f"duplicate element name {dup!r}")
    n = len(names)
    table = obj["add"]
    if not (isinstance(table, list) and len(table) == n and all(isinstance(r, list) and len(r) == n for r in table)):
        raise DocumentError("E_ADD_SHAPE", f"add must be a {n}x{n} table of names")
    shell = NamedSemigroup(WSemigroup.build(np.zeros((n, n), dtype=np.intp), 0, np.zeros((n, n), dtype=bool)), tuple(names))
    add = np.array([[shell.index(x) for x in row] for row in table], dtype=np.intp)
    zero = shell.index(obj["zero"])
    prec = _name_pairs(shell, obj["prec"], "prec")
    ns = NamedSemigroup(WSemigroup.build(add, zero, prec), tuple(names))
    return Document("semigroup", semigroup_data(ns), ns, ns)


Resolver = Callable[[Any, "Path | None"], NamedSemigroup]


def resolve_ref(ref: Any, base: Path | None) -> NamedSemigroup:
    """Inline document, file path (relative to ``base``) or fixture description."""
    if isinstance(ref, dict):
        doc = parse_object(ref, base)
        if doc.kind != "semigroup":
            raise DocumentError("E_REF", f"reference is a {doc.kind} document, not a semigroup")
        return doc.value
    if not isinstance(ref, str):
        raise DocumentError("E_SCHEMA", "a semigroup reference must be a string or an object")
    path = Path(ref) if base is None else base / ref
    if path.is_file():
        doc = load_document(path)
        if doc.kind != "semigroup":
            raise DocumentError("E_REF", f"{ref} holds a {doc.kind} document, not a semigroup")
        return doc.value
    try:
        fx = fixture(ref)
    except FixtureSpecError:
        raise DocumentError("E_REF", f"{ref!r} is neither a file nor a fixture description") from None
    return NamedSemigroup(fx.semigroup, fx.labels)


def parse_object(obj: Any, base: Path | None = None) -> Document:
    _schema(isinstance(obj, dict), "a document must be a JSON object")
    kind = obj.get("kind")
    _schema(kind in KINDS, f"kind must be one of {', '.join(KINDS)}")
    extra = set(obj) - FIELDS[kind]
    _schema(not extra, f"unknown fields {sorted(extra)}")
    missing = FIELDS[kind] - set(obj)
    _schema(not missing, f"missing fields {sorted(missing)}")
    if kind == "semigroup":
        return _parse_semigroup(obj)
    if kind == "report":
        _schema(isinstance(obj["command"], str) and obj["status"] in ("pass", "fail"), "report needs command and status")
        return Document("report", dict(obj), obj["result"])
    if kind == "morphism":
        src, dst = resolve_ref(obj["from"], base), resolve_ref(obj["to"], base)
        fmap = _name_map(src, dst, obj["map"], "map")
        data = {"kind": kind, "from": obj["from"], "to": obj["to"], "map": {src.name(a): dst.name(fmap[a]) for a in range(len(fmap))}}
        return Document(kind, data, WMorphism(src.semigroup, dst.semigroup, fmap), src, dst)
    ns = resolve_ref(obj["on"], base)
    if kind == "relation":
        rel = _name_pairs(ns, obj["pairs"], "pairs")
        return Document(kind, {"kind": kind, "on": obj["on"], "pairs": _pairs_data(ns, rel)}, rel, ns)
    if kind == "pair":
        aux, order = _name_pairs(ns, obj["aux"], "aux"), _name_pairs(ns, obj["order"], "order")
        data = {"kind": kind, "on": obj["on"], "aux": _pairs_data(ns, aux), "order": _pairs_data(ns, order)}
        return Document(kind, data, Pair(aux, order), ns)
    gens_raw = obj["generators"]
    _schema(isinstance(gens_raw, list), "generators must be a list")
    gens = tuple(tuple(int(v) for v in _name_map(ns, ns, g, f"generator {k}")) for k, g in enumerate(gens_raw))
    data = {"kind": kind, "on": obj["on"], "generators": [{ns.name(a): ns.name(v) for a, v in enumerate(g)} for g in gens]}
    return Document(kind, data, gens, ns)


def parse(raw: bytes | str, base: Path | None = None) -> Document:
    try:
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        obj = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DocumentError("E_JSON", str(exc)) from None
    return parse_object(obj, base)


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize(doc: Document) -> bytes:
    return dumps(doc.data).encode("utf-8")


def load_document(path: Path) -> Document:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise DocumentError("E_REF", f"cannot read {path}: {exc.strerror}") from None
    return parse(raw, Path(path).parent)


def fixture_document(description: str) -> Document:
    fx = fixture(description)
    ns = NamedSemigroup(fx.semigroup, fx.labels)
    return Document("semigroup", semigroup_data(ns), ns, ns)


def action_document(on: Any, ns: NamedSemigroup, gens) -> Document:
    data = {"kind": "action", "on": on, "generators": [{ns.name(a): ns.name(v) for a, v in enumerate(g)} for g in gens]}
    return Document("action", data, tuple(tuple(int(v) for v in g) for g in gens), ns)


# reports ---------------------------------------------------------------------------


class UsageError(ValueError):
    pass


class InvalidAction(ValueError):
    """An action document whose generators are not automorphisms; ``detail`` is the named report."""

    def __init__(self, detail: dict) -> None:
        super().__init__(detail["error"])
        self.detail = detail


def _names(ns: NamedSemigroup, idx) -> list[str]:
    return [ns.name(a) for a in idx]


def named_report(rep: AxiomReport, ns: NamedSemigroup, roles: dict[str, tuple[NamedSemigroup | None, ...]] | None = None) -> dict:
    """Report entries with element witnesses replaced by names.

    ``roles`` gives, per entry, the semigroup naming each witness position
    (``None`` keeps the raw integer); by default every position names an element of ``ns``.
    """
    out = {}
    for key, entry in rep.entries.items():
        wit = None
        if entry.witness is not None:
            spots = (roles or {}).get(key)
            wit = []
            for pos, v in enumerate(entry.witness):
                owner = ns if spots is None else (spots[pos] if pos < len(spots) else None)
                wit.append(owner.name(v) if owner is not None and isinstance(v, (int, np.integer)) else _plain(v))
        out[key] = {"status": entry.status, "witness": wit, "note": entry.note}
    return out


def _named_witness(ns: NamedSemigroup, w) -> list | None:
    """Element positions named, tags such as ``"not_absorbing"`` kept."""
    if w is None:
        return None
    return [ns.name(v) if isinstance(v, (int, np.integer)) and not isinstance(v, bool) else _plain(v) for v in w]


def _action_failure(ns: NamedSemigroup, exc: ActionError) -> dict:
    wit = _named_witness(ns, exc.witness) if exc.elements else _plain(exc.witness)
    return {"error": str(exc).split(" (witness")[0], "witness": wit}


def _plain(v: Any) -> Any:
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)


def _value(v) -> str:
    return "inf" if v == INF else str(Fraction(v))


def state_data(ns: NamedSemigroup, lam: ExtState) -> dict:
    return {ns.name(a): _value(lam.value(a)) for a in range(ns.semigroup.n)}


def quotient_data(ns: NamedSemigroup, q: QuotientResult) -> tuple[NamedSemigroup, dict]:
    """Quotient named by the first member of each class."""
    qns = NamedSemigroup(q.quotient, tuple(ns.name(c[0]) for c in q.classes))
    data = {
        "semigroup": semigroup_data(qns),
        "classes": {qns.name(k): _names(ns, members) for k, members in enumerate(q.classes)},
        "class_count": q.quotient.n,
    }
    return qns, data


def _expect(qns: NamedSemigroup, ref: str | None, base: Path | None = None) -> tuple[dict, bool]:
    if ref is None:
        return {}, True
    target = resolve_ref(ref, base)
    iso = find_isomorphism(qns.semigroup, target.semigroup)
    if not iso:
        return {"isomorphism": None}, False
    return {"isomorphism": {qns.name(a): target.name(b) for a, b in enumerate(iso.mapping)}}, True


def _load_semigroup(arg: str) -> tuple[NamedSemigroup, str]:
    return resolve_ref(arg, None), arg


def _load_kind(path: str, kind: str, ns: NamedSemigroup | None = None) -> Document:
    doc = load_document(Path(path))
    if doc.kind != kind:
        raise DocumentError("E_SCHEMA", f"{path} holds a {doc.kind} document, expected {kind}")
    if ns is not None and doc.on is not None and not doc.on.same_as(ns):
        raise DocumentError("E_REF", f"{path} refers to a different semigroup")
    return doc


def _action(args, ns: NamedSemigroup) -> GroupAction:
    if getattr(args, "action", None) is None:
        return trivial_action(ns.semigroup)
    doc = _load_kind(args.action, "action", ns)
    try:
        return validate_action(ns.semigroup, doc.value)
    except ActionError as exc:
        raise InvalidAction(_action_failure(ns, exc)) from None


# commands --------------------------------------------------------------------------


def cmd_validate(args) -> tuple[dict, bool]:
    path = Path(args.document)
    doc = load_document(path) if path.is_file() else Document("semigroup", {}, resolve_ref(args.document, None))
    if doc.kind == "semigroup":
        ns = doc.value
        mono = ns.semigroup.monoid.check()
        res = {"monoid": named_report(mono, ns)}
        ok = mono.ok
        if ok:
            w = check_w_axioms(ns.semigroup)
            res["w_axioms"] = named_report(w, ns)
            res["cu_axioms"] = named_report(check_cu_axioms(ns.semigroup), ns)
            ok = w.ok
        return res, ok
    if doc.kind == "morphism":
        src, dst = doc.on, doc.target
        rep = check_morphism(doc.value)
        roles = {"continuous": (src, dst)}
        return {"morphism": named_report(rep, src, roles)}, rep.ok
    if doc.kind == "action":
        try:
            g = validate_action(doc.on.semigroup, doc.value)
        except ActionError as exc:
            return {"action": _action_failure(doc.on, exc)}, False
        return {"action": {"group_order": g.order, "orbits": sorted({tuple(_names(doc.on, g.orbit(a))) for a in range(g.size)})}}, True
    if doc.kind == "pair":
        prof = classify_pair(doc.on.semigroup, doc.value)
        flags = {k: getattr(prof, k) for k in ("admissible", "prenormal", "normal", "left_closed", "auxiliary")}
        wits = {k: _named_witness(doc.on, v) for k, v in prof.witnesses.items()}
        return {"pair": {"profile": flags, "witnesses": wits}}, prof.admissible
    if doc.kind == "relation":
        return {"relation": {"pairs": len(doc.data["pairs"])}}, True
    return {"report": {"command": doc.data["command"], "status": doc.data["status"]}}, True


def cmd_gen(args) -> tuple[dict, bool]:
    ns, ref = _load_semigroup(args.semigroup)
    seed = _load_kind(args.seed, "relation", ns)
    try:
        gp = (generate_prenormal if args.prenormal else generate_normal)(ns.semigroup, seed.value)
    except PreconditionError as exc:
        return {"error": "seed relation is not left continuous", "witness": _names(ns, exc.witness or ())}, False
    pair = Pair(gp.aux, gp.order)
    prof = classify_pair(ns.semigroup, pair)
    data = {"kind": "pair", "on": ref, "aux": _pairs_data(ns, gp.aux), "order": _pairs_data(ns, gp.order)}
    flags = {k: getattr(prof, k) for k in ("admissible", "prenormal", "normal", "left_closed")}
    return {"pair": data, "profile": flags}, True


def cmd_quotient(args) -> tuple[dict, bool]:
    ns, _ = _load_semigroup(args.semigroup)
    s = ns.semigroup
    res: dict = {}
    if (args.pair is None) == (args.ideal is None):
        raise UsageError("give exactly one of --pair or --ideal")
    if args.pair is not None:
        p = _load_kind(args.pair, "pair", ns).value
    else:
        gens = [ns.index(x) for x in args.ideal.split(",") if x] if args.ideal else []
        i = closure(s, generated_ideal(s, gens))
        res["ideal"] = _names(ns, i.sorted())
        p = pair_of_ideal(s, i)
    try:
        q = quotient(s, p)
    except PreconditionError as exc:
        return {"error": str(exc).split(" (witness")[0], "witness": _named_witness(ns, exc.witness)}, False
    qns, data = quotient_data(ns, q)
    res.update(data)
    extra, ok = _expect(qns, args.expect)
    res.update(extra)
    return res, ok


def cmd_dyn_quotient(args) -> tuple[dict, bool]:
    ns, _ = _load_semigroup(args.semigroup)
    g = _action(args, ns)
    q = dyn_quotient(ns.semigroup, g)
    qns, res = quotient_data(ns, q)
    res["group_order"] = g.order
    extra, ok = _expect(qns, args.expect)
    res.update(extra)
    return res, ok


def _ideal_names(ns: NamedSemigroup, ideals: list[Ideal]) -> list[list[str]]:
    return [_names(ns, i.sorted()) for i in ideals]


def cmd_ideals(args) -> tuple[dict, bool]:
    ns, _ = _load_semigroup(args.semigroup)
    s = ns.semigroup
    if args.invariant:
        g = _action(args, ns)
        return {"invariant_closed_ideals": _ideal_names(ns, invariant_closed_ideals(s, g)), "minimal": is_minimal(s, g)}, True
    res = {
        "closed_ideals": _ideal_names(ns, enumerate_ideals(s, closed_only=True)),
        "simple": is_simple(s),
        "order_units": [ns.name(a) for a in range(s.n) if is_order_unit(s, a)],
    }
    if args.all:
        res["ideals"] = _ideal_names(ns, enumerate_ideals(s))
    return res, True


def completion_names(ns: NamedSemigroup, c) -> NamedSemigroup:
    return NamedSemigroup(c.semigroup, tuple(f"down({ns.name(u)})" for u in c.top))


def cmd_complete(args) -> tuple[dict, bool]:
    ns, _ = _load_semigroup(args.semigroup)
    c = complete(ns.semigroup)
    cns = completion_names(ns, c)
    emb = embedding_check(c)
    cu = check_cu_axioms(c.semigroup)
    res = {
        "semigroup": semigroup_data(cns),
        "round_ideals": {cns.name(k): _names(ns, d.sorted()) for k, d in enumerate(c.ideals)},
        "embedding": {ns.name(a): cns.name(c.embedding.map[a]) for a in range(ns.semigroup.n)},
        "embedding_check": named_report(emb, ns),
        "cu_axioms": named_report(cu, cns),
    }
    return res, emb.ok and cu.ok


def cmd_functionals(args) -> tuple[dict, bool]:
    ns, _ = _load_semigroup(args.semigroup)
    s = ns.semigroup
    u = ns.index(args.unit)
    g = _action(args, ns)
    if not is_order_unit(s, u):
        return {"error": "not an order-unit", "witness": [args.unit]}, False
    given = None if args.action is None else g
    res = {
        "functionals": [state_data(ns, lam) for lam in extended_functionals(s, given)],
        "normalised_vertices": [state_data(ns, lam) for lam in normalised_vertices(s, u, given)],
    }
    rep = functional_transfer_check(s, g, u)
    res["transfer"] = named_report(rep, ns)
    return res, rep.ok


def cmd_compare(args) -> tuple[dict, bool]:
    ns, _ = _load_semigroup(args.semigroup)
    s = ns.semigroup
    if args.mode == "au":
        r = almost_unperforated(s)
        wit = None if r.ok else {"a": ns.name(r.witness[0]), "b": ns.name(r.witness[1]), "k": r.witness[2]}
        return {"mode": "au", "almost_unperforated": r.ok, "witness": wit}, r.ok
    g = _action(args, ns)
    rep = dyn_strict_comparison(s, g)
    q = dyn_quotient(s, g)
    qns, _ = quotient_data(ns, q)
    cns = completion_names(qns, complete(q.quotient))
    roles = {
        "state_separation": (ns, ns),
        "au_quotient": (qns, qns, None),
        "au_completed_quotient": (cns, cns, None),
        "agreement": (None, None, None),
    }
    verdict = rep["state_separation"].ok and rep["au_quotient"].ok and rep["au_completed_quotient"].ok
    return {"mode": "dsc", "comparison": named_report(rep, ns, roles), "strict_comparison": verdict}, rep.ok and verdict


def cmd_check(args) -> tuple[dict, bool]:
    from .suites import SUITES, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    results = run_suite(args.suite)
    for r in results:
        print(f"criterion {r.criterion} {r.name}: {'PASS' if r.ok else 'FAIL'} ({r.checked} checks, {r.seconds:.1f}s)",
              file=args.err)
    return {"suites": [r.to_dict() for r in results]}, all(r.ok for r in results)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordcalc", description="Relation calculus on finite W-semigroups.")
    sub = p.add_subparsers(dest="command", required=True)

    def semigroup_arg(sp):
        sp.add_argument("semigroup", help="semigroup document path or fixture description such as NBAR(2)")

    sp = sub.add_parser("validate", help="check axioms of a document")
    sp.add_argument("document")
    sp.set_defaults(func=cmd_validate)
    sp = sub.add_parser("gen", help="generated pair of a seed relation")
    semigroup_arg(sp)
    sp.add_argument("--seed", required=True)
    sp.add_argument("--prenormal", action="store_true")
    sp.set_defaults(func=cmd_gen)
    sp = sub.add_parser("quotient", help="quotient by a pair or by a closed ideal")
    semigroup_arg(sp)
    sp.add_argument("--pair")
    sp.add_argument("--ideal", help="comma-separated generators of the closed ideal")
    sp.add_argument("--expect", help="semigroup to test the quotient against for isomorphism")
    sp.set_defaults(func=cmd_quotient)
    sp = sub.add_parser("dyn-quotient", help="dynamical quotient by a group action")
    semigroup_arg(sp)
    sp.add_argument("--action", required=True)
    sp.add_argument("--expect")
    sp.set_defaults(func=cmd_dyn_quotient)
    sp = sub.add_parser("ideals", help="closed ideals, or invariant closed ideals")
    semigroup_arg(sp)
    sp.add_argument("--all", action="store_true", help="also list ideals that are not closed")
    sp.add_argument("--invariant", action="store_true")
    sp.add_argument("--action")
    sp.set_defaults(func=cmd_ideals)
    sp = sub.add_parser("complete", help="round-ideal completion")
    semigroup_arg(sp)
    sp.set_defaults(func=cmd_complete)
    sp = sub.add_parser("functionals", help="extended functionals and their transfer")
    semigroup_arg(sp)
    sp.add_argument("--unit", required=True)
    sp.add_argument("--action")
    sp.set_defaults(func=cmd_functionals)
    sp = sub.add_parser("compare", help="almost unperforation or dynamical strict comparison")
    semigroup_arg(sp)
    sp.add_argument("--mode", choices=("au", "dsc"), required=True)
    sp.add_argument("--action")
    sp.set_defaults(func=cmd_compare)
    sp = sub.add_parser("check", help="run acceptance suites")
    sp.add_argument("--suite", default="all")
    sp.set_defaults(func=cmd_check)
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "ideals" and args.invariant and args.action is None:
        print("usage error: --invariant needs --action", file=err)
        return 2
    args.err = err
    start = time.perf_counter()
    try:
        result, ok = args.func(args)
    except DocumentError as exc:
        print(str(exc), file=err)
        return 2
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except BudgetExceeded as exc:
        print(f"E_BUDGET: {exc}; raise ORDCALC_BUDGET to continue", file=err)
        return 2
    except InvalidAction as exc:
        report = {"kind": "report", "command": args.command, "status": "fail", "result": {"action": exc.detail}}
        out.write(dumps(report))
        return 1
    report = {"kind": "report", "command": args.command, "status": "pass" if ok else "fail", "result": result}
    out.write(dumps(report))
    print(f"{args.command}: {'pass' if ok else 'fail'} in {time.perf_counter() - start:.2f}s", file=err)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
