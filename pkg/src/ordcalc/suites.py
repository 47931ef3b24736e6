"""Acceptance suites over the fixture, action and morphism corpora.

Each suite returns a ``SuiteResult`` listing every failed check with the
context it ran in.  ``run_suite("all")`` runs them in order.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .completion import complete, dyn_compat, embedding_check, idempotence_check, lattice_transfer
from .dynamics import (
    GroupAction,
    coordinate_permutation,
    dyn_ideal_compat_check,
    dyn_pair,
    dyn_quotient,
    invariant_closed_ideals,
    trivial_action,
    validate_action,
)
from .functionals import almost_unperforated, almost_unperforated_cu, dyn_strict_comparison, functional_transfer_check
from .genpair import fixpoint_oracle, generate_normal, generate_prenormal, left_continuous_repair
from .ideals import Ideal, default_pair_corpus, enumerate_ideals, galois_check, is_order_unit, pair_of_ideal
from .iso import is_isomorphism
from .pairs import Pair, classify_pair, minimal_pair, pair_leq, pair_leq_prenormal
from .quotients import NoFactorization, factor_through, kernel, quotient
from .relcore import Relation
from .wstruct import (
    AxiomReport,
    WMorphism,
    WSemigroup,
    _poset_closure,
    check_cu_axioms,
    check_morphism,
    fixture,
    identity_morphism,
    make_fixture,
    w2_counterexample,
)


@dataclass
class SuiteResult:
    name: str
    criterion: int
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def check(self, context: str, name: str, ok: bool, witness=None) -> None:
        self.checked += 1
        if not ok:
            self.failures.append({"context": context, "check": name, "witness": _plain(witness)})

    def absorb(self, context: str, rep: AxiomReport) -> None:
        for name, entry in rep.entries.items():
            if entry.status == "skip":
                self.notes.append(f"{context}: {name} skipped ({entry.note})")
                continue
            if entry.status in ("yes", "no"):
                continue
            self.check(context, name, entry.ok, entry.witness)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "criterion": self.criterion,
            "status": "pass" if self.ok else "fail",
            "checked": self.checked,
            "failures": self.failures,
            "notes": self.notes,
        }


def _plain(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    return str(x)


# corpora --------------------------------------------------------------------------


def small_posets(max_points: int = 4) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """Posets on 1..max_points points up to isomorphism, as naturally labelled cover lists."""
    out = []
    for n in range(1, max_points + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        seen = set()
        for mask in range(1 << len(pairs)):
            rels = [p for k, p in enumerate(pairs) if mask >> k & 1]
            le = _poset_closure(n, rels)
            if sum(map(int, le.ravel())) - n != len(rels):
                continue  # keep transitively closed relation sets only
            canon = min(
                tuple(tuple(bool(le[p[i], p[j]]) for j in range(n)) for i in range(n))
                for p in itertools.permutations(range(n))
            )
            if canon in seen:
                continue
            seen.add(canon)
            out.append((n, tuple(rels)))
    return out


def lat_spec(n: int, rels) -> str:
    return f"LAT({n};" + ",".join(f"{i}<{j}" for i, j in rels) + ")" if rels else f"LAT({n})"


ORACLE_PRODUCTS = (
    "PROD(NBAR(1),NBAR(1))",
    "PROD(NBAR(1),NBAR(2))",
    "PROD(NBAR(2),NBAR(2))",
    "PROD(NBAR(1),NINF(1))",
    "PROD(NINF(1),NINF(1))",
    "PROD(NBAR(1),NBAR(1),NBAR(1))",
    "PROD(GHOST(1),NBAR(1))",
    "PROD(LAT(2),NBAR(1))",
)


def oracle_fixtures() -> list[str]:
    base = ["NBAR(1)", "NBAR(2)", "NBAR(3)", "NINF(1)", "NINF(2)", "GHOST(1)", "GHOST(2)"]
    return base + [lat_spec(n, r) for n, r in small_posets(4)] + list(ORACLE_PRODUCTS)


CORE_FIXTURES = (
    "NBAR(1)",
    "NBAR(2)",
    "NBAR(3)",
    "NINF(1)",
    "NINF(2)",
    "GHOST(1)",
    "GHOST(2)",
    "LAT(2)",
    "LAT(3)",
    "LAT(3;0<1,0<2)",
    "LAT(3;0<2,1<2)",
    "LAT(3;0<1,1<2)",
    "PROD(NBAR(1),NBAR(1))",
    "PROD(NBAR(2),NBAR(2))",
    "PROD(NBAR(1),NINF(1))",
    "PROD(GHOST(1),NBAR(1))",
    "PROD(LAT(2),NBAR(1))",
)


def automorphisms(s: WSemigroup, max_size: int = 8) -> list[tuple[int, ...]]:
    """All non-identity automorphisms of a small semigroup, by exhaustive search."""
    if s.n > max_size:
        raise ValueError(f"automorphism search is limited to {max_size} elements")
    rest = [a for a in range(s.n) if a != s.zero]
    out = []
    for perm in itertools.permutations(rest):
        f = np.arange(s.n)
        f[rest] = perm
        if np.array_equal(f, np.arange(s.n)):
            continue
        if is_isomorphism(s, s, f):
            out.append(tuple(int(v) for v in f))
    return out


@dataclass(frozen=True)
class ActionCase:
    kind: str
    action: str  # trivial | swap | cyclic | sym | outer | auto
    factors: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return f"{self.kind}/{self.action}"

    def build(self) -> tuple[WSemigroup, GroupAction]:
        s = make_fixture(self.kind)
        if self.action == "trivial":
            return s, trivial_action(s)
        if self.action == "auto":
            return s, validate_action(s, automorphisms(s))
        sizes = [make_fixture(f).n for f in self.factors]
        k = len(sizes)
        perms = {
            "swap": [[1, 0]],
            "outer": [[k - 1] + list(range(1, k - 1)) + [0]],
            "cyclic": [[(i + 1) % k for i in range(k)]],
            "sym": [[(i + 1) % k for i in range(k)], [1, 0] + list(range(2, k))],
        }[self.action]
        return s, validate_action(s, [coordinate_permutation(sizes, p) for p in perms])


def _prod_case(factors: tuple[str, ...], action: str) -> ActionCase:
    return ActionCase("PROD(" + ",".join(factors) + ")", action, factors)


ACTION_CORPUS = (
    ActionCase("NBAR(2)", "trivial"),
    ActionCase("NINF(2)", "trivial"),
    ActionCase("GHOST(2)", "trivial"),
    ActionCase("LAT(2)", "auto"),
    ActionCase("LAT(3)", "auto"),
    ActionCase("LAT(3;0<1,0<2)", "auto"),
    _prod_case(("NBAR(1)", "NBAR(1)"), "swap"),
    _prod_case(("NBAR(2)", "NBAR(2)"), "swap"),
    _prod_case(("NBAR(3)", "NBAR(3)"), "swap"),
    _prod_case(("NBAR(1)", "NBAR(1)", "NBAR(1)"), "cyclic"),
    _prod_case(("NBAR(1)", "NBAR(1)", "NBAR(1)"), "sym"),
    _prod_case(("NINF(1)", "NINF(1)"), "swap"),
    _prod_case(("GHOST(1)", "GHOST(1)"), "swap"),
    _prod_case(("LAT(2)", "LAT(2)"), "swap"),
    _prod_case(("NBAR(2)", "NBAR(1)", "NBAR(2)"), "outer"),
)


def _table_morphism(src: str, dst: str, fn: Callable[[tuple], int]) -> WMorphism:
    """Morphism given on labels of the source fixture, returning target indices."""
    fs, ft = fixture(src), fixture(dst)
    return WMorphism(fs.semigroup, ft.semigroup, np.array([fn(fs.labels[a]) for a in range(fs.semigroup.n)], dtype=np.intp))


def _nbar_value(label: str) -> int:
    return int(label)


def morphism_corpus() -> list[tuple[str, WMorphism]]:
    """Named morphisms; every entry is validated before it is returned."""
    out: list[tuple[str, WMorphism]] = []
    for kind in ("NBAR(1)", "NBAR(2)", "NINF(1)", "GHOST(1)", "LAT(2)", "PROD(NBAR(1),NBAR(1))"):
        out.append((f"id {kind}", identity_morphism(make_fixture(kind))))
    for k in (1, 2, 3):
        tuples = list(itertools.product(range(k + 1), repeat=2))
        s = make_fixture(f"PROD(NBAR({k}),NBAR({k}))")
        t = make_fixture(f"NBAR({k})")
        out.append((f"add NBAR({k})^2", WMorphism(s, t, np.array([min(x + y, k) for x, y in tuples]))))
    for k, j in ((2, 1), (3, 2), (3, 1)):
        s, t = make_fixture(f"NBAR({k})"), make_fixture(f"NBAR({j})")
        out.append((f"truncate NBAR({k})->NBAR({j})", WMorphism(s, t, np.minimum(np.arange(k + 1), j))))
    s, t = make_fixture("PROD(NBAR(2),NBAR(1))"), make_fixture("NBAR(2)")
    tuples = list(itertools.product(range(3), range(2)))
    out.append(("project PROD(NBAR(2),NBAR(1)) first", WMorphism(s, t, np.array([x for x, _ in tuples]))))
    out.append(("project PROD(NBAR(2),NBAR(1)) second",
                WMorphism(s, make_fixture("NBAR(1)"), np.array([y for _, y in tuples]))))
    s, t = make_fixture("NBAR(2)"), make_fixture("PROD(NBAR(2),NBAR(2))")
    out.append(("diagonal NBAR(2)", WMorphism(s, t, np.array([3 * x + x for x in range(3)]))))
    for kind in ("NBAR(2)", "LAT(2)", "NINF(1)"):
        s = make_fixture(kind)
        out.append((f"zero {kind}->NBAR(1)", WMorphism(s, make_fixture("NBAR(1)"), np.zeros(s.n, dtype=np.intp))))
    out.append(("collapse NINF(1)->NBAR(1)", _table_morphism("NINF(1)", "NBAR(1)", lambda lab: 0 if lab == "0" else 1)))
    out.append(("collapse NINF(2)->NINF(1)",
                _table_morphism("NINF(2)", "NINF(1)", lambda lab: int(lab) if lab in ("0", "1") else 2)))
    for case in (ACTION_CORPUS[7], ACTION_CORPUS[6]):
        s, g = case.build()
        out.append((f"dyn projection {case.label}", dyn_quotient(s, g).projection))
    s = make_fixture("LAT(2)")
    for i in enumerate_ideals(s, closed_only=True):
        out.append((f"ideal projection LAT(2) by {i.sorted()}", quotient(s, pair_of_ideal(s, i)).projection))
    for kind in ("NBAR(2)", "GHOST(1)", "LAT(2)"):
        out.append((f"completion embedding {kind}", complete(make_fixture(kind)).embedding))
    for name, f in out:
        rep = check_morphism(f)
        if not rep.ok:
            raise AssertionError(f"corpus morphism {name} is not a W-morphism: {rep.failures()}")
    return out


def random_seed(s: WSemigroup, rng: np.random.Generator, density: float | None = None) -> Relation:
    d = float(rng.choice([0.03, 0.08, 0.15, 0.3])) if density is None else density
    return left_continuous_repair(s, Relation(rng.random((s.n, s.n)) < d))


# criterion 1 -----------------------------------------------------------------------


def suite_oracle(random_seeds: int = 200, seed: int = 1) -> SuiteResult:
    res = SuiteResult("oracle", 1)
    rng = np.random.default_rng(seed)
    kinds = oracle_fixtures()
    semis = {k: make_fixture(k) for k in kinds}

    def one(kind: str, r: Relation, tag: str) -> None:
        s = semis[kind]
        pre = generate_prenormal(s, r).order
        res.check(f"{kind} {tag}", "prenormal_matches_oracle", pre == fixpoint_oracle(s, r, additive=False),
                  pre.first_outside(fixpoint_oracle(s, r, additive=False)))
        nor = generate_normal(s, r).order
        orc = fixpoint_oracle(s, r, additive=True)
        res.check(f"{kind} {tag}", "normal_matches_oracle", nor == orc, nor.first_outside(orc) or orc.first_outside(nor))

    for kind in kinds:
        one(kind, Relation.empty(semis[kind].n), "empty seed")
    for t in range(random_seeds):
        kind = kinds[t % len(kinds)]
        one(kind, random_seed(semis[kind], rng), f"random seed {t}")
    res.notes.append(f"{len(kinds)} fixtures, {random_seeds} random seeds")
    return res


# criterion 2 -----------------------------------------------------------------------

MINIMALITY_FIXTURES = ("NBAR(2)", "NINF(1)", "GHOST(1)", "LAT(2)", "LAT(3;0<1,0<2)", "PROD(NBAR(1),NBAR(1))",
                       "PROD(NBAR(2),NBAR(2))")


def suite_minimality(enlarged: int = 100, seed: int = 2) -> SuiteResult:
    res = SuiteResult("minimality", 2)
    rng = np.random.default_rng(seed)
    for kind in MINIMALITY_FIXTURES:
        s = make_fixture(kind)
        r = random_seed(s, rng, 0.1)
        base = generate_normal(s, r)
        prof = classify_pair(s, base)
        for name in ("normal", "left_closed", "admissible"):
            res.check(kind, f"seed_pair_{name}", getattr(prof, name), prof.witnesses.get(name))
        res.check(kind, "W2", w2_counterexample(base.extended, base.order) is None,
                  w2_counterexample(base.extended, base.order))
        res.check(kind, "order_contains_seed", r <= base.order, r.first_outside(base.order))
        pre = generate_prenormal(s, r)
        pprof = classify_pair(s, pre)
        res.check(kind, "prenormal_seed_pair_prenormal", pprof.prenormal and pprof.left_closed and pprof.admissible)
        for t in range(enlarged):
            extra = random_seed(s, rng)
            big = generate_normal(s, r | extra)
            res.check(f"{kind} enlargement {t}", "normal_minimal", pair_leq(s, base, big))
            big_pre = generate_prenormal(s, r | extra)
            res.check(f"{kind} enlargement {t}", "prenormal_minimal",
                      pair_leq(s, pre, big_pre) and pair_leq_prenormal(pre, big_pre))
    return res


# criterion 3 -----------------------------------------------------------------------


def _pair_corpus(s: WSemigroup, f: WMorphism) -> list[tuple[str, Pair]]:
    cands = [("minimal", minimal_pair(s)), ("kernel", kernel(f))]
    cands += [(f"generated {k}", p) for k, p in enumerate(default_pair_corpus(s, count=6))]
    if s.n <= 20:
        cands += [(f"ideal {i.sorted()}", pair_of_ideal(s, i)) for i in enumerate_ideals(s, closed_only=True)]
    out = []
    for name, p in cands:
        prof = classify_pair(s, p)
        if prof.normal and prof.left_closed and prof.admissible:
            out.append((name, p))
    return out


def suite_fundamental() -> SuiteResult:
    res = SuiteResult("fundamental", 3)
    corpus = morphism_corpus()
    res.notes.append(f"{len(corpus)} validated morphisms")
    res.check("corpus", "at_least_20_morphisms", len(corpus) >= 20, (len(corpus),))
    for name, f in corpus:
        ker = kernel(f)
        prof = classify_pair(f.source, ker)
        res.check(name, "kernel_normal_closed_admissible", prof.normal and prof.left_closed and prof.admissible)
        for pname, p in _pair_corpus(f.source, f):
            ctx = f"{name} / {pname}"
            below = pair_leq(f.source, p, ker)
            try:
                fac = factor_through(f, p)
            except NoFactorization:
                fac = None
            res.check(ctx, "factors_iff_below_kernel", (fac is not None) == below, (int(fac is not None), int(below)))
            if fac is not None:
                res.check(ctx, "embedding_iff_kernel", fac.order_embedding == (p == ker),
                          (int(fac.order_embedding), int(p == ker)))
    return res


# criterion 4 -----------------------------------------------------------------------


def flagship_case(k: int) -> tuple[WSemigroup, GroupAction]:
    s = make_fixture(f"PROD(NBAR({k}),NBAR({k}))")
    return s, validate_action(s, [coordinate_permutation([k + 1, k + 1], [1, 0])])


def suite_flagship(ks=(1, 2, 3, 4)) -> SuiteResult:
    res = SuiteResult("flagship", 4)
    for k in ks:
        ctx = f"NBAR({k})^2/swap"
        s, g = flagship_case(k)
        q = dyn_quotient(s, g)
        target = make_fixture(f"NBAR({k})")
        tuples = list(itertools.product(range(k + 1), repeat=2))
        total = np.array([min(x + y, k) for x, y in tuples], dtype=np.intp)
        res.check(ctx, "class_count", q.quotient.n == k + 1, (q.quotient.n,))
        same = all((q.class_of[a] == q.class_of[b]) == (total[a] == total[b]) for a in range(s.n) for b in range(s.n))
        res.check(ctx, "classes_are_truncated_sums", same)
        phi = np.full(q.quotient.n, -1, dtype=np.intp)
        for a in range(s.n):
            phi[q.class_of[a]] = total[a]
        res.check(ctx, "explicit_isomorphism", same and is_isomorphism(q.quotient, target, phi), tuple(phi.tolist()))
        add = WMorphism(s, target, total)
        try:
            fac = factor_through(add, dyn_pair(s, g))
            res.check(ctx, "addition_factors_as_embedding", fac.order_embedding)
        except NoFactorization as exc:
            res.check(ctx, "addition_factors_as_embedding", False, exc.witness)
    return res


# criterion 5 -----------------------------------------------------------------------


def ideal_classes_bruteforce(s: WSemigroup, i: Ideal) -> np.ndarray:
    """Classes of ``a ~ b``: each side's approximants sit below the other plus an ideal element."""
    P = s.prec.bits
    ys = i.sorted()

    def below(a: int, b: int) -> bool:
        return all(any(P[x, s.add[b, y]] for y in ys) for x in range(s.n) if P[x, a])

    cls = np.full(s.n, -1, dtype=np.intp)
    count = 0
    for a in range(s.n):
        if cls[a] != -1:
            continue
        for b in range(s.n):
            if cls[b] == -1 and below(a, b) and below(b, a):
                cls[b] = count
        count += 1
    return cls


def suite_galois(max_size: int = 12) -> SuiteResult:
    res = SuiteResult("galois", 5)
    kinds = [k for k in CORE_FIXTURES if make_fixture(k).n <= max_size]
    kinds += [lat_spec(n, r) for n, r in small_posets(3)]
    for kind in dict.fromkeys(kinds):
        s = make_fixture(kind)
        res.absorb(kind, galois_check(s))
        for i in enumerate_ideals(s, closed_only=True):
            q = quotient(s, pair_of_ideal(s, i))
            brute = ideal_classes_bruteforce(s, i)
            same = all((q.class_of[a] == q.class_of[b]) == (brute[a] == brute[b]) for a in range(s.n) for b in range(s.n))
            res.check(f"{kind} ideal {i.sorted()}", "quotient_by_ideal_classes", same)
    return res


# criterion 6 -----------------------------------------------------------------------


def suite_dyn_ideals(cases=ACTION_CORPUS) -> SuiteResult:
    res = SuiteResult("dyn_ideals", 6)
    res.check("corpus", "at_least_12_combinations", len(cases) >= 12, (len(cases),))
    for case in cases:
        s, g = case.build()
        for i in invariant_closed_ideals(s, g):
            res.absorb(f"{case.label} ideal {i.sorted()}", dyn_ideal_compat_check(s, g, i))
    return res


# criterion 7 -----------------------------------------------------------------------


def _simple_cycles(adj: np.ndarray) -> list[tuple[int, ...]]:
    """Simple cycles of a small digraph, each rooted at its least vertex."""
    n = adj.shape[0]
    out = []

    def walk(root: int, path: list[int], on: set[int]) -> None:
        for v in np.flatnonzero(adj[path[-1]]):
            v = int(v)
            if v == root:
                out.append(tuple(path))
            elif v > root and v not in on:
                on.add(v)
                path.append(v)
                walk(root, path, on)
                path.pop()
                on.discard(v)

    for r in range(n):
        walk(r, [r], {r})
    return out


def lasso_sequences(s: WSemigroup) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every ``prec``-increasing eventually periodic sequence, as (simple prefix, simple cycle)."""
    P = s.prec.bits
    out = []
    for cyc in _simple_cycles(P):
        stack = [()]
        while stack:
            pre = stack.pop()
            out.append((pre, cyc))
            head = pre[0] if pre else cyc[0]
            for v in np.flatnonzero(P[:, head]):
                v = int(v)
                if v not in pre and v not in cyc:
                    stack.append((v,) + pre)
    return out


def sequence_encoding_check(s: WSemigroup) -> AxiomReport:
    """Classes of increasing sequences under mutual domination match the round ideals."""
    P = s.prec.bits
    seqs = lasso_sequences(s)
    terms = [set(pre) | set(cyc) for pre, cyc in seqs]
    dom = np.array([[all(any(P[x, y] for y in tb) for x in ta) for tb in terms] for ta in terms], dtype=bool)
    unions = [frozenset(int(x) for t in ts for x in np.flatnonzero(P[:, t])) for ts in terms]
    c = complete(s)
    ideals = [d.members for d in c.ideals]
    rep = AxiomReport()
    rep.record("union_is_round_ideal", all(u in ideals for u in unions))
    same_class = dom & dom.T
    inj = all(same_class[i, j] == (unions[i] == unions[j]) for i in range(len(seqs)) for j in range(len(seqs)))
    rep.record("classes_injective", inj)
    rep.record("surjective", set(ideals) <= set(unions))
    order = all(dom[i, j] == (unions[i] <= unions[j]) for i in range(len(seqs)) for j in range(len(seqs)))
    rep.record("order_matches_inclusion", order)
    return rep


def suite_completion(cases=ACTION_CORPUS, sequence_limit: int = 7) -> SuiteResult:
    res = SuiteResult("completion", 7)
    for kind in CORE_FIXTURES:
        s = make_fixture(kind)
        c = complete(s)
        res.absorb(f"{kind} completion", check_cu_axioms(c.semigroup))
        res.absorb(f"{kind} embedding", embedding_check(c))
        res.absorb(f"{kind} idempotence", idempotence_check(s))
        res.absorb(f"{kind} lattice", lattice_transfer(s))
    for case in cases:
        s, g = case.build()
        rep = lattice_transfer(s, g)
        res.check(case.label, "invariant_restriction", rep["invariant_restriction"].ok)
        res.absorb(f"{case.label} dyn", dyn_compat(s, g))
    seq_kinds = [k for k in CORE_FIXTURES if make_fixture(k).n <= sequence_limit]
    seq_kinds += [lat_spec(n, r) for n, r in small_posets(3) if make_fixture(lat_spec(n, r)).n <= sequence_limit]
    for kind in dict.fromkeys(seq_kinds):
        res.absorb(f"{kind} sequences", sequence_encoding_check(make_fixture(kind)))
    return res


# criterion 8 -----------------------------------------------------------------------


def suite_comparison(cases=ACTION_CORPUS) -> SuiteResult:
    res = SuiteResult("comparison", 8)
    for case in cases:
        s, g = case.build()
        rep = dyn_strict_comparison(s, g)
        res.check(case.label, "agreement", rep["agreement"].ok, rep["agreement"].witness)
        if case.label == "PROD(NBAR(2),NBAR(2))/swap":
            verdicts = [rep[n].status for n in ("state_separation", "au_quotient", "au_completed_quotient")]
            res.check(case.label, "designed_negative", verdicts == ["fail"] * 3, verdicts)
            q = dyn_quotient(s, g)
            total = {int(q.class_of[a]): x + y for a, (x, y) in enumerate(itertools.product(range(3), repeat=2))}
            wit = rep["au_quotient"].witness
            named = None if wit is None else (min(total[wit[0]], 2), min(total[wit[1]], 2), wit[2])
            res.check(case.label, "negative_witness", named == (2, 1, 2), named)
        if case.kind.startswith("LAT") or case.label == "PROD(LAT(2),LAT(2))/swap":
            res.check(case.label, "lattice_positive", rep.ok, tuple(rep.failures()))
    for kind in CORE_FIXTURES:
        s = make_fixture(kind)
        a, b = almost_unperforated(s), almost_unperforated_cu(complete(s).semigroup)
        res.check(kind, "au_matches_completion", a.ok == b.ok, (int(a.ok), int(b.ok)))
    return res


# criterion 9 -----------------------------------------------------------------------


def _order_unit(s: WSemigroup) -> int | None:
    return next((a for a in range(s.n) if is_order_unit(s, a)), None)


def suite_functionals(cases=ACTION_CORPUS) -> SuiteResult:
    res = SuiteResult("functionals", 9)
    runs = [(kind, make_fixture(kind), None) for kind in CORE_FIXTURES] + [(c.label, *c.build()) for c in cases]
    for label, s, g in runs:
        u = _order_unit(s)
        if u is None:
            res.notes.append(f"{label}: no order-unit")
            continue
        rep = functional_transfer_check(s, g if g is not None else trivial_action(s), u)
        for name in ("normalised_completion", "normalised_quotient"):
            if rep[name].note and label == runs[0][0]:
                res.notes.append(f"{label}: {name} {rep[name].note}")
        res.absorb(label, rep)
    return res


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "oracle": suite_oracle,
    "minimality": suite_minimality,
    "fundamental": suite_fundamental,
    "flagship": suite_flagship,
    "galois": suite_galois,
    "dyn-ideals": suite_dyn_ideals,
    "completion": suite_completion,
    "comparison": suite_comparison,
    "functionals": suite_functionals,
}


def run_suite(name: str) -> list[SuiteResult]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}; choose from {', '.join(SUITES)} or all")
        start = time.perf_counter()
        r = SUITES[n]()
        r.seconds = time.perf_counter() - start
        out.append(r)
    return out
