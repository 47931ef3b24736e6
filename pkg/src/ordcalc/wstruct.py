"""Finite W-semigroups: construction, axiom checks, fixtures and morphisms."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .relcore import Relation, compose, induced_preorder, is_additive, relation_sum

if TYPE_CHECKING:
    from numpy.typing import NDArray


# monoids ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    """Commutative monoid on ``{0, ..., n-1}`` given by its addition table."""

    add: NDArray[np.intp]
    zero: int

    def __post_init__(self) -> None:
        table = np.array(self.add, dtype=np.intp, copy=True)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError(f"addition table must be square, got shape {table.shape}")
        n = table.shape[0]
        if n == 0:
            raise ValueError("carrier must be nonempty")
        if table.min() < 0 or table.max() >= n:
            raise ValueError("addition table entries out of range")
        if not 0 <= self.zero < n:
            raise ValueError(f"zero index {self.zero} out of range")
        table.setflags(write=False)
        object.__setattr__(self, "add", table)

    @property
    def n(self) -> int:
        return int(self.add.shape[0])

    def check(self) -> AxiomReport:
        """Exhaustive commutativity, associativity and neutrality of zero."""
        rep = AxiomReport()
        t = self.add
        bad = np.argwhere(t != t.T)
        rep.record("commutative", bad.size == 0, _first(bad))
        lhs = t[t[:, :, None], np.arange(self.n)[None, None, :]]  # (a+b)+c
        rhs = t[np.arange(self.n)[:, None, None], t[None, :, :]]  # a+(b+c)
        bad = np.argwhere(lhs != rhs)
        rep.record("associative", bad.size == 0, _first(bad))
        bad = np.flatnonzero(t[self.zero] != np.arange(self.n))
        rep.record("zero_neutral", bad.size == 0, None if bad.size == 0 else (int(bad[0]),))
        return rep

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteMonoid):
            return NotImplemented
        return self.zero == other.zero and np.array_equal(self.add, other.add)

    def __hash__(self) -> int:
        return hash((self.zero, self.add.tobytes()))


def _first(arr: NDArray) -> tuple[int, ...] | None:
    if arr.size == 0:
        return None
    return tuple(int(v) for v in arr[0])


# reports ---------------------------------------------------------------------


@dataclass
class AxiomCheck:
    status: str  # "pass", "fail", "skip", or "yes"/"no" for informational facts
    witness: tuple | None = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass
class AxiomReport:
    """Named pass/fail entries; failing entries carry a counterexample."""

    entries: dict[str, AxiomCheck] = field(default_factory=dict)

    def record(self, name: str, ok: bool, witness: tuple | None = None, note: str = "") -> None:
        self.entries[name] = AxiomCheck("pass" if ok else "fail", None if ok else witness, note)

    def skip(self, name: str, note: str) -> None:
        self.entries[name] = AxiomCheck("skip", None, note)

    def info(self, name: str, value: bool, note: str = "informational") -> None:
        """Record a fact that never makes the report fail."""
        self.entries[name] = AxiomCheck("yes" if value else "no", None, note)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries.values())

    def __bool__(self) -> bool:
        return self.ok

    def __getitem__(self, name: str) -> AxiomCheck:
        return self.entries[name]

    def failures(self) -> dict[str, AxiomCheck]:
        return {k: v for k, v in self.entries.items() if v.status == "fail"}

    def to_dict(self) -> dict:
        return {
            k: {"status": v.status, "witness": None if v.witness is None else list(v.witness), "note": v.note}
            for k, v in self.entries.items()
        }


# W-semigroups ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WSemigroup:
    """A finite commutative monoid together with a transitive relation ``prec``."""

    monoid: FiniteMonoid
    prec: Relation

    def __post_init__(self) -> None:
        if self.prec.size != self.monoid.n:
            raise ValueError(f"relation of size {self.prec.size} on monoid of size {self.monoid.n}")

    @classmethod
    def build(cls, add, zero: int, prec) -> WSemigroup:
        rel = prec if isinstance(prec, Relation) else Relation(np.asarray(prec, dtype=bool))
        return cls(FiniteMonoid(np.asarray(add), zero), rel)

    @property
    def n(self) -> int:
        return self.monoid.n

    @property
    def zero(self) -> int:
        return self.monoid.zero

    @property
    def add(self) -> NDArray[np.intp]:
        return self.monoid.add

    def plus(self, *xs: int) -> int:
        acc = self.zero
        for x in xs:
            acc = int(self.add[acc, x])
        return acc

    def times(self, k: int, a: int) -> int:
        acc = self.zero
        for _ in range(k):
            acc = int(self.add[acc, a])
        return acc

    def with_prec(self, prec: Relation) -> WSemigroup:
        return WSemigroup(self.monoid, prec)

    @cached_property
    def le(self) -> Relation:
        """The order induced by ``prec`` (down-set inclusion)."""
        return induced_preorder(self.prec)

    @cached_property
    def cofinal(self) -> NDArray[np.intp]:
        """For each ``a`` the least ``c`` with ``c prec a``, ``c prec c`` and ``a``'s down-set inside ``c``'s.

        Entries are ``-1`` where no such element exists (W1 fails there).
        """
        P = self.prec.bits
        out = np.full(self.n, -1, dtype=np.intp)
        for a in range(self.n):
            below = P[:, a]
            for c in np.flatnonzero(below & np.diag(P)):
                if not np.any(below & ~P[:, c]):
                    out[a] = c
                    break
        return out

    def multiples(self, a: int) -> list[int]:
        """Distinct values of ``k a`` for ``k >= 1``, in order of first appearance."""
        seen: list[int] = []
        x = a
        while x not in seen:
            seen.append(x)
            x = int(self.add[x, a])
        return seen

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WSemigroup):
            return NotImplemented
        return self.monoid == other.monoid and self.prec == other.prec

    def __hash__(self) -> int:
        return hash((self.monoid, self.prec))


def w2_counterexample(aux: Relation, leq: Relation) -> tuple[int, int] | None:
    """First ``(a, c)`` where every ``b aux a`` has ``b <= c`` yet ``a <= c`` fails."""
    A = aux.bits.astype(np.float32)
    bad_below = A.T @ (1.0 - leq.bits.astype(np.float32))  # count of b aux a with not b <= c
    cand = np.argwhere((bad_below < 0.5) & ~leq.bits)
    return _first(cand)


def check_w_axioms(s: WSemigroup, pair_order: Relation | None = None) -> AxiomReport:
    """Exhaustive W-axiom checks; W2 is reported only when ``pair_order`` is given."""
    rep = AxiomReport()
    P = s.prec
    rep.record("transitive", P.is_transitive(), compose(P, P).first_outside(P))
    zb = np.flatnonzero(~P.bits[s.zero, :])
    rep.record("zero_below_all", zb.size == 0, None if zb.size == 0 else (int(zb[0]),))
    w1 = np.flatnonzero(s.cofinal < 0)
    rep.record("W1", w1.size == 0, None if w1.size == 0 else (int(w1[0]),))
    if pair_order is None:
        rep.skip("W2", "no order supplied")
    else:
        rep.record("W2", w2_counterexample(P, pair_order) is None, w2_counterexample(P, pair_order))
    rep.record("W3", is_additive(P, s), relation_sum(P, P, s).first_outside(P))
    rep.record("W4", (wit := w4_counterexample(s)) is None, wit)
    return rep


def w4_counterexample(s: WSemigroup) -> tuple[int, int, int] | None:
    """First ``(a, b, c)`` with ``a prec b + c`` admitting no split below ``b`` and ``c``."""
    P = s.prec.bits
    for b in range(s.n):
        db = np.flatnonzero(P[:, b])
        for c in range(s.n):
            dc = np.flatnonzero(P[:, c])
            target = P[:, s.add[b, c]]
            if db.size and dc.size:
                sums = np.unique(s.add[np.ix_(db, dc)])
                covered = P[:, sums].any(axis=1)
            else:
                covered = np.zeros(s.n, dtype=bool)
            miss = np.flatnonzero(target & ~covered)
            if miss.size:
                return int(miss[0]), b, c
    return None


def almost_refinement_counterexample(s: WSemigroup) -> tuple[int, int, int, int] | None:
    """First ``(a1', a2', b1, b2)`` violating almost refinement, else ``None``.

    For fixed primed elements the four unknowns ``x_ij`` are eliminated two at
    a time by boolean matrix products.
    """
    n, add = s.n, s.add
    P = s.prec.bits
    Pf = P.astype(np.float32)
    # B[b][x, y]: x + y prec b
    B = np.stack([P[add, b] for b in range(n)])
    # row[a'][x, y]: a' prec x + y
    row = np.stack([P[a, add] for a in range(n)])
    Bf, rowf = B.astype(np.float32), row.astype(np.float32)
    # M[a1', b2][x11, x22] = exists x12 with a1' prec x11 + x12 and x12 + x22 prec b2
    M = (np.einsum("aik,bkj->abij", rowf, Bf) > 0.5)
    # N[a2', b1][x11, x22] = exists x21 with x11 + x21 prec b1 and a2' prec x21 + x22
    N = (np.einsum("bik,akj->abij", Bf, rowf) > 0.5)
    Mf = M.reshape(n, n, n * n).astype(np.float32)
    Nf = N.reshape(n, n, n * n).astype(np.float32)
    for b1 in range(n):
        for b2 in range(n):
            A = P[add, add[b1, b2]].astype(np.float32)  # a1 + a2 prec b1 + b2
            ante = (Pf @ A @ Pf.T) > 0.5
            if not ante.any():
                continue
            # K[a1', a2']: some (x11, x22) serves both halves
            K = (Mf[:, b2] @ Nf[:, b1].T) > 0.5
            bad = np.argwhere(ante & ~K)
            if bad.size:
                return int(bad[0][0]), int(bad[0][1]), b1, b2
    return None


def has_almost_refinement(s: WSemigroup) -> bool:
    return almost_refinement_counterexample(s) is None


# Cu-type checks on finite posets ---------------------------------------------


def compact_containment(leq: Relation) -> Relation:
    """Way-below relation of a finite preorder.

    An increasing sequence in a finite carrier is eventually constant, so its
    supremum is its eventual term.  Hence ``a << b`` iff ``a <= c`` for every
    ``c`` above ``b``.
    """
    return Relation(_way_below_bits(leq.bits))


def _way_below_bits(L: NDArray[np.bool_]) -> NDArray[np.bool_]:
    n = L.shape[0]
    out = np.zeros((n, n), dtype=bool)
    for b in range(n):
        above = np.flatnonzero(L[b, :])
        out[:, b] = L[:, above].all(axis=1)
    return out


def check_cu_axioms(s: WSemigroup, exhaustive_limit: int = 12) -> AxiomReport:
    """O1-O4 on the finite carrier, with ``<=`` induced by ``prec``."""
    rep = AxiomReport()
    le = s.le
    L = le.bits
    add = s.add
    anti = le.is_antisymmetric()
    pos = bool(np.all(L[s.zero, :]))
    mono_bad = None
    for a, b in le.pairs():
        cols = np.flatnonzero(~L[add[a, :], add[b, :]])
        if cols.size:
            mono_bad = (a, b, int(cols[0]))
            break
    rep.record("partial_order", anti, _first(np.argwhere(L & L.T & ~np.eye(s.n, dtype=bool))))
    rep.record("zero_least", pos, None if pos else (int(np.flatnonzero(~L[s.zero])[0]),))
    rep.record("addition_monotone", mono_bad is None, mono_bad)
    ll = compact_containment(le)
    # O1: nonempty directed subsets have a least upper bound
    if s.n <= exhaustive_limit:
        wit = None
        for mask in range(1, 1 << s.n):
            D = [i for i in range(s.n) if mask >> i & 1]
            Dm = np.array(D)
            if not all(np.any(L[x, Dm] & L[y, Dm]) for x, y in itertools.combinations(D, 2)):
                continue
            ubs = np.flatnonzero(L[Dm, :].all(axis=0))
            least = [u for u in ubs if L[u, ubs].all()]
            if not least:
                wit = tuple(D)
                break
        rep.record("O1", wit is None, wit)
    else:
        rep.record("O1", True, note="directed finite subsets contain their greatest element")
    # O2: every a is the supremum of a <<-increasing sequence; on a finite
    # carrier such a sequence stabilises at some c with c << c and c equivalent to a
    equiv = L & L.T
    o2 = [a for a in range(s.n) if not np.any(equiv[a] & np.diag(ll.bits))]
    rep.record("O2", not o2, (o2[0],) if o2 else None)
    o3 = relation_sum(ll, ll, s).first_outside(ll)
    rep.record("O3", o3 is None, o3)
    # O4: suprema of sums of increasing sequences; the eventual terms add, so
    # addition must respect the equivalence generated by <=
    o4 = None
    for a, a2 in zip(*np.nonzero(equiv)):
        for b, b2 in zip(*np.nonzero(equiv)):
            x, y = add[a, b], add[a2, b2]
            if not (L[x, y] and L[y, x]):
                o4 = (int(a), int(a2), int(b), int(b2))
                break
        if o4:
            break
    rep.record("O4", o4 is None, o4)
    return rep


# morphisms -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WMorphism:
    source: WSemigroup
    target: WSemigroup
    map: NDArray[np.intp]

    def __post_init__(self) -> None:
        arr = np.array(self.map, dtype=np.intp, copy=True)
        if arr.shape != (self.source.n,):
            raise ValueError(f"map has shape {arr.shape}, expected ({self.source.n},)")
        if arr.size and (arr.min() < 0 or arr.max() >= self.target.n):
            raise ValueError("map values out of range of target")
        arr.setflags(write=False)
        object.__setattr__(self, "map", arr)

    def __call__(self, a: int) -> int:
        return int(self.map[a])

    def then(self, other: WMorphism) -> WMorphism:
        return WMorphism(self.source, other.target, other.map[self.map])


def check_morphism(f: WMorphism) -> AxiomReport:
    """Additivity, zero, monotonicity (for ``prec``) and continuity, exhaustively."""
    S, T, fm = f.source, f.target, f.map
    rep = AxiomReport()
    lhs = fm[S.add]
    rhs = T.add[fm[:, None], fm[None, :]]
    rep.record("additive", bool(np.array_equal(lhs, rhs)), _first(np.argwhere(lhs != rhs)))
    rep.record("zero", int(fm[S.zero]) == T.zero, (S.zero,))
    img = T.prec.bits[fm[:, None], fm[None, :]]
    rep.record("monotone", not np.any(S.prec.bits & ~img), _first(np.argwhere(S.prec.bits & ~img)))
    cont = None
    TP = T.prec.bits
    for a in range(S.n):
        reach = np.zeros(T.n, dtype=bool)
        for a2 in S.prec.down(a):
            reach |= TP[:, fm[a2]]
        miss = np.flatnonzero(TP[:, fm[a]] & ~reach)
        if miss.size:
            cont = (a, int(miss[0]))
            break
    rep.record("continuous", cont is None, cont)
    return rep


def identity_morphism(s: WSemigroup) -> WMorphism:
    return WMorphism(s, s, np.arange(s.n))


# fixtures --------------------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    semigroup: WSemigroup
    labels: tuple[str, ...]
    name: str


def _nbar(k: int) -> Fixture:
    n = k + 1
    add = np.minimum(np.add.outer(np.arange(n), np.arange(n)), k)
    prec = np.less_equal.outer(np.arange(n), np.arange(n))
    return Fixture(WSemigroup.build(add, 0, prec), tuple(str(i) for i in range(n)), f"NBAR({k})")


def _ninf(k: int) -> Fixture:
    n = k + 2  # 0..k and infinity at index k+1
    s = np.add.outer(np.arange(n), np.arange(n))
    inf = k + 1
    add = np.where((s > k) | (np.arange(n)[:, None] == inf) | (np.arange(n)[None, :] == inf), inf, s)
    prec = np.less_equal.outer(np.arange(n), np.arange(n))
    labels = tuple(str(i) for i in range(k + 1)) + ("inf",)
    return Fixture(WSemigroup.build(add, 0, prec), labels, f"NINF({k})")


def _ghost(k: int) -> Fixture:
    """NBAR(k) with an absorbing extra top whose down-set is everything but itself."""
    base = _nbar(k).semigroup
    n = k + 2
    t = k + 1
    add = np.full((n, n), t, dtype=np.intp)
    add[: k + 1, : k + 1] = base.add
    prec = np.zeros((n, n), dtype=bool)
    prec[: k + 1, : k + 1] = base.prec.bits
    prec[: k + 1, t] = True
    labels = tuple(str(i) for i in range(k + 1)) + (f"{k}*",)
    return Fixture(WSemigroup.build(add, 0, prec), labels, f"GHOST({k})")


def _poset_closure(n: int, rels: Iterable[tuple[int, int]]) -> NDArray[np.bool_]:
    le = np.eye(n, dtype=bool)
    for i, j in rels:
        le[i, j] = True
    for k in range(n):
        le |= le[:, [k]] & le[[k], :]
    if np.any(le & le.T & ~np.eye(n, dtype=bool)):
        raise ValueError("poset relations contain a cycle")
    return le


def down_sets(n: int, le: NDArray[np.bool_]) -> list[frozenset[int]]:
    """All down-closed subsets of a finite poset, by size then contents."""
    out = []
    for mask in range(1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if all(le[j, i] <= bool(mask >> j & 1) for i in members for j in range(n)):
            out.append(frozenset(members))
    return sorted(out, key=lambda d: (len(d), sorted(d)))


def _lat(n: int, rels: list[tuple[int, int]]) -> Fixture:
    le = _poset_closure(n, rels)
    ds = down_sets(n, le)
    index = {d: i for i, d in enumerate(ds)}
    add = np.array([[index[x | y] for y in ds] for x in ds], dtype=np.intp)
    prec = np.array([[x <= y for y in ds] for x in ds], dtype=bool)
    labels = tuple("{" + ",".join(str(v) for v in sorted(d)) + "}" for d in ds)
    shape = f"{n};" + ",".join(f"{i}<{j}" for i, j in rels)
    return Fixture(WSemigroup.build(add, index[frozenset()], prec), labels, f"LAT({shape})")


def product(*parts: WSemigroup) -> WSemigroup:
    """Componentwise product; tuples are indexed in row-major order."""
    sizes = [p.n for p in parts]
    tuples = list(itertools.product(*[range(k) for k in sizes]))
    index = {t: i for i, t in enumerate(tuples)}
    add = np.array(
        [[index[tuple(int(p.add[x, y]) for p, x, y in zip(parts, u, v))] for v in tuples] for u in tuples],
        dtype=np.intp,
    )
    prec = np.array(
        [[all(p.prec.bits[x, y] for p, x, y in zip(parts, u, v)) for v in tuples] for u in tuples], dtype=bool
    )
    return WSemigroup.build(add, index[tuple(p.zero for p in parts)], prec)


def _prod(parts: list[Fixture]) -> Fixture:
    s = product(*[p.semigroup for p in parts])
    labels = tuple("(" + ",".join(t) + ")" for t in itertools.product(*[p.labels for p in parts]))
    return Fixture(s, labels, "PROD(" + ",".join(p.name for p in parts) + ")")


class FixtureSpecError(ValueError):
    pass


_TOKEN = re.compile(r"\s*([A-Z]+|\d+|[(),;<])")


def fixture(kind: str) -> Fixture:
    """Build a fixture with element labels from a textual description.

    Grammar: ``NBAR(k)``, ``NINF(k)``, ``GHOST(k)``, ``LAT(n;i<j,...)`` and
    ``PROD(f1,f2,...)``.  ``LAT(n)`` is the lattice of an ``n``-antichain.
    """
    pos = 0
    text = kind.strip()

    def peek() -> str | None:
        m = _TOKEN.match(text, pos)
        return m.group(1) if m else None

    def take(expected: str | None = None) -> str:
        nonlocal pos
        m = _TOKEN.match(text, pos)
        if not m or (expected is not None and m.group(1) != expected):
            raise FixtureSpecError(f"bad fixture spec {kind!r} at offset {pos}")
        pos = m.end()
        return m.group(1)

    def number() -> int:
        tok = take()
        if not tok.isdigit():
            raise FixtureSpecError(f"expected a number in {kind!r}")
        return int(tok)

    def parse() -> Fixture:
        head = take()
        if head in ("NBAR", "NINF", "GHOST"):
            take("(")
            k = number()
            take(")")
            if head != "NINF" and k < 1:
                raise FixtureSpecError(f"{head} needs k >= 1")
            return {"NBAR": _nbar, "NINF": _ninf, "GHOST": _ghost}[head](k)
        if head == "LAT":
            take("(")
            n = number()
            rels = []
            if peek() == ";":
                take(";")
                while peek() not in (")", None):
                    i = number()
                    take("<")
                    j = number()
                    if not (i < n and j < n):
                        raise FixtureSpecError(f"poset point out of range in {kind!r}")
                    rels.append((i, j))
                    if peek() == ",":
                        take(",")
            take(")")
            if n < 1:
                raise FixtureSpecError("LAT needs at least one point")
            return _lat(n, rels)
        if head == "PROD":
            take("(")
            parts = [parse()]
            while peek() == ",":
                take(",")
                parts.append(parse())
            take(")")
            return _prod(parts)
        raise FixtureSpecError(f"unknown fixture kind {head!r}")

    try:
        result = parse()
    except IndexError as exc:  # pragma: no cover - defensive
        raise FixtureSpecError(str(exc)) from exc
    if text[pos:].strip():
        raise FixtureSpecError(f"trailing input in fixture spec {kind!r}")
    return result


def make_fixture(kind: str) -> WSemigroup:
    return fixture(kind).semigroup
