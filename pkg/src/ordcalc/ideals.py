"""Ideals of a W-semigroup and the ideal/pair Galois connection."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .genpair import generate_normal
from .pairs import Pair, classify_pair, minimal_pair, pair_leq
from .relcore import Relation, compose
from .wstruct import AxiomReport, WSemigroup, compact_containment, check_cu_axioms

DEFAULT_BUDGET = 20


def enumeration_budget(default: int = DEFAULT_BUDGET) -> int:
    """Carrier-size limit for exhaustive enumeration; ``ORDCALC_BUDGET`` overrides it."""
    raw = os.environ.get("ORDCALC_BUDGET")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"ORDCALC_BUDGET must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError("ORDCALC_BUDGET must be positive")
    return value


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Ideal:
    members: frozenset[int]

    @classmethod
    def of(cls, members: Iterable[int]) -> Ideal:
        return cls(frozenset(int(m) for m in members))

    def __contains__(self, a: int) -> bool:
        return a in self.members

    def __le__(self, other: Ideal) -> bool:
        return self.members <= other.members

    def __len__(self) -> int:
        return len(self.members)

    def mask(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        out[list(self.members)] = True
        return out

    def sorted(self) -> list[int]:
        return sorted(self.members)


def _mask_ideal(mask: np.ndarray) -> Ideal:
    return Ideal.of(np.flatnonzero(mask))


def ideal_violation(s: WSemigroup, members: Iterable[int]) -> tuple | None:
    """Why a subset is not an ideal: missing zero, a non-closed sum, or a non-hereditary pair."""
    m = np.zeros(s.n, dtype=bool)
    m[list(members)] = True
    if not m[s.zero]:
        return ("zero",)
    idx = np.flatnonzero(m)
    sums = s.add[np.ix_(idx, idx)]
    bad = np.argwhere(~m[sums])
    if bad.size:
        return ("sum", int(idx[bad[0][0]]), int(idx[bad[0][1]]))
    below = s.prec.bits[:, idx].any(axis=1)
    out = np.flatnonzero(below & ~m)
    if out.size:
        return ("hereditary", int(out[0]))
    return None


def is_ideal(s: WSemigroup, members: Iterable[int]) -> bool:
    return ideal_violation(s, members) is None


def is_closed(s: WSemigroup, i: Ideal) -> bool:
    return closure(s, i) == i


def generated_ideal(s: WSemigroup, gens: Iterable[int]) -> Ideal:
    """Smallest ideal containing ``gens``."""
    m = np.zeros(s.n, dtype=bool)
    m[s.zero] = True
    m[list(gens)] = True
    P = s.prec.bits
    while True:
        idx = np.flatnonzero(m)
        nxt = m.copy()
        nxt[s.add[np.ix_(idx, idx)].ravel()] = True
        nxt |= P[:, idx].any(axis=1)
        if np.array_equal(nxt, m):
            return _mask_ideal(m)
        m = nxt


def closure(s: WSemigroup, i: Ideal) -> Ideal:
    """``{a : every x prec a lies in i}``."""
    m = i.mask(s.n)
    P = s.prec.bits
    return _mask_ideal(~np.any(P & ~m[:, None], axis=0))


def enumerate_ideals(s: WSemigroup, closed_only: bool = False, budget: int | None = None) -> list[Ideal]:
    """All ideals (or closed ideals), ordered by size then members."""
    limit = enumeration_budget() if budget is None else budget
    if s.n > limit:
        raise BudgetExceeded(f"carrier of size {s.n} exceeds enumeration budget {limit}")
    step = (lambda i: closure(s, i)) if closed_only else (lambda i: i)
    start = step(generated_ideal(s, []))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for ideal in frontier:
            for a in range(s.n):
                if a in ideal:
                    continue
                j = step(generated_ideal(s, ideal.members | {a}))
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(seen, key=lambda i: (len(i), i.sorted()))


def multiples_with_zero(s: WSemigroup, a: int) -> list[int]:
    return [s.zero] + [m for m in s.multiples(a) if m != s.zero]


def principal(s: WSemigroup, a: int) -> Ideal:
    """``{b : every b' prec b has b' prec n a for some n}``."""
    P = s.prec.bits
    reach = P[:, multiples_with_zero(s, a)].any(axis=1)
    return _mask_ideal(~np.any(P & ~reach[:, None], axis=0))


def is_order_unit(s: WSemigroup, a: int) -> bool:
    return a != s.zero and len(principal(s, a)) == s.n


def is_simple(s: WSemigroup) -> bool:
    return all(is_order_unit(s, a) for a in range(s.n) if a != s.zero)


def pair_of_ideal(s: WSemigroup, i: Ideal) -> Pair:
    """``(prec, <=_I)`` with ``a <=_I b`` iff each ``x prec a`` has ``x prec b + y`` for some ``y`` in ``i``."""
    P = s.prec.bits
    ys = i.sorted()
    # reach[x, b]: x prec b + y for some y in i
    reach = P[:, s.add[:, ys]].any(axis=2)
    missing = P.T.astype(np.float32) @ (1.0 - reach.astype(np.float32))
    return Pair(s.prec, Relation(missing < 0.5))


def ideal_of_pair(s: WSemigroup, p: Pair) -> Ideal:
    """``{a : a <= 0}``."""
    return _mask_ideal(p.order.bits[:, s.zero])


def cu_ideal_order(s: WSemigroup, i: Ideal) -> Relation:
    """``a <= b + y`` for some ``y`` in ``i``, with ``<=`` induced by ``prec``."""
    L = s.le.bits
    ys = i.sorted()
    return Relation(L[:, s.add[:, ys]].any(axis=2))


def is_cu_fixture(s: WSemigroup) -> bool:
    """``prec`` is the induced order and every element is compact."""
    return s.prec == s.le and compact_containment(s.le) == s.le and check_cu_axioms(s).ok


def default_pair_corpus(s: WSemigroup, count: int = 12, seed: int = 0) -> list[Pair]:
    """Deterministic generated normal pairs: ideal pairs plus random seeds."""
    rng = np.random.default_rng(seed)
    out: list[Pair] = []
    for _ in range(count):
        r = Relation(rng.random((s.n, s.n)) < rng.choice([0.02, 0.08, 0.2]))
        r = compose(r, s.prec)
        g = generate_normal(s, r)
        out.append(Pair(g.aux, g.order))
    return out


def galois_check(s: WSemigroup, pairs: list[Pair] | None = None) -> AxiomReport:
    rep = AxiomReport()
    le = s.le
    o1 = check_cu_axioms(s).entries["O1"]
    rep.record("hyp_O1", o1.ok, o1.witness)
    absorb = compose(s.prec, le).first_outside(s.prec)
    rep.record("hyp_prec_absorbs_order", absorb is None, absorb)
    wb = s.prec.first_outside(compact_containment(le))
    rep.record("hyp_prec_way_below", wb is None, wb)
    names = ("roundtrip_ideals", "pair_contracts", "ideal_pair_fixed", "ideal_pair_order",
             "closed_ideals_prequotient", "cu_ideal_quotient")
    if not rep.ok:
        for name in names:
            rep.skip(name, "hypotheses fail")
        return rep
    closed = enumerate_ideals(s, closed_only=True)
    corpus = default_pair_corpus(s) if pairs is None else pairs
    corpus = corpus + [pair_of_ideal(s, i) for i in closed]
    bad = next((i.sorted() for i in closed if ideal_of_pair(s, pair_of_ideal(s, i)) != i), None)
    rep.record("roundtrip_ideals", bad is None, None if bad is None else tuple(bad))
    bad_k = None
    for k, p in enumerate(corpus):
        prof = classify_pair(s, p)
        if not (prof.normal and prof.left_closed and prof.admissible):
            continue
        back = pair_of_ideal(s, ideal_of_pair(s, p))
        if not pair_leq(s, back, p):
            bad_k = (k,)
            break
    rep.record("pair_contracts", bad_k is None, bad_k)
    fixed = next((i.sorted() for i in closed
                  if pair_of_ideal(s, ideal_of_pair(s, pair_of_ideal(s, i))) != pair_of_ideal(s, i)), None)
    rep.record("ideal_pair_fixed", fixed is None, None if fixed is None else tuple(fixed))
    # I inside I_alpha exactly when alpha_I <= alpha
    order_bad = None
    for k, p in enumerate(corpus):
        prof = classify_pair(s, p)
        if not (prof.normal and prof.left_closed and prof.admissible):
            continue
        ia = ideal_of_pair(s, p)
        for i in closed:
            if (i <= ia) != pair_leq(s, pair_of_ideal(s, i), p):
                order_bad = (k, tuple(i.sorted()))
                break
        if order_bad:
            break
    rep.record("ideal_pair_order", order_bad is None, order_bad)
    # closed ideals are unchanged by passing to the minimal prequotient and its antisymmetrisation
    from .quotients import quotient

    pre = s.with_prec(compose(le, s.prec))
    same_pre = enumerate_ideals(pre, closed_only=True) == closed
    q = quotient(s, minimal_pair(s))
    lifted = sorted(
        (Ideal.of(a for a in range(s.n) if q.class_of[a] in j) for j in enumerate_ideals(q.quotient, closed_only=True)),
        key=lambda i: (len(i), i.sorted()),
    )
    rep.record("closed_ideals_prequotient", same_pre and lifted == closed)
    if is_cu_fixture(s):
        cu_bad = next((i.sorted() for i in closed if cu_ideal_order(s, i) != pair_of_ideal(s, i).order), None)
        rep.record("cu_ideal_quotient", cu_bad is None, None if cu_bad is None else tuple(cu_bad))
    else:
        rep.skip("cu_ideal_quotient", "not a Cu fixture with compact elements")
    return rep
