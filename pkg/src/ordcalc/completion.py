"""Round-ideal completion of a finite W-semigroup.

A round ideal is a nonempty, ``prec``-down-closed, ``prec``-directed set in
which every member lies ``prec``-below another member.  On a finite carrier
these are exactly the sets ``u^prec`` with ``u prec u``; ``complete`` lists
them that way and re-verifies each one against the definition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import GroupAction, dyn_quotient, is_invariant_set, validate_action
from .ideals import Ideal, enumerate_ideals, pair_of_ideal
from .iso import find_isomorphism, is_isomorphism
from .quotients import QuotientResult, quotient
from .relcore import Relation, compose
from .wstruct import AxiomReport, WMorphism, WSemigroup, check_morphism, compact_containment


@dataclass(frozen=True)
class RoundIdeal:
    members: frozenset[int]

    @classmethod
    def of(cls, members) -> RoundIdeal:
        return cls(frozenset(int(m) for m in members))

    def __contains__(self, a: int) -> bool:
        return a in self.members

    def __le__(self, other: RoundIdeal) -> bool:
        return self.members <= other.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)


class BaseMismatch(ValueError):
    pass


def round_ideal_violation(s: WSemigroup, members) -> str | None:
    """Which defining property of a round ideal fails, if any."""
    m = np.zeros(s.n, dtype=bool)
    m[list(members)] = True
    if not m.any():
        return "empty"
    P = s.prec.bits
    idx = np.flatnonzero(m)
    if np.any(P[:, idx].any(axis=1) & ~m):
        return "not_down_closed"
    inner = P[np.ix_(idx, idx)]
    if not inner.any(axis=1).all():
        return "not_round"
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if not np.any(inner[i] & inner[j]):
                return "not_directed"
    return None


def _down(s: WSemigroup, a: int) -> RoundIdeal:
    return RoundIdeal.of(s.prec.down(a))


@dataclass(frozen=True, eq=False)
class Completion:
    base: WSemigroup
    ideals: tuple[RoundIdeal, ...]
    semigroup: WSemigroup
    embedding: WMorphism
    top: tuple[int, ...]  # top[k]: some u prec u with ideals[k] = u^prec

    def index(self, d: RoundIdeal) -> int:
        return self.ideals.index(d)

    @property
    def order(self) -> Relation:
        return self.semigroup.le


def complete(s: WSemigroup) -> Completion:
    n = s.n
    P = s.prec.bits
    found: dict[RoundIdeal, int] = {}
    for u in range(n):
        if P[u, u]:
            found.setdefault(_down(s, u), u)
    ideals = sorted(found, key=lambda d: (len(d), d.sorted()))
    for d in ideals:
        if (why := round_ideal_violation(s, d.members)) is not None:
            raise AssertionError(f"candidate {d.sorted()} is not a round ideal: {why}")
    pos = {d: k for k, d in enumerate(ideals)}
    top = tuple(found[d] for d in ideals)
    m = len(ideals)
    add = np.empty((m, m), dtype=np.intp)
    for i in range(m):
        for j in range(m):
            # down-closure of pairwise sums
            members = {x for d in ideals[i].members for e in ideals[j].members for x in s.prec.down(int(s.add[d, e]))}
            total = RoundIdeal.of(members)
            if total not in pos:
                raise AssertionError(f"sum of round ideals {i} and {j} is not a round ideal")
            add[i, j] = pos[total]
    incl = np.array([[a <= b for b in ideals] for a in ideals], dtype=bool)
    wb = np.array(
        [[any(ideals[i].members <= _down(s, e).members for e in ideals[j].members) for j in range(m)] for i in range(m)],
        dtype=bool,
    )
    zero = pos[_down(s, s.zero)] if _down(s, s.zero) in pos else None
    if zero is None:
        raise AssertionError("zero has no round down-set")
    c = WSemigroup.build(add, zero, wb)
    emb = np.array([pos[_down(s, a)] for a in range(n)], dtype=np.intp)
    out = Completion(s, tuple(ideals), c, WMorphism(s, c, emb), top)
    if not np.array_equal(c.le.bits, incl):
        raise AssertionError("order induced by way-below differs from inclusion")
    return out


def waybelow(c: Completion, d: RoundIdeal, e: RoundIdeal) -> bool:
    """``d`` sits inside ``x^prec`` for some ``x`` in ``e``."""
    if d not in c.ideals or e not in c.ideals:
        raise BaseMismatch("arguments are not round ideals of this completion")
    s = c.base
    return any(d.members <= _down(s, x).members for x in e.members)


def waybelow_generic(c: Completion) -> Relation:
    """Compact containment computed from the inclusion order alone."""
    incl = Relation(np.array([[a <= b for b in c.ideals] for a in c.ideals], dtype=bool))
    return compact_containment(incl)


def embedding_check(c: Completion) -> AxiomReport:
    s, emb = c.base, c.embedding.map
    W = c.semigroup.prec.bits
    rep = AxiomReport()
    mor = check_morphism(c.embedding)
    rep.record("morphism", mor.ok, tuple(mor.failures())[:1] or None)
    # pulling way-below back along the embedding always gives <= . prec
    pulled = Relation(W[emb[:, None], emb[None, :]])
    le_prec = compose(s.le, s.prec)
    rep.record("pullback_is_le_prec", pulled == le_prec, pulled.first_outside(le_prec) or le_prec.first_outside(pulled))
    if le_prec <= s.prec:
        rep.record("order_embedding", pulled == s.prec, pulled.first_outside(s.prec))
    else:
        rep.skip("order_embedding", f"<= . prec is not inside prec at {le_prec.first_outside(s.prec)}")
    L = c.semigroup.le.bits
    dense_bad = None
    for i, j in np.argwhere(W):
        if not np.any(L[i, emb] & L[emb, j]):
            dense_bad = (int(i), int(j))
            break
    rep.record("dense", dense_bad is None, dense_bad)
    wb = Relation(W)
    rep.record("waybelow_generic", wb == waybelow_generic(c), wb.first_outside(waybelow_generic(c)))
    rep.record("realised_by_constant_sequence", all(_down(s, u) == d and s.prec.bits[u, u] for d, u in zip(c.ideals, c.top)))
    return rep


# lattice transfer --------------------------------------------------------------


def cu_ideals(t: WSemigroup) -> list[Ideal]:
    """Order-hereditary submonoids of a finite Cu-semigroup (suprema are automatic)."""
    return enumerate_ideals(t.with_prec(t.le))


def ideal_image(c: Completion, i: Ideal) -> Ideal:
    """Round ideals contained in ``i``."""
    return Ideal.of(k for k, d in enumerate(c.ideals) if d.members <= i.members)


def ideal_preimage(c: Completion, k: Ideal) -> Ideal:
    return Ideal.of(a for a in range(c.base.n) if int(c.embedding.map[a]) in k)


def completion_action(c: Completion, g: GroupAction) -> GroupAction:
    """``h u^prec = (h u)^prec`` on round ideals."""
    pos = {d: k for k, d in enumerate(c.ideals)}
    gens = []
    for gen in g.generators:
        p = np.asarray(gen, dtype=np.intp)
        gens.append([pos[RoundIdeal.of(p[list(d.members)])] for d in c.ideals])
    return validate_action(c.semigroup, gens)


def _class_map_iso(left: WSemigroup, right: WSemigroup, pairs) -> bool:
    """Read a map off ``(left_index, right_index)`` samples and test it is an isomorphism."""
    phi = np.full(left.n, -1, dtype=np.intp)
    for x, y in pairs:
        if phi[x] == -1:
            phi[x] = y
        elif phi[x] != y:
            return False
    return bool(np.all(phi >= 0)) and is_isomorphism(left, right, phi)


def idempotence_check(s: WSemigroup) -> AxiomReport:
    c = complete(s)
    cc = complete(c.semigroup)
    rep = AxiomReport()
    emb = cc.embedding.map
    rep.record("embedding_bijective", len(set(emb.tolist())) == cc.semigroup.n == c.semigroup.n)
    rep.record("embedding_iso", bool(is_isomorphism(c.semigroup, cc.semigroup, emb)))
    rep.record("iso_search", bool(find_isomorphism(c.semigroup, cc.semigroup)))
    return rep


def lattice_transfer(s: WSemigroup, g: GroupAction | None = None) -> AxiomReport:
    c = complete(s)
    t = c.semigroup
    rep = AxiomReport()
    closed = enumerate_ideals(s, closed_only=True)
    targets = cu_ideals(t)
    images = [ideal_image(c, i) for i in closed]
    key = Ideal.sorted
    rep.record("bijection", sorted(images, key=key) == sorted(targets, key=key) and len(set(images)) == len(images))
    rep.record("inverse", all(ideal_preimage(c, ideal_image(c, i)) == i for i in closed))
    mono = all((a <= b) == (ideal_image(c, a) <= ideal_image(c, b)) for a in closed for b in closed)
    rep.record("order_isomorphism", mono)
    bad = None
    for idx, i in enumerate(closed):
        left = quotient(t, pair_of_ideal(t, images[idx]))
        qi = quotient(s, pair_of_ideal(s, i))
        right = complete(qi.quotient)
        samples = [
            (int(left.class_of[c.embedding.map[u]]), int(right.embedding.map[qi.class_of[u]])) for u in range(s.n)
        ]
        ok = _class_map_iso(left.quotient, right.semigroup, samples) and bool(find_isomorphism(left.quotient, right.semigroup))
        if not ok:
            bad = tuple(i.sorted())
            break
    rep.record("quotient_compatible", bad is None, bad)
    if g is None:
        rep.skip("invariant_restriction", "no action supplied")
        return rep
    gc = completion_action(c, g)
    inv_ok = all(is_invariant_set(g, i.members) == is_invariant_set(gc, ideal_image(c, i).members) for i in closed)
    rep.record("invariant_restriction", inv_ok)
    return rep


def dyn_compat(s: WSemigroup, g: GroupAction) -> AxiomReport:
    """Compare the completion of ``S/G`` with the completion of ``completion(S)/G``."""
    rep = AxiomReport()
    qg: QuotientResult = dyn_quotient(s, g)
    left = complete(qg.quotient)
    c = complete(s)
    gc = completion_action(c, g)
    qc = dyn_quotient(c.semigroup, gc)
    right = complete(qc.quotient)
    samples = [
        (int(left.embedding.map[qg.class_of[u]]), int(right.embedding.map[qc.class_of[c.embedding.map[u]]]))
        for u in range(s.n)
    ]
    rep.record("class_map_iso", _class_map_iso(left.semigroup, right.semigroup, samples))
    rep.record("iso_search", bool(find_isomorphism(left.semigroup, right.semigroup)))
    return rep
