"""Prequotients, quotients, kernels and factorisation of morphisms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .genpair import generate_normal
from .pairs import Pair, PreconditionError, classify_pair, minimal_pair, pair_leq
from .relcore import Relation, compose
from .wstruct import AxiomReport, WMorphism, WSemigroup, check_morphism


@dataclass(frozen=True, eq=False)
class QuotientResult:
    quotient: WSemigroup
    projection: WMorphism
    class_of: np.ndarray
    order: Relation  # the pair's preorder, descended to classes

    @property
    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.quotient.n)]
        for a, c in enumerate(self.class_of):
            out[int(c)].append(a)
        return out

    def representatives(self) -> list[int]:
        return [members[0] for members in self.classes]


class NoFactorization(ValueError):
    def __init__(self, message: str, witness: tuple) -> None:
        super().__init__(f"{message} (witness {witness})")
        self.witness = witness


def _require_normal(s: WSemigroup, p: Pair) -> None:
    prof = classify_pair(s, p)
    if not prof.admissible:
        raise PreconditionError("pair is not admissible", prof.witnesses["admissible"])
    if not prof.normal:
        raise PreconditionError("pair is not normal", prof.witnesses["normal"])


def prequotient(s: WSemigroup, p: Pair) -> WSemigroup:
    """Same monoid, with ``prec`` replaced by ``order . aux``."""
    _require_normal(s, p)
    return s.with_prec(compose(p.order, p.aux))


def antisymmetrize(s: WSemigroup, order: Relation) -> QuotientResult:
    """Collapse the classes of ``order`` (which must be additive and contain ``prec``)."""
    L = order.bits
    equiv = L & L.T
    class_of = np.full(s.n, -1, dtype=np.intp)
    reps: list[int] = []
    for a in range(s.n):
        if class_of[a] == -1:
            class_of[equiv[a]] = len(reps)
            reps.append(a)
    r = np.array(reps, dtype=np.intp)
    add = class_of[s.add[np.ix_(r, r)]]
    for a in range(s.n):
        for b in range(s.n):
            if add[class_of[a], class_of[b]] != class_of[s.add[a, b]]:
                raise PreconditionError("addition does not respect the classes", (a, b))
    prec = s.prec.bits
    qprec = prec[np.ix_(r, r)]
    for a in range(s.n):
        if not np.array_equal(prec[a, :][r], qprec[class_of[a]]) or not np.array_equal(prec[:, a][r], qprec[:, class_of[a]]):
            raise PreconditionError("relation does not respect the classes", (a,))
    q = WSemigroup.build(add, int(class_of[s.zero]), qprec)
    return QuotientResult(q, WMorphism(s, q, class_of), class_of, Relation(L[np.ix_(r, r)]))


def quotient(s: WSemigroup, p: Pair) -> QuotientResult:
    pre = prequotient(s, p)
    res = antisymmetrize(pre, p.order)
    # the projection starts from the original semigroup
    return QuotientResult(res.quotient, WMorphism(s, res.quotient, res.class_of), res.class_of, res.order)


def kernel(f: WMorphism) -> Pair:
    rep = check_morphism(f)
    if not rep.ok:
        name, entry = next(iter(rep.failures().items()))
        raise PreconditionError(f"not a W-morphism: {name} fails", entry.witness)
    T = f.target.le.bits
    return Pair(f.source.prec, Relation(T[f.map[:, None], f.map[None, :]]))


@dataclass(frozen=True, eq=False)
class Factorization:
    morphism: WMorphism
    order_embedding: bool
    source: QuotientResult
    target: QuotientResult


def factor_through(f: WMorphism, p: Pair) -> Factorization:
    """Induce ``[a] -> [f(a)]`` from ``S/p`` to the antisymmetrised target.

    The induced map is built directly and checked to be well defined, order
    preserving and a W-morphism; any failure raises ``NoFactorization``.
    """
    S, T = f.source, f.target
    qs = quotient(S, p)
    qt = quotient(T, minimal_pair(T))
    img = qt.class_of[f.map]
    h = np.full(qs.quotient.n, -1, dtype=np.intp)
    for a in range(S.n):
        c = qs.class_of[a]
        if h[c] == -1:
            h[c] = img[a]
        elif h[c] != img[a]:
            first = qs.classes[int(c)][0]
            raise NoFactorization("equivalent elements have inequivalent images", (first, a))
    TL = qt.order.bits
    QL = qs.order.bits
    bad = np.argwhere(QL & ~TL[h[:, None], h[None, :]])
    if bad.size:
        x, y = (qs.representatives()[int(v)] for v in bad[0])
        raise NoFactorization("order is not preserved", (x, y))
    hm = WMorphism(qs.quotient, qt.quotient, h)
    rep = check_morphism(hm)
    if not rep.ok:
        name, entry = next(iter(rep.failures().items()))
        raise NoFactorization(f"induced map is not a W-morphism ({name})", tuple(entry.witness or ()))
    if not np.array_equal(h[qs.class_of], qt.class_of[f.map]):
        raise AssertionError("factorisation square does not commute")
    embedding = bool(np.array_equal(QL, TL[h[:, None], h[None, :]]))
    return Factorization(hm, embedding, qs, qt)


def _identity_is_iso(s1: WSemigroup, s2: WSemigroup) -> bool:
    ident = np.arange(s1.n)
    return check_morphism(WMorphism(s1, s2, ident)).ok and check_morphism(WMorphism(s2, s1, ident)).ok


def restrict_pair_to_prequotient(p: Pair, p2: Pair) -> Pair:
    """The pair ``(order2 . aux2, order2)`` seen on the prequotient by ``p``."""
    return Pair(compose(p2.order, p2.aux), p2.order)


def correspondence_check(s: WSemigroup, p: Pair, seeds: list[Relation]) -> AxiomReport:
    """Compare quotienting by a larger pair in one stage and in two stages."""
    _require_normal(s, p)
    rep = AxiomReport()
    s_alpha = prequotient(s, p)
    q1 = quotient(s, p)
    base = restrict_pair_to_prequotient(p, p)
    rep.record("self_restriction", base == Pair(compose(p.order, p.aux), p.order))
    images: dict[Pair, Pair] = {}
    for i, seed in enumerate(seeds):
        big = generate_normal(s, seed | p.order)
        big = Pair(big.aux, big.order)
        if not pair_leq(s, p, big):
            raise PreconditionError("generated pair is not above the base pair", (i,))
        beta = restrict_pair_to_prequotient(p, big)
        prof = classify_pair(s_alpha, beta)
        rep.record(f"seed{i}_restricted_normal", prof.normal and prof.admissible and prof.auxiliary, (i,))
        rep.record(f"seed{i}_above_base", pair_leq(s_alpha, base, beta), (i,))
        one = prequotient(s, big)
        two = prequotient(s_alpha, beta)
        rep.record(f"seed{i}_prequotient_iso", _identity_is_iso(one, two), (i,))
        # antisymmetrised comparison: S/big against (S/p)/(beta on classes)
        direct = quotient(s, big)
        reps = q1.representatives()
        r = np.array(reps, dtype=np.intp)
        beta_cls = Pair(Relation(beta.aux.bits[np.ix_(r, r)]), Relation(beta.order.bits[np.ix_(r, r)]))
        staged = quotient(q1.quotient, beta_cls)
        composite = staged.class_of[q1.class_of]
        same = bool(np.array_equal(composite, direct.class_of))
        rep.record(f"seed{i}_two_stage", same and _identity_is_iso(direct.quotient, staged.quotient), (i,))
        # inverse construction: order <= composed with beta's order, then beta's first component
        rebuilt_order = compose(p.order, beta.order)
        rebuilt = Pair(compose(rebuilt_order, beta.aux), rebuilt_order)
        ok = rebuilt_order == big.order and restrict_pair_to_prequotient(p, rebuilt) == beta
        rep.record(f"seed{i}_inverse", ok, (i,))
        if big in images and images[big] != beta:
            rep.record(f"seed{i}_well_defined", False, (i,))
        images[big] = beta
    betas = list(images.values())
    rep.record("injective", len(set(betas)) == len(betas))
    return rep
