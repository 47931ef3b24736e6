"""Pairs ``(aux, order)`` of relations on a W-semigroup and their classification.

Throughout, ``prec`` is the distinguished relation of the ambient W-semigroup,
``aux`` is the first component of a pair and ``order`` the preorder.  Failing
flags carry the lexicographically least offending tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .relcore import Relation, compose, compose_all, induced_preorder, is_additive, is_left_continuous
from .wstruct import AxiomReport, WSemigroup, w2_counterexample


@dataclass(frozen=True, eq=False)
class Pair:
    aux: Relation
    order: Relation

    def __post_init__(self) -> None:
        if self.aux.size != self.order.size:
            raise ValueError("pair components live on different carriers")

    @property
    def size(self) -> int:
        return self.aux.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pair):
            return NotImplemented
        return self.aux == other.aux and self.order == other.order

    def __hash__(self) -> int:
        return hash((self.aux, self.order))


class NotAdmissible(ValueError):
    pass


class PreconditionError(ValueError):
    """An operation's hypotheses fail; ``witness`` locates the failure."""

    def __init__(self, message: str, witness: tuple | None = None) -> None:
        super().__init__(message if witness is None else f"{message} (witness {witness})")
        self.witness = witness


@dataclass
class PairProfile:
    admissible: bool
    prenormal: bool
    normal: bool
    left_closed: bool
    auxiliary: bool
    witnesses: dict[str, tuple | None] = field(default_factory=dict)

    def flags(self) -> dict[str, bool]:
        return {
            "admissible": self.admissible,
            "prenormal": self.prenormal,
            "normal": self.normal,
            "left_closed": self.left_closed,
            "auxiliary": self.auxiliary,
        }


def _diff_witness(r1: Relation, r2: Relation) -> tuple[int, int] | None:
    """Least pair in the symmetric difference of two relations."""
    cand = [w for w in (r1.first_outside(r2), r2.first_outside(r1)) if w is not None]
    return min(cand) if cand else None


def admissible_witness(aux: Relation, order: Relation) -> tuple[int, int] | None:
    """Least ``(a, b)`` whose ``order . aux`` down-sets nest while ``a <= b`` fails."""
    return induced_preorder(compose(order, aux)).first_outside(order)


def is_admissible(aux: Relation, order: Relation) -> bool:
    return admissible_witness(aux, order) is None


def prenormal_relation_witness(aux: Relation, prec: Relation) -> tuple[str, tuple | None] | None:
    """Why ``aux`` fails to be prenormal for ``prec``, or ``None`` if it is."""
    if (w := prec.first_outside(aux)) is not None:
        return "prec_not_inside", w
    if (w := _diff_witness(aux, compose(aux, prec))) is not None:
        return "not_absorbing", w
    if (w := compose(aux, aux).first_outside(aux)) is not None:
        return "not_transitive", w
    return None


def is_prenormal_relation(aux: Relation, prec: Relation) -> bool:
    return prenormal_relation_witness(aux, prec) is None


def left_closed_witness(base: Relation, order: Relation) -> tuple[int, int] | None:
    """Least ``(a, b)`` with every ``c base a`` in ``base . order`` of ``b`` but ``(a, b)`` outside ``<=_base . order``."""
    hyp_rel = compose(base, order).bits.astype(np.float32)
    B = base.bits.astype(np.float32)
    # missing[a, b] counts c base a with (c, b) outside base . order
    missing = B.T @ (1.0 - hyp_rel)
    hyp = Relation(missing < 0.5)
    return hyp.first_outside(compose(induced_preorder(base), order))


def classify_pair(s: WSemigroup, p: Pair) -> PairProfile:
    if p.size != s.n:
        raise ValueError(f"pair of size {p.size} on semigroup of size {s.n}")
    prec, aux, order = s.prec, p.aux, p.order
    wit: dict[str, tuple | None] = {}
    wit["admissible"] = admissible_witness(aux, order)
    pre = prenormal_relation_witness(aux, prec)
    cont = compose(prec, order).first_outside(compose_all(prec, order, prec))
    if pre is not None:
        wit["prenormal"] = (pre[0],) + tuple(pre[1] or ())
    elif cont is not None:
        wit["prenormal"] = ("order_not_left_continuous",) + cont
    else:
        wit["prenormal"] = None
    wit["left_closed"] = left_closed_witness(prec, order)
    aux_w = aux.first_outside(order)
    if aux_w is None:
        aux_w = compose_all(order, aux, order).first_outside(aux)
    wit["auxiliary"] = aux_w
    add_w = None
    if not is_additive(aux, s):
        add_w = ("aux_not_additive",)
    elif not is_additive(order, s):
        add_w = ("order_not_additive",)
    prenormal = wit["prenormal"] is None
    wit["normal"] = wit["prenormal"] if not prenormal else add_w
    return PairProfile(
        admissible=wit["admissible"] is None,
        prenormal=prenormal,
        normal=prenormal and add_w is None,
        left_closed=wit["left_closed"] is None,
        auxiliary=wit["auxiliary"] is None,
        witnesses=wit,
    )


def minimal_pair(s: WSemigroup) -> Pair:
    """``(prec, <=_prec)``."""
    return Pair(s.prec, s.le)


def pair_conditions(p1: Pair, p2: Pair) -> tuple[bool, bool, bool]:
    """The three defining conditions of ``p1 <= p2`` in the pair order."""
    c1 = p1.aux <= p2.aux
    d1 = induced_preorder(compose(p1.order, p1.aux))
    d2 = induced_preorder(compose(p2.order, p2.aux))
    c2 = d1 <= d2
    c3 = p1.order <= p2.order
    return c1, c2, c3


def pair_leq(s: WSemigroup, p1: Pair, p2: Pair) -> bool:
    for name, p in (("first", p1), ("second", p2)):
        if p.size != s.n:
            raise ValueError(f"{name} pair has the wrong carrier size")
        if (w := admissible_witness(p.aux, p.order)) is not None:
            raise NotAdmissible(f"{name} pair is not admissible at {w}")
    return all(pair_conditions(p1, p2))


def pair_leq_prenormal(p1: Pair, p2: Pair) -> bool:
    """Two-inclusion form of the pair order, valid for prenormal first components."""
    return p1.aux <= p2.aux and p1.order <= p2.order


# characterisations of prenormal relations ------------------------------------


def _monotone_continuous(prec: Relation, target: Relation, fmap: np.ndarray) -> bool:
    """``fmap: (X, prec) -> (Y, target)`` is monotone and continuous."""
    T = target.bits
    if np.any(prec.bits & ~T[fmap[:, None], fmap[None, :]]):
        return False
    for a in range(prec.size):
        reach = np.zeros(T.shape[0], dtype=bool)
        for a2 in prec.down(a):
            reach |= T[:, fmap[a2]]
        if np.any(T[:, fmap[a]] & ~reach):
            return False
    return True


def pullback_battery(s: WSemigroup, aux2: Relation) -> AxiomReport:
    """Evaluate the equivalent descriptions of a prenormal relation separately.

    ``pullback``: ``aux2`` is the pullback of a dense transitive relation along
    a continuous monotone map; the identity into ``(S, aux2)`` is the candidate.
    ``morphism``: ``aux2`` dense and transitive and the identity is monotone and
    continuous.  ``cofinal``: every ``x aux2 a`` is ``aux2``-below some ``y prec a``.
    ``absorbing``: ``aux2 = aux2 . prec``.  ``sandwich``: ``aux2 = aux2 . prec . aux2``
    and ``aux2`` is left continuous.  All five must agree.
    """
    prec = s.prec
    if not aux2.is_transitive():
        raise PreconditionError("relation must be transitive", compose(aux2, aux2).first_outside(aux2))
    rep = AxiomReport()
    inside = prec <= aux2
    dense = aux2.is_dense()
    ident = np.arange(s.n)
    pulled = Relation(aux2.bits[ident[:, None], ident[None, :]])
    rep.record("pullback", dense and _monotone_continuous(prec, aux2, ident) and pulled == aux2)
    rep.record("morphism", dense and inside and compose(aux2, prec) >= aux2)
    cofinal = inside
    if cofinal:
        for a in range(s.n):
            below = prec.down(a)
            for x in aux2.down(a):
                if not np.any(aux2.bits[x, below]):
                    cofinal = False
                    break
            if not cofinal:
                break
    rep.record("cofinal", cofinal)
    rep.record("absorbing", inside and aux2 == compose(aux2, prec))
    rep.record(
        "sandwich",
        inside and aux2 == compose_all(aux2, prec, aux2) and is_left_continuous(aux2, prec),
    )
    verdicts = {e.status for e in rep.entries.values()}
    rep.record("consistent", len(verdicts) == 1, tuple(sorted(verdicts)))
    return rep


def forced_auxiliary(s: WSemigroup, order: Relation) -> Relation:
    """``order . prec . order``: the only candidate for an auxiliary prenormal first component."""
    return compose_all(order, s.prec, order)


def prenormal_transfer_check(s: WSemigroup, p: Pair) -> AxiomReport:
    """Check the equivalences relating ``(prec, <=)`` and ``(aux, <=)``.

    Part one: ``(prec, <=)`` is admissible; it is prec-prenormal iff
    ``(aux, <=)`` is aux-prenormal, and likewise with closedness added.
    Part two: for ``(prec, <=)`` the four descriptions of prenormal closed
    pairs are evaluated.  A prenormal auxiliary ``aux'`` must satisfy
    ``<= . prec . <= <= aux' = aux' . prec <= <= . prec``, so it is forced to
    equal ``<= . prec . <=``; the existential statements are evaluated on it.
    """
    prec, aux, order = s.prec, p.aux, p.order
    if (w := prenormal_relation_witness(aux, prec)) is not None:
        raise PreconditionError("first component is not prenormal", (w[0],) + tuple(w[1] or ()))
    if (w := admissible_witness(aux, order)) is not None:
        raise PreconditionError("pair is not admissible", w)
    rep = AxiomReport()
    rep.record("base_admissible", is_admissible(prec, order), admissible_witness(prec, order))
    base_pre = is_left_continuous(order, prec)
    self_pre = is_prenormal_relation(aux, aux) and is_left_continuous(order, aux)
    rep.record("prenormal_transfer", base_pre == self_pre, (int(base_pre), int(self_pre)))
    base_closed = base_pre and left_closed_witness(prec, order) is None
    self_closed = self_pre and left_closed_witness(aux, order) is None
    rep.record("closed_transfer", base_closed == self_closed, (int(base_closed), int(self_closed)))

    cand = forced_auxiliary(s, order)
    cand_pre = is_prenormal_relation(cand, prec) and is_left_continuous(order, prec)
    cand_aux = cand <= order and compose_all(order, cand, order) <= cand
    cand_min = induced_preorder(cand) == order
    cond1 = base_closed
    cond2 = is_admissible(cand, order) and cand_pre and cand_min and cand_aux
    cond3 = cand.is_dense() and cond2
    cond4 = (
        cand.is_dense()
        and is_admissible(cand, order)
        and cand_pre
        and cand_aux
        and w2_counterexample(cand, order) is None
    )
    verdict = (cond1, cond2, cond3, cond4)
    rep.record("closed_characterisation", len(set(verdict)) == 1, tuple(int(v) for v in verdict))
    return rep
