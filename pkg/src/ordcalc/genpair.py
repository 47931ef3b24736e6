"""Pairs generated by a seed relation.

The generated order is computed from chains ``c prec d1 R e1 prec ... R en prec b``:
the chain relation is reachability along ``prec . R`` followed by one ``prec``
step.  ``fixpoint_oracle`` computes the same preorder by saturating the
defining closure rules and shares no code with the chain route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pairs import Pair, PreconditionError
from .relcore import (
    Relation,
    additive_closure,
    compose,
    compose_all,
    is_almost_transitive,
    is_left_continuous,
    preorder_closure,
    refinement_counterexample,
)
from .wstruct import WSemigroup, almost_refinement_counterexample


@dataclass(frozen=True, eq=False)
class GeneratedPair(Pair):
    """A generated pair ``(prec, <=^R)`` with its companion ``<=^R . prec . <=^R``."""

    extended: Relation | None = None


def _require_left_continuous(s: WSemigroup, r: Relation) -> None:
    if r.size != s.n:
        raise ValueError(f"seed of size {r.size} on semigroup of size {s.n}")
    w = compose(s.prec, r).first_outside(compose_all(s.prec, r, s.prec))
    if w is not None:
        raise PreconditionError("seed relation is not left continuous", w)


def below_all(prec: Relation, target: Relation) -> Relation:
    """``(a, b)`` such that every ``c prec a`` has ``(c, b)`` in ``target``."""
    P = prec.bits.astype(np.float32)
    missing = P.T @ (1.0 - target.bits.astype(np.float32))
    return Relation(missing < 0.5)


def chain_relation(s: WSemigroup, r: Relation) -> Relation:
    """``(prec . R)^* . prec``; the empty chain contributes ``prec`` itself."""
    return compose(preorder_closure(compose(s.prec, r)), s.prec)


def generate_prenormal(s: WSemigroup, r: Relation) -> GeneratedPair:
    _require_left_continuous(s, r)
    order = below_all(s.prec, chain_relation(s, r))
    return GeneratedPair(s.prec, order, compose_all(order, s.prec, order))


def generate_normal(s: WSemigroup, r: Relation) -> GeneratedPair:
    _require_left_continuous(s, r)
    closed = additive_closure(r | Relation.identity(s.n), s)
    return generate_prenormal(s, closed)


def fixpoint_oracle(s: WSemigroup, r: Relation, additive: bool, order: tuple[str, ...] | None = None) -> Relation:
    """Least preorder containing ``<=_prec`` and ``r`` closed under the approximation rule.

    The approximation rule adds ``(a, b)`` once every ``c prec a`` already has
    ``(c, b)``.  With ``additive`` the relation is also closed under sums of
    related pairs.  ``order`` permutes the rule passes; the result is the
    same for every order.
    """
    n = s.n
    P = s.prec
    rules = order or ("transitive", "approx", "sum")
    L = np.array(s.le.bits | r.bits | np.eye(n, dtype=bool))
    add = s.add
    Pb = P.bits
    for _ in range(n * n + 1):
        before = L.copy()
        for rule in rules:
            if rule == "transitive":
                # one Floyd-Warshall sweep gives the full transitive closure
                for k in range(n):
                    L |= L[:, [k]] & L[[k], :]
            elif rule == "approx":
                for a in range(n):
                    below = Pb[:, a]
                    for b in range(n):
                        if not L[a, b] and np.all(L[below, b]):
                            L[a, b] = True
            elif rule == "sum" and additive:
                rows, cols = np.nonzero(L)
                for a1, b1 in zip(rows, cols):
                    L[add[a1, rows], add[b1, cols]] = True
        if np.array_equal(L, before):
            return Relation(L)
    raise RuntimeError("oracle did not stabilise")


def _one_step(s: WSemigroup, r: Relation, include_prec: bool) -> Relation:
    step = compose_all(s.prec, r, s.prec)
    if include_prec:
        step = step | s.prec
    return below_all(s.prec, step)


def one_step_form(s: WSemigroup, r: Relation, normal: bool = False) -> Relation:
    """Generated order using a single seed step instead of chains.

    Without ``normal`` the seed must be left continuous and almost transitive.
    With ``normal`` the seed must in addition have almost refinement, ``s``
    must have almost refinement, and the step uses ``(R + id)_+``.
    """
    _require_left_continuous(s, r)
    prec = s.prec
    if normal:
        if (w := almost_refinement_counterexample(s)) is not None:
            raise PreconditionError("semigroup lacks almost refinement", w)
        for shape in ((1, 2), (2, 1)):
            if (w := refinement_counterexample(r, prec, s, *shape)) is not None:
                raise PreconditionError(f"seed lacks almost {shape}-refinement", w)
        if not is_almost_transitive(r, prec):
            raise PreconditionError("seed is not almost transitive")
        seed = additive_closure(r | Relation.identity(s.n), s)
        return _one_step(s, seed, include_prec=False)
    if not is_almost_transitive(r, prec):
        core = compose_all(prec, r, prec)
        raise PreconditionError("seed is not almost transitive", compose_all(core, r, prec).first_outside(core))
    contains_id = Relation.identity(s.n) <= r
    return _one_step(s, r, include_prec=not contains_id)


def left_continuous_repair(s: WSemigroup, r: Relation) -> Relation:
    """``r . prec``, which is always left continuous."""
    return compose(r, s.prec)


def is_seed_left_continuous(s: WSemigroup, r: Relation) -> bool:
    return is_left_continuous(r, s.prec)
