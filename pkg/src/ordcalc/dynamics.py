"""Group actions on W-semigroups, the orbit-generated pair and the dynamical quotient."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .genpair import GeneratedPair, below_all, chain_relation, generate_normal
from .ideals import (
    Ideal,
    closure,
    enumerate_ideals,
    generated_ideal,
    is_closed,
    is_ideal,
    is_simple,
    pair_of_ideal,
    principal,
)
from .iso import find_isomorphism, is_isomorphism
from .pairs import PreconditionError
from .quotients import Factorization, NoFactorization, QuotientResult, factor_through, quotient
from .relcore import Relation, compose_all
from .wstruct import AxiomReport, WMorphism, WSemigroup, check_cu_axioms, has_almost_refinement

DEFAULT_GROUP_BOUND = 10_000


class ActionError(ValueError):
    """``elements`` tells whether the witness lists carrier elements or a generator index."""

    def __init__(self, message: str, witness: tuple | None = None, elements: bool = True) -> None:
        super().__init__(message if witness is None else f"{message} (witness {witness})")
        self.witness = witness
        self.elements = elements and witness is not None


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Generators and the materialised permutation group; row ``g`` maps ``a`` to ``elements[g, a]``."""

    generators: tuple[tuple[int, ...], ...]
    elements: np.ndarray

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])

    @property
    def size(self) -> int:
        return int(self.elements.shape[1])

    def orbit(self, a: int) -> list[int]:
        return sorted(set(self.elements[:, a].tolist()))


def trivial_action(s: WSemigroup) -> GroupAction:
    return validate_action(s, [])


def _automorphism_witness(s: WSemigroup, g: np.ndarray) -> tuple[str, tuple] | None:
    if int(g[s.zero]) != s.zero:
        return "zero is not fixed", (s.zero,)
    bad = np.argwhere(g[s.add] != s.add[g[:, None], g[None, :]])
    if bad.size:
        return "addition is not preserved", tuple(int(v) for v in bad[0])
    P = s.prec.bits
    bad = np.argwhere(P & ~P[g[:, None], g[None, :]])
    if bad.size:
        return "prec is not preserved", tuple(int(v) for v in bad[0])
    return None


def validate_action(s: WSemigroup, gens, bound: int = DEFAULT_GROUP_BOUND) -> GroupAction:
    """Check every generator is an automorphism and close the generators into a group."""
    n = s.n
    perms: list[np.ndarray] = []
    for k, g in enumerate(gens):
        arr = np.asarray(g, dtype=np.intp)
        if arr.shape != (n,) or sorted(arr.tolist()) != list(range(n)):
            raise ActionError("generator is not a permutation of the carrier", (k,), elements=False)
        if (w := _automorphism_witness(s, arr)) is not None:
            raise ActionError(f"generator {k}: {w[0]}", w[1])
        perms.append(arr)
    ident = tuple(range(n))
    seen = {ident: 0}
    rows = [np.arange(n, dtype=np.intp)]
    frontier = [rows[0]]
    while frontier:
        nxt = []
        for h in frontier:
            for g in perms:
                gh = g[h]
                key = tuple(gh.tolist())
                if key not in seen:
                    if len(rows) >= bound:
                        raise ActionError(f"group order exceeds the bound {bound}")
                    seen[key] = len(rows)
                    rows.append(gh)
                    nxt.append(gh)
        frontier = nxt
    return GroupAction(tuple(tuple(int(v) for v in p) for p in perms), np.array(rows, dtype=np.intp))


def orbit_relation(s: WSemigroup, g: GroupAction) -> Relation:
    """``a ~ b`` iff ``a = h b`` for some group element ``h``."""
    bits = np.zeros((s.n, s.n), dtype=bool)
    cols = np.broadcast_to(np.arange(s.n), g.elements.shape)
    bits[g.elements, cols] = True
    return Relation(bits)


def orbit_sums(s: WSemigroup, g: GroupAction) -> Relation:
    """Pairs ``(d1 + ... + dn, h1 d1 + ... + hn dn)``, built one summand at a time."""
    n = s.n
    step = [(d, int(h)) for d in range(n) for h in sorted(set(g.elements[:, d].tolist()))]
    bits = np.zeros((n, n), dtype=bool)
    bits[s.zero, s.zero] = True
    frontier = [(s.zero, s.zero)]
    while frontier:
        nxt = []
        for x, y in frontier:
            for d, hd in step:
                u, v = int(s.add[x, d]), int(s.add[y, hd])
                if not bits[u, v]:
                    bits[u, v] = True
                    nxt.append((u, v))
        frontier = nxt
    return Relation(bits)


def dyn_order_chains(s: WSemigroup, g: GroupAction) -> Relation:
    """``a <= b`` iff each ``c prec a`` reaches ``b`` through a chain of orbit-sum steps."""
    return below_all(s.prec, chain_relation(s, orbit_sums(s, g)))


def dyn_order_one_step(s: WSemigroup, g: GroupAction) -> Relation:
    """Single-step form: each ``c prec a`` has ``c prec b`` or ``c prec x``, ``(x, y)`` an orbit sum, ``y prec b``."""
    step = s.prec | compose_all(s.prec, orbit_sums(s, g), s.prec)
    return below_all(s.prec, step)


def dyn_pair(s: WSemigroup, g: GroupAction) -> GeneratedPair:
    """The normal pair generated by the orbit relation.

    When ``s`` has almost refinement the single-step form is computed as well
    and must agree.
    """
    if g.size != s.n:
        raise ValueError("action and semigroup have different carriers")
    p = generate_normal(s, orbit_relation(s, g))
    if has_almost_refinement(s):
        short = dyn_order_one_step(s, g)
        if short != p.order:
            w = short.first_outside(p.order) or p.order.first_outside(short)
            raise AssertionError(f"single-step form disagrees with the generated order at {w}")
    return p


def dyn_quotient(s: WSemigroup, g: GroupAction) -> QuotientResult:
    q = quotient(s, dyn_pair(s, g))
    bad = np.argwhere(q.class_of[g.elements] != q.class_of[None, :])
    if bad.size:
        raise AssertionError(f"projection is not invariant at group element {tuple(bad[0])}")
    return q


def is_invariant_map(g: GroupAction, fmap: np.ndarray) -> tuple[int, int] | None:
    """Least ``(h, a)`` with ``f(h a) != f(a)``."""
    bad = np.argwhere(fmap[g.elements] != fmap[None, :])
    return None if bad.size == 0 else (int(bad[0][0]), int(bad[0][1]))


def induced_map(s: WSemigroup, g: GroupAction, f: WMorphism) -> Factorization:
    """The order-preserving W-morphism ``S/G -> T/<=`` through which an invariant ``f`` factors."""
    if (w := is_invariant_map(g, f.map)) is not None:
        raise PreconditionError("morphism is not invariant", w)
    return factor_through(f, dyn_pair(s, g))


def universal_property_check(s: WSemigroup, g: GroupAction, f: WMorphism) -> AxiomReport:
    if f.source is not s and f.source != s:
        raise ValueError("morphism does not start at the acted-on semigroup")
    if (w := is_invariant_map(g, f.map)) is not None:
        raise PreconditionError("morphism is not invariant", w)
    rep = AxiomReport()
    try:
        fac = factor_through(f, dyn_pair(s, g))
    except NoFactorization as exc:
        rep.record("exists", False, exc.witness)
        return rep
    rep.record("exists", True)
    qs, qt, h = fac.source, fac.target, fac.morphism.map
    rep.record("commutes", bool(np.array_equal(h[qs.class_of], qt.class_of[f.map])))
    # any class function making the square commute takes these values
    values = [set() for _ in range(qs.quotient.n)]
    for a in range(s.n):
        values[int(qs.class_of[a])].add(int(qt.class_of[f.map[a]]))
    ambiguous = next((c for c, v in enumerate(values) if len(v) != 1), None)
    rep.record("unique", ambiguous is None, None if ambiguous is None else (ambiguous,))
    QL, TL = qs.order.bits, qt.order.bits
    rep.record("order_preserving", not np.any(QL & ~TL[h[:, None], h[None, :]]))
    rep.info("order_embedding", fac.order_embedding)
    rep.info("injective", len(set(h.tolist())) == len(h))
    return rep


# invariant ideals ------------------------------------------------------------


def is_invariant_set(g: GroupAction, members) -> bool:
    m = np.zeros(g.size, dtype=bool)
    m[list(members)] = True
    return bool(np.all(m[g.elements[:, m]]))


def invariant_closed_ideals(s: WSemigroup, g: GroupAction) -> list[Ideal]:
    return [i for i in enumerate_ideals(s, closed_only=True) if is_invariant_set(g, i.members)]


def orbit_ideal(s: WSemigroup, g: GroupAction, a: int) -> Ideal:
    """``{z : every z' prec z has z' prec h1 a + ... + hn a}``."""
    orbit = g.orbit(a)
    sums = {s.zero}
    frontier = [s.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for b in orbit:
                y = int(s.add[x, b])
                if y not in sums:
                    sums.add(y)
                    nxt.append(y)
        frontier = nxt
    P = s.prec.bits
    reach = P[:, sorted(sums)].any(axis=1)
    return Ideal.of(np.flatnonzero(~np.any(P & ~reach[:, None], axis=0)))


def is_minimal(s: WSemigroup, g: GroupAction) -> bool:
    return all(len(orbit_ideal(s, g, a)) == s.n for a in range(s.n) if a != s.zero)


def induced_action(q: QuotientResult, g: GroupAction) -> GroupAction:
    """The action on a quotient by an invariant pair, ``h [a] = [h a]``."""
    reps = np.array(q.representatives(), dtype=np.intp)
    gens = []
    for gen in g.generators:
        p = np.asarray(gen, dtype=np.intp)
        img = q.class_of[p]
        out = img[reps]
        bad = np.argwhere(out[q.class_of] != img)
        if bad.size:
            raise ActionError("action does not descend to the quotient", (int(bad[0][0]),), elements=False)
        gens.append(out)
    return validate_action(q.quotient, gens)


def dyn_ideal_compat_check(s: WSemigroup, g: GroupAction, i: Ideal) -> AxiomReport:
    if not is_invariant_set(g, i.members):
        bad = next((h, a) for a in i.sorted() for h in range(g.order) if int(g.elements[h, a]) not in i)
        raise PreconditionError("ideal is not invariant", bad)
    if not (is_ideal(s, i.members) and is_closed(s, i)):
        raise PreconditionError("not a closed ideal", tuple(i.sorted()))
    rep = AxiomReport()
    qg = dyn_quotient(s, g)
    sg = qg.quotient
    image = Ideal.of(int(qg.class_of[a]) for a in i.members)
    rep.record("image_closed_ideal", is_ideal(sg, image.members) and is_closed(sg, image), tuple(image.sorted()))

    inv = invariant_closed_ideals(s, g)
    images = [Ideal.of(int(qg.class_of[a]) for a in j.members) for j in inv]
    target = enumerate_ideals(sg, closed_only=True)
    rep.record("lattice_bijection", sorted(images, key=Ideal.sorted) == sorted(target, key=Ideal.sorted)
               and len(set(images)) == len(inv))
    back = [Ideal.of(a for a in range(s.n) if int(qg.class_of[a]) in k) for k in target]
    rep.record("lattice_inverse", sorted(back, key=Ideal.sorted) == sorted(inv, key=Ideal.sorted))

    # (S/G)/(I/G) against (S/I)/G through the class map a -> [[a]]
    left = quotient(sg, pair_of_ideal(sg, image))
    qi = quotient(s, pair_of_ideal(s, i))
    right = dyn_quotient(qi.quotient, induced_action(qi, g))
    lc = left.class_of[qg.class_of]
    rc = right.class_of[qi.class_of]
    phi = np.full(left.quotient.n, -1, dtype=np.intp)
    consistent = True
    for a in range(s.n):
        if phi[lc[a]] == -1:
            phi[lc[a]] = rc[a]
        elif phi[lc[a]] != rc[a]:
            consistent = False
    explicit = consistent and is_isomorphism(left.quotient, right.quotient, phi)
    rep.record("two_stage_explicit", explicit)
    rep.record("two_stage_search", bool(find_isomorphism(left.quotient, right.quotient)))

    bad_a = None
    for a in range(s.n):
        lhs = Ideal.of(int(qg.class_of[z]) for z in orbit_ideal(s, g, a).members)
        if lhs != principal(sg, int(qg.class_of[a])):
            bad_a = (a,)
            break
    rep.record("principal_image", bad_a is None, bad_a)
    rep.record("minimal_iff_simple", is_minimal(s, g) == is_simple(sg), (int(is_minimal(s, g)), int(is_simple(sg))))
    return rep


def invariant_ideal_generated(s: WSemigroup, g: GroupAction, gens) -> Ideal:
    """Smallest invariant closed ideal containing ``gens``."""
    cur = closure(s, generated_ideal(s, gens))
    while True:
        orbit = {int(g.elements[h, a]) for a in cur.members for h in range(g.order)}
        nxt = closure(s, generated_ideal(s, orbit))
        if nxt == cur:
            return cur
        cur = nxt


def cu_log(q: QuotientResult) -> AxiomReport:
    """Cu axioms of a computed quotient, kept for inspection."""
    return check_cu_axioms(q.quotient)


def coordinate_permutation(sizes: list[int], perm: list[int]) -> tuple[int, ...]:
    """Carrier permutation of a product (row-major tuples) moving coordinate ``i`` to ``perm[i]``."""
    if sorted(perm) != list(range(len(sizes))) or any(sizes[i] != sizes[perm[i]] for i in range(len(sizes))):
        raise ValueError("coordinate permutation must preserve factor sizes")
    tuples = list(itertools.product(*[range(k) for k in sizes]))
    index = {t: i for i, t in enumerate(tuples)}
    out = []
    for t in tuples:
        moved = [0] * len(t)
        for i, v in enumerate(t):
            moved[perm[i]] = v
        out.append(index[tuple(moved)])
    return tuple(out)
