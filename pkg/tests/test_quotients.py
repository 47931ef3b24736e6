import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import SMALL_KINDS
from ordcalc.dynamics import dyn_pair, orbit_relation, validate_action
from ordcalc.genpair import generate_normal, left_continuous_repair
from ordcalc.ideals import enumerate_ideals, pair_of_ideal
from ordcalc.iso import find_isomorphism, is_isomorphism
from ordcalc.pairs import Pair, PreconditionError, minimal_pair, pair_leq
from ordcalc.quotients import (
    NoFactorization,
    antisymmetrize,
    correspondence_check,
    factor_through,
    kernel,
    prequotient,
    quotient,
)
from ordcalc.relcore import Relation, compose
from ordcalc.suites import ideal_classes_bruteforce, morphism_corpus
from ordcalc.wstruct import WMorphism, identity_morphism, make_fixture

CORPUS = morphism_corpus()


def addition(k):
    s, t = make_fixture(f"PROD(NBAR({k}),NBAR({k}))"), make_fixture(f"NBAR({k})")
    return WMorphism(s, t, [min(x + y, k) for x, y in itertools.product(range(k + 1), repeat=2)])


def swap(k):
    s = make_fixture(f"PROD(NBAR({k}),NBAR({k}))")
    n = k + 1
    return s, validate_action(s, [[(a % n) * n + a // n for a in range(n * n)]])


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_minimal_prequotient(kind):
    s = make_fixture(kind)
    assert prequotient(s, minimal_pair(s)).prec == compose(s.le, s.prec)


def test_nbar_prequotient_is_itself():
    for k in (1, 2, 3):
        s = make_fixture(f"NBAR({k})")
        assert prequotient(s, minimal_pair(s)).prec == s.prec


@pytest.mark.parametrize("kind", ["NBAR(2)", "LAT(2)", "PROD(NBAR(2),NBAR(2))", "PROD(NBAR(1),NINF(1))", "GHOST(2)"])
def test_ideal_prequotient_matches_definition(kind):
    s = make_fixture(kind)
    P = s.prec.bits
    for i in enumerate_ideals(s, closed_only=True):
        ys = i.sorted()
        # x below b modulo i: x prec b + y for some y in i
        mod = np.array([[any(P[x, s.add[b, y]] for y in ys) for b in range(s.n)] for x in range(s.n)])
        le_i = np.array([[all(mod[x, b] for x in range(s.n) if P[x, a]) for b in range(s.n)] for a in range(s.n)])
        p = pair_of_ideal(s, i)
        assert np.array_equal(p.order.bits, le_i)
        assert prequotient(s, p).prec == compose(Relation(le_i), s.prec)


def test_quotient_examples():
    s = make_fixture("NBAR(2)")
    assert quotient(s, Pair(s.prec, Relation.full(3))).quotient.n == 1
    q = quotient(s, minimal_pair(s))
    assert is_isomorphism(q.quotient, s, q.class_of)
    r = generate_normal(s, Relation.from_pairs(3, [(2, 0)]))
    assert quotient(s, r).quotient.n == 1


@pytest.mark.parametrize("kind", ["NBAR(3)", "LAT(3)", "NINF(2)", "PROD(NBAR(1),NBAR(2))"])
def test_minimal_quotient_of_partial_order_is_identity(kind):
    s = make_fixture(kind)
    q = quotient(s, minimal_pair(s))
    assert q.quotient.n == s.n and is_isomorphism(s, q.quotient, q.class_of)


def test_quotient_needs_normal_pair():
    s = make_fixture("NBAR(2)")
    with pytest.raises(PreconditionError):
        quotient(s, Pair(Relation.identity(3), Relation.full(3)))


def test_kernel_examples():
    s = make_fixture("LAT(2)")
    assert kernel(identity_morphism(s)) == minimal_pair(s)
    for k in (1, 2, 3):
        f = addition(k)
        tot = f.map
        expect = Relation(tot[:, None] <= tot[None, :])
        assert kernel(f).order == expect


@pytest.mark.parametrize("name,f", CORPUS, ids=[n for n, _ in CORPUS])
def test_kernel_contains_source_order_and_embeds(name, f):
    ker = kernel(f)
    assert f.source.le <= ker.order
    assert factor_through(f, ker).order_embedding
    assert factor_through(f, minimal_pair(f.source)) is not None


def test_kernel_rejects_non_morphism():
    s = make_fixture("NBAR(2)")
    with pytest.raises(PreconditionError):
        kernel(WMorphism(s, s, [0, 2, 1]))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_addition_factors_through_dynamical_pair(k):
    s, g = swap(k)
    fac = factor_through(addition(k), dyn_pair(s, g))
    assert fac.order_embedding
    assert len(set(fac.morphism.map.tolist())) == fac.morphism.map.size


def test_pair_above_kernel_does_not_factor():
    f = addition(2)
    s = f.source
    top = generate_normal(s, Relation.full(s.n))
    assert pair_leq(s, kernel(f), top) and not pair_leq(s, top, kernel(f))
    with pytest.raises(NoFactorization) as exc:
        factor_through(f, top)
    a, b = exc.value.witness
    assert f.map[a] != f.map[b] or not kernel(f).order.bits[a, b]


@pytest.mark.parametrize("name,f", CORPUS[:12], ids=[n for n, _ in CORPUS[:12]])
def test_factor_iff_below_kernel(name, f):
    s = f.source
    rng = np.random.default_rng(3)
    ker = kernel(f)
    for _ in range(6):
        p = generate_normal(s, left_continuous_repair(s, Relation(rng.random((s.n, s.n)) < 0.1)))
        p = Pair(p.aux, p.order)
        try:
            fac = factor_through(f, p)
        except NoFactorization:
            fac = None
        assert (fac is not None) == pair_leq(s, p, ker)
        if fac is not None:
            assert fac.order_embedding == (p == ker)


def test_correspondence_examples():
    s = make_fixture("PROD(NBAR(2),NBAR(2))")
    p = minimal_pair(s)
    assert correspondence_check(s, p, []).ok
    rep = correspondence_check(s, p, [p.order])
    assert rep.ok
    s2, g = swap(2)
    rep = correspondence_check(s2, minimal_pair(s2), [orbit_relation(s2, g)])
    assert rep.ok, rep.failures()


@given(kind=st.sampled_from(SMALL_KINDS), seeds=st.lists(st.integers(0, 10_000), min_size=1, max_size=3))
def test_two_stage_quotients_agree(kind, seeds):
    s = make_fixture(kind)
    rng = np.random.default_rng(seeds[0])
    base = generate_normal(s, left_continuous_repair(s, Relation(rng.random((s.n, s.n)) < 0.05)))
    base = Pair(base.aux, base.order)
    rels = [left_continuous_repair(s, Relation(np.random.default_rng(x).random((s.n, s.n)) < 0.1)) for x in seeds]
    rep = correspondence_check(s, base, rels)
    assert rep.ok, rep.failures()


@given(kind=st.sampled_from(SMALL_KINDS), seed=st.integers(0, 10_000))
def test_projection_of_section_is_identity(kind, seed):
    s = make_fixture(kind)
    rng = np.random.default_rng(seed)
    p = generate_normal(s, left_continuous_repair(s, Relation(rng.random((s.n, s.n)) < 0.1)))
    q = quotient(s, Pair(p.aux, p.order))
    for c, members in enumerate(q.classes):
        choice = members[rng.integers(len(members))]
        assert q.projection(choice) == c
    assert q.projection.map.tolist() == q.class_of.tolist()


@pytest.mark.parametrize("kind", ["LAT(2)", "NBAR(2)", "PROD(NBAR(1),NINF(1))", "GHOST(1)"])
def test_ideal_quotient_matches_bruteforce_classes(kind):
    s = make_fixture(kind)
    for i in enumerate_ideals(s, closed_only=True):
        q = quotient(s, pair_of_ideal(s, i))
        b = ideal_classes_bruteforce(s, i)
        for a1, a2 in itertools.product(range(s.n), repeat=2):
            assert (q.class_of[a1] == q.class_of[a2]) == (b[a1] == b[a2])


def test_antisymmetrize_rejects_incompatible_order():
    s = make_fixture("NBAR(2)")
    bad = Relation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)])
    with pytest.raises(PreconditionError):
        antisymmetrize(s, bad)


def test_find_isomorphism_on_quotient():
    s, g = swap(3)
    from ordcalc.dynamics import dyn_quotient

    q = dyn_quotient(s, g).quotient
    res = find_isomorphism(q, make_fixture("NBAR(3)"))
    assert res and is_isomorphism(q, make_fixture("NBAR(3)"), res.mapping)
    assert not find_isomorphism(q, make_fixture("PROD(NBAR(1),NBAR(1))"))
    # infinity saturates exactly like the top of a counter one step longer
    assert find_isomorphism(q, make_fixture("NINF(2)"))
