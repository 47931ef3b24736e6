import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import SMALL_KINDS, ideals_bf, is_closed_bf, is_ideal_bf
from ordcalc.dynamics import dyn_pair, validate_action
from ordcalc.genpair import generate_normal, left_continuous_repair
from ordcalc.ideals import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Ideal,
    closure,
    default_pair_corpus,
    enumerate_ideals,
    enumeration_budget,
    galois_check,
    generated_ideal,
    ideal_of_pair,
    ideal_violation,
    is_closed,
    is_ideal,
    is_order_unit,
    is_simple,
    pair_of_ideal,
    principal,
)
from ordcalc.iso import is_isomorphism
from ordcalc.pairs import Pair, classify_pair, minimal_pair, pair_leq
from ordcalc.quotients import antisymmetrize, kernel, quotient
from ordcalc.relcore import Relation
from ordcalc.suites import automorphisms, morphism_corpus
from ordcalc.wstruct import make_fixture

CORPUS = morphism_corpus()


def idx(kind, *coords):
    """Index of a coordinate tuple in a product of counters."""
    s = make_fixture(kind)
    sizes = [int(round(s.n ** (1 / len(coords))))] * len(coords)
    return int(np.ravel_multi_index(coords, sizes))


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_enumeration_matches_powerset(kind):
    s = make_fixture(kind)
    for closed in (False, True):
        got = {i.members for i in enumerate_ideals(s, closed_only=closed)}
        assert got == set(ideals_bf(s, closed_only=closed))


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_enumeration_is_closed_under_intersection(kind):
    s = make_fixture(kind)
    for closed in (False, True):
        found = {i.members for i in enumerate_ideals(s, closed_only=closed)}
        for a, b in itertools.product(found, repeat=2):
            assert a & b in found
        assert frozenset({s.zero}) <= min(found, key=len)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_counter_has_only_trivial_closed_ideals(k):
    s = make_fixture(f"NBAR({k})")
    got = [i.sorted() for i in enumerate_ideals(s, closed_only=True)]
    assert got == [[0], list(range(k + 1))]
    assert is_simple(s)
    # a proper initial segment is down-closed but not closed under addition
    if k >= 2:
        assert ideal_violation(s, [0, 1]) == ("sum", 1, 1)


def test_lattice_closed_ideals():
    s = make_fixture("LAT(2)")
    got = [i.sorted() for i in enumerate_ideals(s, closed_only=True)]
    # every closed ideal is the down-set of one element: {}, {a}, {b}, {a,b}
    assert len(got) == 4
    for members in got:
        top = s.add[np.ix_(members, members)].max()
        assert set(members) == set(np.flatnonzero(s.le.bits[:, top]).tolist())


def test_principal_ideal_in_product():
    s = make_fixture("PROD(NBAR(1),NBAR(1))")
    a = idx("PROD(NBAR(1),NBAR(1))", 1, 0)
    assert principal(s, a).sorted() == [idx("PROD(NBAR(1),NBAR(1))", 0, 0), a]
    assert not is_order_unit(s, a)
    assert is_order_unit(s, idx("PROD(NBAR(1),NBAR(1))", 1, 1))
    assert not is_simple(s)


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_principal_is_least_closed_ideal_containing(kind):
    s = make_fixture(kind)
    closed = enumerate_ideals(s, closed_only=True)
    for a in range(s.n):
        p = principal(s, a)
        assert a in p and is_closed(s, p) and is_ideal(s, p.members)
        assert p == min((i for i in closed if a in i), key=len)
        assert all(p <= i for i in closed if a in i)
    assert principal(s, s.zero) == closure(s, Ideal.of([s.zero]))
    assert is_simple(s) == all(is_order_unit(s, a) for a in range(s.n) if a != s.zero)


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_closure_is_monotone_retraction(kind):
    s = make_fixture(kind)
    ideals = enumerate_ideals(s)
    for i in ideals:
        c = closure(s, i)
        assert i <= c and closure(s, c) == c
        assert is_closed_bf(s, set(c.members)) and is_ideal_bf(s, set(c.members))
        assert is_closed(s, i) == (c == i)
    for i, j in itertools.product(ideals, repeat=2):
        if i <= j:
            assert closure(s, i) <= closure(s, j)
    assert closure(s, Ideal.of(range(s.n))) == Ideal.of(range(s.n))


@pytest.mark.parametrize("k", [1, 2])
def test_closure_restores_deleted_top(k):
    s = make_fixture(f"GHOST({k})")
    top = s.n - 1
    low = Ideal.of(range(top))
    assert is_ideal(s, low.members) and not is_closed(s, low)
    assert closure(s, low) == Ideal.of(range(s.n))


def test_generated_ideal_is_least():
    s = make_fixture("PROD(NBAR(2),NBAR(1))")
    for a in range(s.n):
        g = generated_ideal(s, [a])
        assert all(g <= i for i in enumerate_ideals(s) if a in i)


def test_ideal_pair_examples():
    s = make_fixture("NBAR(2)")
    assert pair_of_ideal(s, Ideal.of([0])) == minimal_pair(s)
    full = pair_of_ideal(s, Ideal.of(range(3)))
    assert full.order == Relation.full(3)
    assert quotient(s, full).quotient.n == 1

    kind = "PROD(NBAR(2),NBAR(2))"
    sq = make_fixture(kind)
    i = Ideal.of(idx(kind, x, 0) for x in range(3))
    assert is_closed(sq, i)
    order = pair_of_ideal(sq, i).order.bits
    assert order[idx(kind, 2, 0), idx(kind, 0, 0)]
    assert not order[idx(kind, 0, 2), idx(kind, 0, 0)]


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_ideal_pairs_are_normal_and_round_trip(kind):
    s = make_fixture(kind)
    for i in enumerate_ideals(s, closed_only=True):
        p = pair_of_ideal(s, i)
        prof = classify_pair(s, p)
        assert prof.admissible and prof.normal
        assert ideal_of_pair(s, p) == i


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_minimal_pair_has_zero_ideal(kind):
    s = make_fixture(kind)
    assert ideal_of_pair(s, minimal_pair(s)) == Ideal.of(np.flatnonzero(s.le.bits[:, s.zero]))


@pytest.mark.parametrize("name,f", CORPUS, ids=[n for n, _ in CORPUS])
def test_kernel_ideal_is_preimage_of_zero(name, f):
    got = ideal_of_pair(f.source, kernel(f))
    t = f.target
    below_zero = t.le.bits[:, t.zero]
    assert got == Ideal.of(a for a in range(f.source.n) if below_zero[f.map[a]])
    if np.array_equal(np.flatnonzero(below_zero), [t.zero]):
        assert got == Ideal.of(np.flatnonzero(f.map == t.zero))


@pytest.mark.parametrize("n", [2, 3])
def test_coordinate_permutation_kills_nothing(n):
    kind = f"LAT({n})"
    s = make_fixture(kind)
    # the automorphisms of a free lattice permute the generating atoms
    g = validate_action(s, automorphisms(s))
    assert g.order == math.factorial(n)
    p = dyn_pair(s, g)
    assert ideal_of_pair(s, Pair(p.aux, p.order)) == Ideal.of([s.zero])


@pytest.mark.parametrize("kind", ["NBAR(1)", "NBAR(2)", "NBAR(3)", "NINF(1)", "NINF(2)", "LAT(2)", "LAT(3)",
                                  "LAT(3;0<1)", "PROD(NBAR(1),NBAR(2))", "PROD(NBAR(1),NINF(1))"])
def test_galois_connection_holds(kind):
    rep = galois_check(make_fixture(kind))
    assert rep.ok, rep.failures()
    assert all(e.status == "pass" for e in rep.entries.values())


@pytest.mark.parametrize("k", [1, 2])
def test_galois_on_non_cu_fixture_skips_cu_entry(k):
    rep = galois_check(make_fixture(f"GHOST({k})"))
    assert rep.ok
    assert rep["cu_ideal_quotient"].status == "skip"
    assert rep["hyp_prec_absorbs_order"].status == "pass"


@given(kind=st.sampled_from(["NBAR(2)", "LAT(2)", "PROD(NBAR(1),NBAR(1))", "NINF(1)", "LAT(3;0<1)"]),
       seed=st.integers(0, 10_000))
def test_ideal_below_pair_iff_ideal_pair_below(kind, seed):
    s = make_fixture(kind)
    rng = np.random.default_rng(seed)
    g = generate_normal(s, left_continuous_repair(s, Relation(rng.random((s.n, s.n)) < 0.15)))
    p = Pair(g.aux, g.order)
    ip = ideal_of_pair(s, p)
    assert is_ideal(s, ip.members)
    for i in enumerate_ideals(s, closed_only=True):
        assert (i <= ip) == pair_leq(s, pair_of_ideal(s, i), p)
    assert pair_leq(s, pair_of_ideal(s, ip), p)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_zero_ideal_quotient_of_simple_is_antisymmetrization(k):
    for kind in (f"NBAR({k})", f"NINF({k})"):
        s = make_fixture(kind)
        q = quotient(s, pair_of_ideal(s, Ideal.of([s.zero])))
        a = antisymmetrize(s, s.le)
        assert q.quotient.n == a.quotient.n
        assert is_isomorphism(q.quotient, a.quotient, np.arange(q.quotient.n))


def test_default_pair_corpus_is_deterministic():
    s = make_fixture("LAT(2)")
    assert default_pair_corpus(s) == default_pair_corpus(s)
    assert all(classify_pair(s, p).normal for p in default_pair_corpus(s))


def test_budget(monkeypatch):
    s = make_fixture("PROD(NBAR(2),NBAR(2))")
    with pytest.raises(BudgetExceeded):
        enumerate_ideals(s, budget=8)
    monkeypatch.setenv("ORDCALC_BUDGET", "5")
    assert enumeration_budget() == 5
    with pytest.raises(BudgetExceeded):
        enumerate_ideals(s)
    monkeypatch.setenv("ORDCALC_BUDGET", "nope")
    with pytest.raises(ValueError):
        enumeration_budget()
    monkeypatch.setenv("ORDCALC_BUDGET", "0")
    with pytest.raises(ValueError):
        enumeration_budget()
    monkeypatch.delenv("ORDCALC_BUDGET")
    assert enumeration_budget() == DEFAULT_BUDGET


@pytest.mark.parametrize("k", [1, 2, 3])
def test_addition_kernel_ideal_is_zero_only(k):
    f = next(f for name, f in CORPUS if name == f"add NBAR({k})^2")
    assert ideal_of_pair(f.source, kernel(f)) == Ideal.of([f.source.zero])
