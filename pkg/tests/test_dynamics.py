import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import pairs
from ordcalc.dynamics import (
    DEFAULT_GROUP_BOUND,
    ActionError,
    coordinate_permutation,
    cu_log,
    dyn_ideal_compat_check,
    dyn_order_chains,
    dyn_order_one_step,
    dyn_pair,
    dyn_quotient,
    induced_action,
    induced_map,
    invariant_closed_ideals,
    invariant_ideal_generated,
    is_invariant_map,
    is_invariant_set,
    is_minimal,
    orbit_ideal,
    orbit_relation,
    orbit_sums,
    trivial_action,
    universal_property_check,
    validate_action,
)
from ordcalc.genpair import fixpoint_oracle
from ordcalc.ideals import Ideal, closure, enumerate_ideals, is_simple, principal
from ordcalc.iso import is_isomorphism
from ordcalc.pairs import PreconditionError, minimal_pair
from ordcalc.relcore import Relation
from ordcalc.suites import ACTION_CORPUS, flagship_case
from ordcalc.wstruct import WMorphism, has_almost_refinement, make_fixture

CASES = [(c.label, c) for c in ACTION_CORPUS]


def pos(k, x, y):
    return x * (k + 1) + y


def test_group_orders():
    _, g = flagship_case(2)
    assert g.order == 2
    s = make_fixture("PROD(NBAR(1),NBAR(1),NBAR(1))")
    cyc = validate_action(s, [coordinate_permutation([2, 2, 2], [1, 2, 0])])
    assert cyc.order == 3
    sym = validate_action(s, [coordinate_permutation([2, 2, 2], [1, 2, 0]), coordinate_permutation([2, 2, 2], [1, 0, 2])])
    assert sym.order == 6
    assert trivial_action(s).order == 1


def test_non_additive_permutation_is_rejected():
    s = make_fixture("NBAR(2)")
    with pytest.raises(ActionError) as exc:
        validate_action(s, [[0, 2, 1]])
    assert exc.value.witness == (1, 1)


def test_action_errors():
    s = make_fixture("NBAR(2)")
    with pytest.raises(ActionError):
        validate_action(s, [[0, 1]])
    with pytest.raises(ActionError):
        validate_action(s, [[0, 0, 1]])
    ghost = make_fixture("GHOST(1)")
    with pytest.raises(ActionError):
        validate_action(ghost, [[1, 0, 2]])
    sq = make_fixture("PROD(NBAR(1),NBAR(1),NBAR(1))")
    gens = [coordinate_permutation([2, 2, 2], [1, 2, 0]), coordinate_permutation([2, 2, 2], [1, 0, 2])]
    with pytest.raises(ActionError, match="bound"):
        validate_action(sq, gens, bound=4)
    assert DEFAULT_GROUP_BOUND == 10_000
    with pytest.raises(ValueError):
        coordinate_permutation([2, 3], [1, 0])


@pytest.mark.parametrize("label,case", CASES)
def test_group_is_closed(label, case):
    _, g = case.build()
    rows = {tuple(r) for r in g.elements.tolist()}
    assert len(rows) == g.order
    for a, b in itertools.product(g.elements, repeat=2):
        assert tuple(a[b].tolist()) in rows
    inv = [tuple(np.argsort(r).tolist()) for r in g.elements]
    assert set(inv) <= rows


def test_orbit_relation_examples():
    s, g = flagship_case(1)
    assert pairs(orbit_relation(s, g)) == {(a, a) for a in range(4)} | {(1, 2), (2, 1)}
    t = make_fixture("LAT(2)")
    assert orbit_relation(t, trivial_action(t)) == Relation.identity(4)


@pytest.mark.parametrize("label,case", CASES)
def test_orbit_relation_is_equivalence(label, case):
    s, g = case.build()
    o = orbit_relation(s, g)
    assert o.is_preorder() and o == o.transpose()
    sums = orbit_sums(s, g)
    assert o <= sums and sums == sums.transpose()


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_flagship_quotient(k):
    s, g = flagship_case(k)
    q = dyn_quotient(s, g)
    total = np.array([min(x + y, k) for x, y in itertools.product(range(k + 1), repeat=2)])
    assert q.quotient.n == k + 1
    for a, b in itertools.product(range(s.n), repeat=2):
        assert (q.class_of[a] == q.class_of[b]) == (total[a] == total[b])
    phi = np.zeros(k + 1, dtype=np.intp)
    phi[q.class_of] = total
    assert is_isomorphism(q.quotient, make_fixture(f"NBAR({k})"), phi)


def test_dyn_order_example():
    s, g = flagship_case(2)
    order = dyn_pair(s, g).order
    assert order.bits[pos(2, 1, 1), pos(2, 2, 0)]
    assert order.bits[pos(2, 2, 0), pos(2, 1, 1)]
    assert not order.bits[pos(2, 2, 0), pos(2, 0, 1)]


@pytest.mark.parametrize("label,case", CASES)
def test_dyn_order_matches_oracle(label, case):
    s, g = case.build()
    p = dyn_pair(s, g)
    assert p.order == fixpoint_oracle(s, orbit_relation(s, g), additive=True)
    assert p.order == dyn_order_chains(s, g)
    assert orbit_relation(s, g) <= p.order and s.le <= p.order
    if has_almost_refinement(s):
        assert dyn_order_one_step(s, g) == p.order


@pytest.mark.parametrize("kind", ["NBAR(2)", "NINF(1)", "GHOST(1)", "LAT(2)", "LAT(3;0<1)", "PROD(NBAR(1),NBAR(2))"])
def test_trivial_action_gives_minimal_pair(kind):
    s = make_fixture(kind)
    g = trivial_action(s)
    p = dyn_pair(s, g)
    m = minimal_pair(s)
    assert (p.aux, p.order) == (m.aux, m.order)
    le = s.le.bits
    assert dyn_quotient(s, g).quotient.n == len({tuple(row) for row in (le & le.T).tolist()})


@pytest.mark.parametrize("label,case", CASES)
def test_projection_is_invariant(label, case):
    s, g = case.build()
    q = dyn_quotient(s, g)
    for h in g.elements:
        assert np.array_equal(q.class_of[h], q.class_of)
    assert is_invariant_map(g, q.class_of) is None
    assert cu_log(q).entries


def test_symmetric_lattice_power_classes_are_multisets():
    s = make_fixture("PROD(LAT(2),LAT(2))")
    g = validate_action(s, [coordinate_permutation([4, 4], [1, 0])])
    q = dyn_quotient(s, g)
    # elements in the same orbit always share a class
    for a in range(s.n):
        assert len({int(q.class_of[b]) for b in g.orbit(a)}) == 1
    assert q.quotient.n <= 10


@pytest.mark.parametrize("k", [1, 2, 3])
def test_universal_property_for_addition(k):
    s, g = flagship_case(k)
    t = make_fixture(f"NBAR({k})")
    add = WMorphism(s, t, [min(x + y, k) for x, y in itertools.product(range(k + 1), repeat=2)])
    rep = universal_property_check(s, g, add)
    assert rep.ok and rep["injective"].status == "yes" and rep["order_embedding"].status == "yes"
    fac = induced_map(s, g, add)
    assert len(set(fac.morphism.map.tolist())) == k + 1


@pytest.mark.parametrize("label,case", CASES)
def test_universal_property_for_projection_and_zero(label, case):
    s, g = case.build()
    q = dyn_quotient(s, g)
    rep = universal_property_check(s, g, q.projection)
    assert rep.ok and rep["injective"].status == "yes"
    one = make_fixture("NBAR(1)")
    zero = WMorphism(s, one, np.zeros(s.n, dtype=np.intp))
    rep0 = universal_property_check(s, g, zero)
    assert rep0.ok
    assert rep0["injective"].status == ("yes" if dyn_quotient(s, g).quotient.n == 1 else "no")
    assert set(induced_map(s, g, zero).morphism.map.tolist()) == {0}


def test_non_invariant_morphism_is_rejected():
    s, g = flagship_case(1)
    t = make_fixture("NBAR(1)")
    first = WMorphism(s, t, [x for x, _ in itertools.product(range(2), repeat=2)])
    with pytest.raises(PreconditionError):
        universal_property_check(s, g, first)
    with pytest.raises(PreconditionError):
        induced_map(s, g, first)


def test_orbit_ideal_examples():
    s, g = flagship_case(1)
    assert orbit_ideal(s, g, pos(1, 1, 0)) == Ideal.of(range(4))
    assert is_minimal(s, g)
    assert not is_simple(s)
    assert orbit_ideal(s, g, s.zero) == closure(s, Ideal.of([s.zero]))


@pytest.mark.parametrize("kind", ["NBAR(2)", "LAT(2)", "PROD(NBAR(1),NBAR(1))", "GHOST(1)", "NINF(1)"])
def test_trivial_orbit_ideal_is_principal(kind):
    s = make_fixture(kind)
    g = trivial_action(s)
    for a in range(s.n):
        assert orbit_ideal(s, g, a) == principal(s, a)
    assert is_minimal(s, g) == is_simple(s)


@pytest.mark.parametrize("label,case", CASES)
def test_orbit_ideal_is_least_invariant_closed_ideal(label, case):
    s, g = case.build()
    inv = invariant_closed_ideals(s, g)
    assert all(is_invariant_set(g, i.members) for i in inv)
    assert {i.members for i in inv} <= {i.members for i in enumerate_ideals(s, closed_only=True)}
    for a in range(s.n):
        i = orbit_ideal(s, g, a)
        assert i in inv
        assert all(i <= j for j in inv if a in j)
        assert invariant_ideal_generated(s, g, [a]) == i


def test_ideal_compat_examples():
    s, g = flagship_case(2)
    for members in ([s.zero], range(s.n)):
        assert dyn_ideal_compat_check(s, g, Ideal.of(members)).ok
    i = invariant_ideal_generated(s, g, [pos(2, 1, 1)])
    assert dyn_ideal_compat_check(s, g, i).ok
    with pytest.raises(PreconditionError):
        dyn_ideal_compat_check(s, g, Ideal.of([s.zero, pos(2, 1, 0)]))


@pytest.mark.parametrize("label,case", CASES)
def test_induced_action_on_ideal_quotient(label, case):
    from ordcalc.ideals import pair_of_ideal
    from ordcalc.quotients import quotient

    s, g = case.build()
    for i in invariant_closed_ideals(s, g):
        q = quotient(s, pair_of_ideal(s, i))
        h = induced_action(q, g)
        assert h.size == q.quotient.n
        for row in g.elements:
            assert any(np.array_equal(q.class_of[row], hr[q.class_of]) for hr in h.elements)


@given(case=st.sampled_from(ACTION_CORPUS))
def test_minimal_iff_quotient_simple(case):
    s, g = case.build()
    assert is_minimal(s, g) == is_simple(dyn_quotient(s, g).quotient)


def test_dyn_pair_rejects_mismatched_action():
    s, g = flagship_case(1)
    with pytest.raises(ValueError):
        dyn_pair(make_fixture("NBAR(2)"), g)
