import networkx as nx
import numpy as np
import pytest

from ordcalc.dynamics import validate_action
from ordcalc.suites import (
    ACTION_CORPUS,
    SUITES,
    SuiteResult,
    automorphisms,
    lat_spec,
    morphism_corpus,
    oracle_fixtures,
    run_suite,
    small_posets,
)
from ordcalc.wstruct import AxiomReport, check_morphism, check_w_axioms, make_fixture


def test_poset_counts():
    # unlabelled posets on 1..4 points: 1, 2, 5, 16
    counts = [sum(1 for n, _ in small_posets(4) if n == k) for k in range(1, 5)]
    assert counts == [1, 2, 5, 16]
    for n, rels in small_posets(4):
        g = nx.DiGraph(rels)
        g.add_nodes_from(range(n))
        assert nx.is_directed_acyclic_graph(g)
        assert g.number_of_edges() == nx.transitive_closure_dag(g).number_of_edges()


def test_lat_spec_round_trips_through_fixture_grammar():
    assert lat_spec(2, ()) == "LAT(2)"
    assert lat_spec(3, ((0, 1),)) == "LAT(3;0<1)"
    assert make_fixture(lat_spec(3, ((0, 1), (0, 2)))).n == 5


def test_corpora_are_valid():
    assert all(check_w_axioms(make_fixture(k)).ok for k in oracle_fixtures())
    corpus = morphism_corpus()
    assert len(corpus) >= 20
    assert all(check_morphism(f).ok for _, f in corpus)
    assert len(ACTION_CORPUS) >= 12
    for case in ACTION_CORPUS:
        s, g = case.build()
        assert g.size == s.n


@pytest.mark.parametrize("kind,count", [("NBAR(2)", 0), ("LAT(2)", 1), ("LAT(3)", 5), ("PROD(NBAR(1),NBAR(1))", 1)])
def test_automorphism_counts(kind, count):
    s = make_fixture(kind)
    autos = automorphisms(s)
    assert len(autos) == count
    if autos:
        validate_action(s, autos)


def test_automorphism_search_limit():
    with pytest.raises(ValueError):
        automorphisms(make_fixture("PROD(NBAR(2),NBAR(2))"))


def test_suite_result_bookkeeping():
    res = SuiteResult("demo", 0)
    assert not res.ok  # nothing checked yet
    rep = AxiomReport()
    rep.record("good", True)
    rep.skip("later", "not applicable")
    rep.info("fact", False)
    res.absorb("ctx", rep)
    assert res.ok and res.checked == 1 and res.notes
    res.check("ctx", "bad", False, (np.int64(3),))
    assert not res.ok
    assert res.to_dict()["failures"] == [{"context": "ctx", "check": "bad", "witness": [3]}]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
    assert set(SUITES) == {"oracle", "minimality", "fundamental", "flagship", "galois", "dyn-ideals",
                           "completion", "comparison", "functionals"}
