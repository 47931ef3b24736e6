import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import SMALL_KINDS
from ordcalc.cli import (
    DocumentError,
    fixture_document,
    load_document,
    parse,
    resolve_ref,
    serialize,
)
from ordcalc.iso import is_isomorphism
from ordcalc.wstruct import make_fixture
from witnesses import FIXTURES, revalidate_all, run_cli

FILES = sorted(FIXTURES.glob("*.json"))


@pytest.mark.parametrize("path", FILES, ids=[p.name for p in FILES])
def test_fixture_files_round_trip(path):
    raw = path.read_bytes()
    doc = load_document(path)
    assert serialize(doc) == raw
    assert serialize(parse(serialize(doc), path.parent)) == raw


@pytest.mark.parametrize("kind", SMALL_KINDS)
def test_generated_documents_round_trip(kind):
    doc = fixture_document(kind)
    back = parse(serialize(doc))
    assert serialize(back) == serialize(doc)
    assert is_isomorphism(back.value.semigroup, make_fixture(kind), list(range(make_fixture(kind).n)))


def nbar1():
    return json.loads((FIXTURES / "nbar1.json").read_text())


def code_of(obj_or_text):
    raw = obj_or_text if isinstance(obj_or_text, str) else json.dumps(obj_or_text)
    with pytest.raises(DocumentError) as exc:
        parse(raw, FIXTURES)
    return exc.value.code


def test_parse_error_codes():
    assert code_of("{not json") == "E_JSON"
    assert code_of(b"\xff".decode("latin-1")) == "E_JSON"
    doc = nbar1()
    doc["add"] = doc["add"][:1]
    assert code_of(doc) == "E_ADD_SHAPE"
    doc = nbar1()
    doc["prec"].append(["0", "7"])
    assert code_of(doc) == "E_NAME"
    doc = nbar1()
    doc["elements"] = ["0", "0"]
    assert code_of(doc) == "E_NAME"
    doc = nbar1()
    doc["colour"] = "red"
    assert code_of(doc) == "E_SCHEMA"
    doc = nbar1()
    del doc["zero"]
    assert code_of(doc) == "E_SCHEMA"
    assert code_of({"kind": "widget"}) == "E_SCHEMA"
    assert code_of([1, 2]) == "E_SCHEMA"
    assert code_of({"kind": "relation", "on": "missing.json", "pairs": []}) == "E_REF"
    assert code_of({"kind": "relation", "on": "swap.json", "pairs": []}) == "E_REF"
    assert code_of({"kind": "relation", "on": 3, "pairs": []}) == "E_SCHEMA"


def test_bytes_input_must_be_utf8():
    with pytest.raises(DocumentError) as exc:
        parse(b"\xff\xfe")
    assert exc.value.code == "E_JSON"


def test_references_resolve_three_ways():
    a = resolve_ref("nbar2.json", FIXTURES)
    b = resolve_ref("NBAR(2)", None)
    c = resolve_ref(json.loads((FIXTURES / "nbar2.json").read_text()), None)
    assert a.same_as(b) and b.same_as(c)


def test_validate_and_exit_codes(tmp_path):
    for path in FILES:
        code, report, _ = run_cli(["validate", str(path)])
        assert code == 0, path.name
        assert report["kind"] == "report"
    assert run_cli(["validate", "NBAR(2)"])[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, report, err = run_cli(["validate", str(bad)])
    assert code == 2 and report is None and err.startswith("E_JSON")
    assert run_cli(["quotient", "NBAR(2)"])[0] == 2
    assert run_cli(["ideals", "NBAR(2)", "--invariant"])[0] == 2
    assert run_cli(["check", "--suite", "nonsense"])[0] == 2
    assert run_cli(["frobnicate"])[0] == 2
    assert run_cli(["validate", str(tmp_path / "absent.json")])[0] == 2


def test_report_is_valid_report_document(tmp_path):
    code, report, _ = run_cli(["complete", "NBAR(2)"])
    path = tmp_path / "report.json"
    path.write_text(json.dumps(report))
    assert run_cli(["validate", str(path)])[0] == 0


def test_compare_au_example():
    code, report, _ = run_cli(["compare", str(FIXTURES / "nbar2.json"), "--mode", "au"])
    assert code == 1
    assert report["result"]["witness"] == {"a": "2", "b": "1", "k": 2}
    assert run_cli(["compare", "LAT(2)", "--mode", "au"])[0] == 0


def test_flagship_on_the_command_line():
    code, report, _ = run_cli(["dyn-quotient", str(FIXTURES / "nbar2sq.json"), "--action", str(FIXTURES / "swap.json"),
                               "--expect", "NBAR(2)"])
    assert code == 0
    res = report["result"]
    assert res["class_count"] == 3 and res["group_order"] == 2
    assert sorted(len(v) for v in res["classes"].values()) == [1, 2, 6]
    assert res["isomorphism"] is not None
    code, _, _ = run_cli(["dyn-quotient", str(FIXTURES / "nbar2sq.json"), "--action", str(FIXTURES / "swap.json"),
                          "--expect", "NBAR(3)"])
    assert code == 1


def test_gen_and_quotient_commands(tmp_path):
    code, report, _ = run_cli(["gen", str(FIXTURES / "nbar2sq.json"), "--seed", str(FIXTURES / "seed_nbar2sq.json")])
    assert code == 0
    assert report["result"]["profile"]["normal"]
    pair = tmp_path / "pair.json"
    data = report["result"]["pair"]
    data["on"] = str(FIXTURES / "nbar2sq.json")
    pair.write_text(json.dumps(data))
    assert run_cli(["validate", str(pair)])[0] == 0
    code, report, _ = run_cli(["quotient", str(FIXTURES / "nbar2sq.json"), "--pair", str(pair)])
    assert code == 0
    code, report, _ = run_cli(["quotient", str(FIXTURES / "lat2.json"), "--pair", str(FIXTURES / "ideal_pair_lat2.json")])
    assert code == 0 and report["result"]["class_count"] == 2
    code, report, _ = run_cli(["quotient", "LAT(2)", "--ideal", "{0}", "--expect", "NBAR(1)"])
    assert code == 0 and report["result"]["ideal"] == ["{}", "{0}"]
    code, report, _ = run_cli(["gen", str(FIXTURES / "nbar2sq.json"), "--seed", str(FIXTURES / "seed_nbar2sq.json"),
                               "--prenormal"])
    assert code == 0


def test_ideals_complete_functionals():
    code, report, _ = run_cli(["ideals", "NBAR(3)"])
    assert code == 0 and report["result"]["simple"] and len(report["result"]["closed_ideals"]) == 2
    code, report, _ = run_cli(["ideals", str(FIXTURES / "nbar2sq.json"), "--invariant", "--action", str(FIXTURES / "swap.json")])
    assert code == 0 and report["result"]["minimal"]
    code, report, _ = run_cli(["ideals", "GHOST(1)", "--all"])
    assert len(report["result"]["ideals"]) > len(report["result"]["closed_ideals"])
    code, report, _ = run_cli(["complete", "GHOST(1)"])
    assert code == 0 and len(report["result"]["round_ideals"]) == 2
    code, report, _ = run_cli(["functionals", "NBAR(2)", "--unit", "1"])
    assert code == 0 and report["result"]["normalised_vertices"] == []
    assert {"0": "0", "1": "inf", "2": "inf"} in report["result"]["functionals"]
    code, report, _ = run_cli(["functionals", str(FIXTURES / "lat2.json"), "--unit", "{0,1}",
                               "--action", str(FIXTURES / "lat2_flip.json")])
    assert code == 0
    code, report, _ = run_cli(["functionals", "PROD(NBAR(1),NBAR(1))", "--unit", "(1,0)"])
    assert code == 1 and report["result"]["error"] == "not an order-unit"


def test_budget_exit_code(monkeypatch):
    monkeypatch.setenv("ORDCALC_BUDGET", "3")
    code, report, err = run_cli(["ideals", "NBAR(3)"])
    assert code == 2 and "E_BUDGET" in err and report is None


def test_output_is_byte_identical():
    argv = ["compare", str(FIXTURES / "nbar2sq.json"), "--mode", "dsc", "--action", str(FIXTURES / "swap.json")]
    runs = [subprocess.run([sys.executable, "-m", "ordcalc", *argv], capture_output=True) for _ in range(2)]
    assert runs[0].returncode == runs[1].returncode == 1
    assert runs[0].stdout == runs[1].stdout and runs[0].stdout


def test_every_witness_revalidates(tmp_path):
    results = revalidate_all(tmp_path)
    assert len(results) >= 10
    assert all(ok for _, ok, _ in results), [r for r in results if not r[1]]


@given(kind=st.sampled_from(SMALL_KINDS))
def test_serialize_parse_identity_on_fixture_documents(kind):
    raw = serialize(fixture_document(kind))
    assert serialize(parse(raw)) == raw


def test_check_single_suite():
    code, report, err = run_cli(["check", "--suite", "flagship"])
    assert code == 0
    assert "criterion 4 flagship: PASS" in err
    assert report["result"]["suites"][0]["criterion"] == 4


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ordcalc", "validate", str(FIXTURES / "nbar1.json")], capture_output=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "pass"
