"""Smoke tests for the groupbundle extension module."""

import json
import os

import pytest

import groupbundle as gbp


def fixture(name):
    root = os.environ.get("GB_FIXTURES", os.path.join(os.path.dirname(__file__), "..", "..", "fixtures"))
    with open(os.path.join(root, "v1", name)) as f:
        return json.load(f)


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def test_smith_normal_form_round_trip():
    m = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    u, d, v = gbp.smith_normal_form(m)
    assert matmul(matmul(u, m), v) == d
    diag = [d[i][i] for i in range(3)]
    assert all(diag[i + 1] % diag[i] == 0 for i in range(2) if diag[i])


def test_cohomology_of_the_circle():
    rep = gbp.cohomology(fixture("circle_z2_moebius.json"))
    assert rep["verdict"] == "PASS"
    assert rep["summary"] == "H1 = Z2"
    assert rep["invariant_factors"] == [2]
    assert rep["bundle_class"] == [1]


def test_bundle_iso_verdicts():
    ok = gbp.bundle_iso(fixture("circle_z2_110.json"), fixture("circle_z2_trivial.json"))
    assert ok["verdict"] == "PASS" and ok["exit_code"] == 0
    no = gbp.bundle_iso(fixture("circle_z2_100.json"), fixture("circle_z2_trivial.json"))
    assert no["verdict"] == "FAIL" and no["exit_code"] == 1
    assert no["class_a"] == [1] and no["class_b"] == [0]


def test_spectrum_of_the_diag_action():
    rep = gbp.xprod(fixture("action_diag_z2.json"), "spectrum")
    assert rep["summary"] == "2 irreps, dims [2,2], sum-of-squares 8 = dim PASS"


def test_pauli_action_is_obstructed():
    rep = gbp.verify(fixture("action_pauli.json"), "unitary-iso")
    assert rep["verdict"] == "FAIL"
    assert "OBSTRUCTED" in rep["summary"]


def test_takai_pipeline_both_signs():
    for sign in ("conj", "plain"):
        rep = gbp.verify(fixture("pointed_z3_moebius.json"), "takai", dual_sign=sign)
        assert rep["verdict"] == "PASS", rep["summary"]


def test_locunit_and_equivalence():
    rep = gbp.verify(fixture("locunit_circle_nontrivial.json"), "locunit")
    assert rep["verdict"] == "PASS"
    assert rep["class"] == [1]
    eq = gbp.verify(fixture("equivalence_circle.json"), "equivalence")
    assert eq["verdict"] == "PASS"
    assert eq["round_trip"] is True


def test_schema_errors_are_reported():
    rep = gbp.cohomology("{ not json")
    assert rep["verdict"] == "ERROR" and rep["exit_code"] == 2
    doc = fixture("circle_z2_trivial.json")
    doc["surprise"] = 1
    rep2 = gbp.cohomology(doc)
    assert rep2["verdict"] == "ERROR" and rep2["exit_code"] == 2


def test_dict_and_string_inputs_agree():
    doc = fixture("circle_z2_trivial.json")
    a = gbp.cohomology(doc)
    b = gbp.cohomology(json.dumps(doc))
    assert a == b


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
