import json
import math

import numpy as np
import pytest

from conftest import FIXTURE_FILES, FIXTURES_DIR, load_fixture
from project.helpers.frobenius import classify
from project.helpers.outcome import Failure, NotAlgebraicStep
from project.libs.algebra import check_axioms
from project.libs.linalg import Tolerance
from project.reporting.documents import (
    DocumentError,
    ReportDocument,
    TensorDocument,
    report_for_axioms,
    report_for_outcome,
    witness_to_dict,
)

TOL = Tolerance()


def _table(dim: int):
    return [[[0.0] * dim for _ in range(dim)] for _ in range(dim)]


def _field_of(data) -> str:
    with pytest.raises(DocumentError) as info:
        TensorDocument.from_dict(data)
    return info.value.field


@pytest.mark.parametrize("name", FIXTURE_FILES)
def test_fixture_documents_round_trip(name):
    document = TensorDocument.load(str(FIXTURES_DIR / name))
    assert TensorDocument.loads(document.dumps()) == document
    T = document.to_tensor()
    again = TensorDocument.from_tensor(T)
    assert again.table == document.table
    assert again.unity_index == document.unity_index
    assert again.basis_names == document.basis_names


def test_dumps_uses_fixed_field_order():
    document = TensorDocument(dim=1, table=[[[1.0]]], basis_names=["1"], unity_index=0, provenance={"seed": 0})
    assert list(json.loads(document.dumps())) == ["dim", "basis_names", "table", "unity_index", "provenance"]
    assert document.dumps().endswith("}\n")


def test_unset_fields_are_omitted():
    document = TensorDocument(dim=1, table=[[[2.0]]])
    assert json.loads(document.dumps()) == {"dim": 1, "table": [[[2.0]]]}
    T = document.to_tensor()
    assert T.basis_names == ("e0",)
    assert T.unity_index is None


@pytest.mark.parametrize(
    "data, field",
    [
        ([1, 2], "<root>"),
        ({"table": [[[1.0]]]}, "dim"),
        ({"dim": 0, "table": []}, "dim"),
        ({"dim": True, "table": [[[1.0]]]}, "dim"),
        ({"dim": 1}, "table"),
        ({"dim": 2, "table": [[[0.0, 0.0], [0.0, 0.0]]]}, "table"),
        ({"dim": 2, "table": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0]]]}, "table[1]"),
        ({"dim": 2, "table": [[[0.0, 0.0], [0.0]], [[0.0, 0.0], [0.0, 0.0]]]}, "table[0][1]"),
        ({"dim": 2, "table": [[[0.0, 0.0], [0.0, "x"]], [[0.0, 0.0], [0.0, 0.0]]]}, "table[0][1][1]"),
        ({"dim": 1, "table": [[[float("nan")]]]}, "table[0][0][0]"),
        ({"dim": 1, "table": [[[True]]]}, "table[0][0][0]"),
        ({"dim": 1, "table": [[[1.0]]], "basis_names": ["a", "b"]}, "basis_names"),
        ({"dim": 1, "table": [[[1.0]]], "unity_index": 1}, "unity_index"),
        ({"dim": 1, "table": [[[1.0]]], "provenance": []}, "provenance"),
        ({"dim": 1, "table": [[[1.0]]], "colour": "blue"}, "colour"),
    ],
)
def test_malformed_documents_name_the_field(data, field):
    assert _field_of(data) == field


def test_truncated_json():
    text = (FIXTURES_DIR / "h_standard.json").read_text(encoding="utf-8")
    with pytest.raises(DocumentError) as info:
        TensorDocument.loads(text[: len(text) // 2])
    assert info.value.field == "<json>"


def test_undecodable_bytes_are_a_document_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_bytes(b'{"dim": 1, "basis_names": ["\xff"], "table": [[[1.0]]]}')
    with pytest.raises(DocumentError) as info:
        TensorDocument.load(str(path))
    assert info.value.field == "<json>"
    assert "position 28" in info.value.message


def test_excessive_nesting_is_a_document_error():
    with pytest.raises(DocumentError) as info:
        TensorDocument.loads("[" * 100_000 + "]" * 100_000)
    assert info.value.field == "<json>"


def test_false_unity_is_rejected_on_conversion():
    document = TensorDocument.from_dict({"dim": 2, "table": _table(2), "unity_index": 0})
    with pytest.raises(DocumentError) as info:
        document.to_tensor()
    assert info.value.field == "unity_index"


def test_dimension_cap(monkeypatch):
    monkeypatch.setenv("FROBENIUS_MAX_DIM", "2")
    document = TensorDocument.from_dict({"dim": 3, "table": _table(3)})
    with pytest.raises(DocumentError) as info:
        document.to_tensor()
    assert info.value.field == "dim"


def test_success_report_round_trips(quaternions):
    outcome = classify(quaternions, TOL)
    report = report_for_outcome("classify", quaternions, outcome, TOL, axioms=check_axioms(quaternions, TOL),
                                timing_ms=1.5)
    assert report.succeeded
    assert report.outcome == "H"
    assert ReportDocument.loads(report.dumps()) == report
    np.testing.assert_allclose(np.array(report.iso), outcome.iso)


def test_failure_report_round_trips():
    T = load_fixture("m2r.json")
    outcome = classify(T, TOL)
    report = report_for_outcome("classify", T, outcome, TOL)
    assert not report.succeeded
    assert report.outcome == "ZeroDivisor"
    assert set(report.witness) == {"kind", "a", "b", "residual"}
    assert ReportDocument.loads(report.dumps()) == report


def test_infinite_residual_survives_round_trip():
    witness = NotAlgebraicStep(detail="did not split", residual=math.inf)
    report = report_for_outcome("classify", load_fixture("r.json"), Failure(witness), TOL)
    text = report.dumps()
    assert '"residual": "inf"' in text
    parsed = ReportDocument.loads(text)
    assert parsed == report
    assert witness_to_dict(witness)["residual"] == "inf"

    with_inf = ReportDocument(command="classify", outcome="H", dim=4, tolerance={"eps": 1e-9, "rel": 1e-9},
                              residual=math.inf)
    assert ReportDocument.loads(with_inf.dumps()).residual == math.inf


def test_witness_pair_is_serialized():
    witness = NotAlgebraicStep(detail="not scalar", residual=0.5, pair=(np.array([1.0, 0.0]), np.array([0.0, 1.0])))
    data = witness_to_dict(witness)
    assert data == {"kind": "NotAlgebraicStep", "detail": "not scalar", "pair": [[1.0, 0.0], [0.0, 1.0]],
                    "residual": 0.5}


def test_axiom_report_for_octonions():
    T = load_fixture("octonion.json")
    axioms = check_axioms(T, TOL)
    report = report_for_axioms(T, axioms, TOL)
    assert report.outcome == "fail"
    assert report.witness["kind"] == "NonAssociative"
    assert report.witness["triple"] == list(axioms.witness_triple)
    assert report.axioms["has_unity"] is True
    assert ReportDocument.loads(report.dumps()) == report


def test_axiom_report_for_zero_algebra():
    T = load_fixture("zero_algebra.json")
    report = report_for_axioms(T, check_axioms(T, TOL), TOL)
    assert report.outcome == "fail"
    assert report.witness["kind"] == "NoUnity"
    assert report.axioms["unity"] is None


def test_report_requires_core_fields():
    with pytest.raises(DocumentError) as info:
        ReportDocument.from_dict({"command": "classify", "outcome": "R", "dim": 1})
    assert info.value.field == "tolerance"
