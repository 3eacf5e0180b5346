from __future__ import annotations

"""
JSON documents read and written by the command line.

- TensorDocument: structure constants on disk (dim, basis_names, table, unity_index, provenance).
- ReportDocument: the result of classify / verify / shortcut, re-parseable without loss.

Numbers are written with Python's shortest round-trip float repr; non-finite residuals are
written as the strings "inf", "-inf" or "nan".
"""

from dataclasses import dataclass
import json
import math
from numbers import Real
from typing import Any, Dict, List, Optional

import numpy as np

from project.helpers.outcome import (
    ClassificationOutcome,
    NoUnityWitness,
    NonAssociative,
    NotAlgebraicStep,
    Success,
    Witness,
    ZeroDivisor,
)
from project.libs.algebra import AlgebraError, AxiomReport, StructureTensor
from project.libs.linalg import Tolerance

TENSOR_FIELDS = ("dim", "basis_names", "table", "unity_index", "provenance")


class DocumentError(Exception):
    """A malformed document; field names the offending JSON field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


def _encode_float(value: float):
    value = float(value)
    if math.isfinite(value):
        return value
    return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")


def _decode_float(value) -> float:
    # accepts the string forms written by _encode_float
    return float(value)


def _encode_vector(vec) -> List[float]:
    return [float(v) for v in np.asarray(vec, dtype=float).reshape(-1)]


@dataclass(frozen=True)
class TensorDocument:
    dim: int
    table: List[List[List[float]]]
    basis_names: Optional[List[str]] = None
    unity_index: Optional[int] = None
    provenance: Optional[Dict[str, Any]] = None

    @classmethod
    def from_dict(cls, data: Any) -> "TensorDocument":
        """
        Validate a decoded JSON object.

        Raises:
            DocumentError: naming the first offending field.
        """
        if not isinstance(data, dict):
            raise DocumentError("<root>", "expected a JSON object")
        unknown = sorted(set(data) - set(TENSOR_FIELDS))
        if unknown:
            raise DocumentError(unknown[0], "unknown field")

        if "dim" not in data:
            raise DocumentError("dim", "missing")
        dim = data["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise DocumentError("dim", f"expected a positive integer, got {dim!r}")

        if "table" not in data:
            raise DocumentError("table", "missing")
        table = data["table"]
        if not isinstance(table, list) or len(table) != dim:
            raise DocumentError("table", f"expected {dim} rows")
        for i, plane in enumerate(table):
            if not isinstance(plane, list) or len(plane) != dim:
                raise DocumentError(f"table[{i}]", f"expected {dim} entries")
            for j, row in enumerate(plane):
                if not isinstance(row, list) or len(row) != dim:
                    raise DocumentError(f"table[{i}][{j}]", f"expected {dim} entries")
                for k, value in enumerate(row):
                    if not _is_number(value) or not math.isfinite(value):
                        raise DocumentError(f"table[{i}][{j}][{k}]", f"expected a finite number, got {value!r}")

        names = data.get("basis_names")
        if names is not None:
            if not isinstance(names, list) or len(names) != dim or not all(isinstance(n, str) for n in names):
                raise DocumentError("basis_names", f"expected {dim} strings")

        unity = data.get("unity_index")
        if unity is not None:
            if not isinstance(unity, int) or isinstance(unity, bool) or not 0 <= unity < dim:
                raise DocumentError("unity_index", f"expected an integer in 0..{dim - 1}, got {unity!r}")

        provenance = data.get("provenance")
        if provenance is not None and not isinstance(provenance, dict):
            raise DocumentError("provenance", "expected a JSON object")

        return cls(
            dim=dim,
            table=[[[float(v) for v in row] for row in plane] for plane in table],
            basis_names=list(names) if names is not None else None,
            unity_index=unity,
            provenance=dict(provenance) if provenance is not None else None,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Fields in the fixed order dim, basis_names, table, unity_index, provenance; unset ones omitted."""
        out: Dict[str, Any] = {"dim": self.dim}
        if self.basis_names is not None:
            out["basis_names"] = list(self.basis_names)
        out["table"] = [[[float(v) for v in row] for row in plane] for plane in self.table]
        if self.unity_index is not None:
            out["unity_index"] = self.unity_index
        if self.provenance is not None:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def loads(cls, text: str) -> "TensorDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError("<json>", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
        except RecursionError as e:
            raise DocumentError("<json>", "nesting too deep") from e
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "TensorDocument":
        """
        Raises:
            DocumentError: if the file is not UTF-8 or not a valid tensor document.
            OSError: if the file cannot be read.
        """
        with open(path, "rb") as f:
            raw = f.read()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DocumentError("<json>", f"not UTF-8: invalid byte at position {e.start}") from e
        return cls.loads(text)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_tensor(self) -> StructureTensor:
        """
        Raises:
            DocumentError: if the constants do not form a valid tensor (dimension cap, false unity).
        """
        try:
            return StructureTensor(
                constants=np.array(self.table, dtype=float),
                basis_names=tuple(self.basis_names or ()),
                unity_index=self.unity_index,
                provenance=self.provenance or {},
            )
        except AlgebraError as e:
            field_name = "unity_index" if self.unity_index is not None and "unity" in str(e) else "dim"
            raise DocumentError(field_name, str(e)) from e

    @classmethod
    def from_tensor(cls, T: StructureTensor) -> "TensorDocument":
        return cls(
            dim=T.dim,
            table=T.constants.tolist(),
            basis_names=list(T.basis_names),
            unity_index=T.unity_index,
            provenance=dict(T.provenance) if T.provenance else None,
        )


def witness_to_dict(witness: Witness) -> Dict[str, Any]:
    out: Dict[str, Any] = {"kind": witness.kind}
    if isinstance(witness, ZeroDivisor):
        out["a"] = _encode_vector(witness.a)
        out["b"] = _encode_vector(witness.b)
    elif isinstance(witness, NonAssociative):
        out["triple"] = list(witness.triple)
    elif isinstance(witness, NotAlgebraicStep):
        out["detail"] = witness.detail
        if witness.pair is not None:
            out["pair"] = [_encode_vector(witness.pair[0]), _encode_vector(witness.pair[1])]
    out["residual"] = _encode_float(witness.residual)
    return out


def _with_basis_names(T: StructureTensor, witness: Dict[str, Any]) -> Dict[str, Any]:
    if witness.get("kind") == "NonAssociative":
        witness["names"] = [T.basis_names[t] for t in witness["triple"]]
    return witness


def axioms_to_dict(report: AxiomReport) -> Dict[str, Any]:
    return {
        "has_unity": report.has_unity,
        "unity": _encode_vector(report.unity) if report.unity is not None else None,
        "associative": report.associative,
        "worst_assoc_residual": _encode_float(report.worst_assoc_residual),
        "witness_triple": list(report.witness_triple) if report.witness_triple is not None else None,
        "threshold": _encode_float(report.threshold),
    }


@dataclass(frozen=True)
class ReportDocument:
    """
    Attributes:
        command: classify, verify or shortcut.
        outcome: R, C, H, a witness kind, or pass / fail for verify.
        dim: Dimension of the input tensor.
        tolerance: {"eps": ..., "rel": ...}.
        iso: Isomorphism matrix on success.
        residual: Homomorphism residual on success.
        witness: Witness fields on failure.
        axioms: Axiom scan, when it was run.
        timing_ms: Wall-clock time of the computation.
    """
    command: str
    outcome: str
    dim: int
    tolerance: Dict[str, float]
    iso: Optional[List[List[float]]] = None
    residual: Optional[float] = None
    witness: Optional[Dict[str, Any]] = None
    axioms: Optional[Dict[str, Any]] = None
    timing_ms: float = 0.0

    @property
    def succeeded(self) -> bool:
        return self.outcome in ("R", "C", "H", "pass")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "outcome": self.outcome,
            "dim": self.dim,
            "iso": self.iso,
            "residual": None if self.residual is None else _encode_float(self.residual),
            "witness": self.witness,
            "axioms": self.axioms,
            "tolerance": dict(self.tolerance),
            "timing_ms": self.timing_ms,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportDocument":
        for required in ("command", "outcome", "dim", "tolerance"):
            if required not in data:
                raise DocumentError(required, "missing")
        residual = data.get("residual")
        return cls(
            command=data["command"],
            outcome=data["outcome"],
            dim=int(data["dim"]),
            tolerance=dict(data["tolerance"]),
            iso=data.get("iso"),
            residual=None if residual is None else _decode_float(residual),
            witness=data.get("witness"),
            axioms=data.get("axioms"),
            timing_ms=float(data.get("timing_ms", 0.0)),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))


def report_for_outcome(
    command: str,
    T: StructureTensor,
    outcome: ClassificationOutcome,
    tol: Tolerance,
    axioms: Optional[AxiomReport] = None,
    timing_ms: float = 0.0,
) -> ReportDocument:
    tolerance = {"eps": tol.eps, "rel": tol.rel}
    axioms_dict = axioms_to_dict(axioms) if axioms is not None else None
    if isinstance(outcome, Success):
        return ReportDocument(
            command=command,
            outcome=outcome.label.value,
            dim=T.dim,
            tolerance=tolerance,
            iso=[_encode_vector(row) for row in outcome.iso],
            residual=float(outcome.residual),
            axioms=axioms_dict,
            timing_ms=timing_ms,
        )
    return ReportDocument(
        command=command,
        outcome=outcome.witness.kind,
        dim=T.dim,
        tolerance=tolerance,
        witness=_with_basis_names(T, witness_to_dict(outcome.witness)),
        axioms=axioms_dict,
        timing_ms=timing_ms,
    )


def report_for_axioms(T: StructureTensor, report: AxiomReport, tol: Tolerance, timing_ms: float = 0.0) -> ReportDocument:
    passed = report.has_unity and report.associative
    witness = None
    if not report.has_unity:
        witness = witness_to_dict(NoUnityWitness(residual=report.unity_residual))
    elif not report.associative:
        witness = _with_basis_names(
            T, witness_to_dict(NonAssociative(triple=report.witness_triple, residual=report.worst_assoc_residual))
        )
    return ReportDocument(
        command="verify",
        outcome="pass" if passed else "fail",
        dim=T.dim,
        tolerance={"eps": tol.eps, "rel": tol.rel},
        witness=witness,
        axioms=axioms_to_dict(report),
        timing_ms=timing_ms,
    )
