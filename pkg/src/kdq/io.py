"""File formats: versioned JSON schemas and CSV table exports.

Complex numbers are serialized as [re, im] pairs of decimal floats using
Python's shortest round-trip representation, so re-parsing a serialized
artifact reproduces the values bit-exactly.  Every structured document
carries a top-level ``"schema": "kdq/1"`` field.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .audit import AuditReport
from .errors import DimMismatchError, ValidationError
from .hilbert import (
    DensityOperator,
    OrthonormalBasis,
    StateVector,
    computational_basis,
    fourier_basis,
)
from .kd import KDDistribution, Ordering, kd_marginal_a, kd_marginal_b
from .pointer import SweepPoint
from .wigner import WignerTable

SCHEMA = "kdq/1"

NAMED_BASES = ("computational", "fourier", "hadamard2")


def _pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _matrix_pairs(mat: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(mat)]


def _vector_pairs(vec: np.ndarray) -> list:
    return [_pair(z) for z in np.asarray(vec)]


def _from_pair(obj, what: str) -> complex:
    if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
        raise ValidationError(f"{what}: expected a [re, im] pair, got {obj!r}")
    try:
        return complex(float(obj[0]), float(obj[1]))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what}: non-numeric entry in {obj!r}") from exc


def _complex_vector(obj, what: str) -> np.ndarray:
    if not isinstance(obj, list):
        raise ValidationError(f"{what}: expected a list of [re, im] pairs")
    return np.array([_from_pair(x, what) for x in obj], dtype=np.complex128)


def _complex_matrix(obj, what: str) -> np.ndarray:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ValidationError(f"{what}: expected nested lists of [re, im] pairs")
    return np.array([[_from_pair(x, what) for x in row] for row in obj], dtype=np.complex128)


def _check_schema(doc, what: str) -> None:
    if not isinstance(doc, dict):
        raise ValidationError(f"{what}: expected a JSON object")
    if doc.get("schema") != SCHEMA:
        raise ValidationError(
            f"{what}: missing or unsupported schema field (expected {SCHEMA!r})",
            schema=doc.get("schema"),
        )


def read_json(path: str | Path, what: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"{what}: cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what}: invalid JSON in {path}: {exc}") from exc
    _check_schema(doc, what)
    return doc


# ---------------------------------------------------------------------------
# states


def state_to_dict(state: StateVector | DensityOperator) -> dict:
    if isinstance(state, StateVector):
        return {
            "schema": SCHEMA,
            "dim": state.dim,
            "kind": "pure",
            "data": _vector_pairs(state.amplitudes),
        }
    return {
        "schema": SCHEMA,
        "dim": state.dim,
        "kind": "mixed",
        "data": _matrix_pairs(state.matrix),
    }


def state_from_dict(doc: dict, tol: float | None = None) -> StateVector | DensityOperator:
    _check_schema(doc, "state file")
    kind = doc.get("kind")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"state file: bad dim {dim!r}")
    if kind == "pure":
        amps = _complex_vector(doc.get("data"), "state file data")
        if amps.shape != (dim,):
            raise ValidationError(f"state file: data length {amps.shape} does not match dim {dim}")
        return StateVector(amps, tol=tol)
    if kind == "mixed":
        mat = _complex_matrix(doc.get("data"), "state file data")
        if mat.shape != (dim, dim):
            raise ValidationError(f"state file: data shape {mat.shape} does not match dim {dim}")
        return DensityOperator(mat, tol=tol)
    raise ValidationError(f"state file: kind must be 'pure' or 'mixed', got {kind!r}")


def load_state(path: str | Path, tol: float | None = None) -> StateVector | DensityOperator:
    return state_from_dict(read_json(path, "state file"), tol=tol)


# ---------------------------------------------------------------------------
# bases


def basis_to_dict(basis: OrthonormalBasis) -> dict:
    # rows of "unitary" are the basis vectors
    return {
        "schema": SCHEMA,
        "dim": basis.dim,
        "label": basis.label,
        "unitary": _matrix_pairs(basis.matrix.T),
    }


def basis_from_dict(doc: dict, tol: float | None = None) -> OrthonormalBasis:
    _check_schema(doc, "basis file")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"basis file: bad dim {dim!r}")
    rows = _complex_matrix(doc.get("unitary"), "basis file unitary")
    if rows.shape != (dim, dim):
        raise ValidationError(f"basis file: unitary shape {rows.shape} does not match dim {dim}")
    return OrthonormalBasis(rows.T, label=str(doc.get("label", "explicit")), tol=tol)


def resolve_basis(spec: str, dim: int, tol: float | None = None) -> OrthonormalBasis:
    """Resolve a CLI basis spec: a named basis or ``@file.json``."""
    if spec.startswith("@"):
        basis = basis_from_dict(read_json(spec[1:], "basis file"), tol=tol)
        if basis.dim != dim:
            raise DimMismatchError(
                f"basis file {spec[1:]} has dim {basis.dim}, expected {dim}",
                dims=(basis.dim, dim),
            )
        return basis
    if spec == "computational":
        return computational_basis(dim)
    if spec == "fourier":
        return fourier_basis(dim)
    if spec == "hadamard2":
        if dim != 2:
            raise DimMismatchError(f"hadamard2 basis requires dim 2, got {dim}", dims=(2, dim))
        mat = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
        return OrthonormalBasis(mat, label="hadamard2")
    raise ValidationError(
        f"unknown basis spec {spec!r}: use one of {NAMED_BASES} or @file.json"
    )


# ---------------------------------------------------------------------------
# joint tables


def kd_to_dict(dist: KDDistribution, tol: float | None = None) -> dict:
    return {
        "schema": SCHEMA,
        "dim": dist.dim,
        "ordering": dist.ordering.value,
        "basis_a": basis_to_dict(dist.basis_a),
        "basis_b": basis_to_dict(dist.basis_b),
        "table": _matrix_pairs(dist.table),
        "marginal_a": [float(x) for x in kd_marginal_a(dist, tol=tol, tol_imag=tol)],
        "marginal_b": [float(x) for x in kd_marginal_b(dist, tol=tol, tol_imag=tol)],
    }


def kd_from_dict(doc: dict, tol: float | None = None) -> KDDistribution:
    _check_schema(doc, "joint table file")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"joint table file: bad dim {dim!r}")
    try:
        ordering = Ordering(doc.get("ordering"))
    except ValueError as exc:
        raise ValidationError(
            f"joint table file: ordering must be 'AB' or 'BA', got {doc.get('ordering')!r}"
        ) from exc
    basis_a = basis_from_dict(doc.get("basis_a"), tol=tol)
    basis_b = basis_from_dict(doc.get("basis_b"), tol=tol)
    table = _complex_matrix(doc.get("table"), "joint table")
    if table.shape != (dim, dim):
        raise ValidationError(f"joint table file: table shape {table.shape} vs dim {dim}")
    return KDDistribution(basis_a, basis_b, ordering, table, tol=tol)


def load_kd(path: str | Path, tol: float | None = None) -> KDDistribution:
    return kd_from_dict(read_json(path, "joint table file"), tol=tol)


def kd_to_csv(dist: KDDistribution, tol: float | None = None) -> str:
    """Long-format table: one row per cell, with both marginals repeated."""
    marg_a = kd_marginal_a(dist, tol=tol, tol_imag=tol)
    marg_b = kd_marginal_b(dist, tol=tol, tol_imag=tol)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "b", "re", "im", "marginal_a", "marginal_b"])
    for a in range(dist.dim):
        for b in range(dist.dim):
            z = dist.table[a, b]
            writer.writerow(
                [a, b, repr(float(z.real)), repr(float(z.imag)), repr(float(marg_a[a])), repr(float(marg_b[b]))]
            )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# phase-space tables and sweeps


def wigner_to_dict(table: WignerTable, violations: list[tuple[int, int, float]] | None = None) -> dict:
    doc = {
        "schema": SCHEMA,
        "dim": table.dim,
        "table": [[float(x) for x in row] for row in table.table],
    }
    if violations is not None:
        doc["violations"] = [
            {"q": int(q), "p": int(p), "value": float(w)} for q, p, w in violations
        ]
    return doc


def wigner_to_csv(table: WignerTable) -> str:
    """Rows are positions q, columns momenta p."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["q"] + [f"p{p}" for p in range(table.dim)])
    for q in range(table.dim):
        writer.writerow([q] + [repr(float(x)) for x in table.table[q]])
    return buf.getvalue()


SWEEP_COLUMNS = ["g", "re_est", "im_est", "re_exact", "im_exact", "abs_err", "postselect_prob"]


def sweep_to_csv(points: list[SweepPoint]) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for pt in points:
        writer.writerow(
            [
                repr(float(pt.coupling)),
                repr(float(pt.estimate.real)),
                repr(float(pt.estimate.imag)),
                repr(float(pt.exact.real)),
                repr(float(pt.exact.imag)),
                repr(float(pt.abs_error)),
                repr(float(pt.postselect_prob)),
            ]
        )
    return buf.getvalue()


def report_to_json(report: AuditReport) -> str:
    return json.dumps(report.to_json_dict())
