"""Mechanical audit of candidate joint-probability representations.

A representation is a family of d^2 operators, one per outcome pair (a, b);
its table for a state is the product trace of each operator with the
density matrix.  The checks here decide three requirements:

* condition 1 - operator row/column sums equal the basis projectors, so
  the table's marginals reproduce single-observable probabilities;
* condition 2 - eigenstate inputs of either basis produce a table
  supported only on their own outcome;
* condition 3 - any state orthogonal to |a> (or |b>) gets joint value
  exactly zero in that row (column).

Condition 3 over *all* states of the complement is decided by one matrix
norm: over the complex field, <m|X|m> = 0 for every m in a subspace iff
the compression Q X Q of X to that subspace vanishes.  Random sampling of
complement states is kept alongside as an independent witness generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BadEpsilonError,
    BadSampleCountError,
    ValidationError,
)
from .hilbert import (
    LinearOperator,
    DensityOperator,
    OrthonormalBasis,
    _require_same_dim,
)
from .kd import Ordering, kd_operator

DEFAULT_AUDIT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuasiProbRep:
    """Candidate representation: operators[a, b] is the cell operator."""

    basis_a: OrthonormalBasis
    basis_b: OrthonormalBasis
    operators: np.ndarray  # shape (d, d, d, d), complex
    label: str = ""

    def __post_init__(self):
        d = self.basis_a.dim
        _require_same_dim(d, self.basis_b.dim)
        ops = np.array(self.operators, dtype=np.complex128)
        if ops.shape != (d, d, d, d):
            raise ValidationError(
                f"operators must have shape {(d, d, d, d)}, got {ops.shape}"
            )
        if not np.all(np.isfinite(ops)):
            raise ValidationError("operators contain non-finite entries")
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.basis_a.dim

    def operator(self, a: int, b: int) -> LinearOperator:
        return LinearOperator(self.operators[a, b])


@dataclass(frozen=True)
class AuditReport:
    """Outcome of one condition check."""

    condition: str  # "C1" | "C2" | "C3" | "Span"
    passed: bool
    worst_violation: float
    witness: str
    samples_used: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "condition": self.condition,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "witness": self.witness,
            "samples_used": self.samples_used,
            "seed": self.seed,
        }


class SpanResidual(NamedTuple):
    """Per-cell distance to span{P_b P_a, P_a P_b}; degenerate marks <b|a> ~ 0."""

    residuals: np.ndarray  # (d, d) float
    degenerate: np.ndarray  # (d, d) bool


def kd_rep(
    basis_a: OrthonormalBasis, basis_b: OrthonormalBasis, ordering: Ordering = Ordering.AB
) -> QuasiProbRep:
    """Representation built from ordered projector products."""
    _require_same_dim(basis_a.dim, basis_b.dim)
    d = basis_a.dim
    ops = np.empty((d, d, d, d), dtype=np.complex128)
    for a in range(d):
        va = basis_a.vector(a)
        for b in range(d):
            ops[a, b] = kd_operator(va, basis_b.vector(b), ordering).matrix
    return QuasiProbRep(basis_a, basis_b, ops, label=f"kd-{ordering.value.lower()}")


def mixed_rep(
    basis_a: OrthonormalBasis, basis_b: OrthonormalBasis, weight_ab: float
) -> QuasiProbRep:
    """Convex (or affine) mixture of the two orderings, cell by cell."""
    ab = kd_rep(basis_a, basis_b, Ordering.AB)
    ba = kd_rep(basis_a, basis_b, Ordering.BA)
    ops = weight_ab * ab.operators + (1.0 - weight_ab) * ba.operators
    return QuasiProbRep(basis_a, basis_b, ops, label=f"mixed:{weight_ab:g}")


def evaluate(rep: QuasiProbRep, rho: DensityOperator) -> np.ndarray:
    """Complex table: table[a, b] = Tr(operators[a, b] . rho)."""
    _require_same_dim(rep.dim, rho.dim)
    return np.einsum("abij,ji->ab", rep.operators, rho.matrix)


def _evaluate_raw(ops: np.ndarray, rho_mat: np.ndarray) -> np.ndarray:
    return np.einsum("abij,ji->ab", ops, rho_mat)


def check_condition1(rep: QuasiProbRep, tol: float = DEFAULT_AUDIT_TOL) -> AuditReport:
    """Operator marginals: sum_b Pi(a,b) = P_a and sum_a Pi(a,b) = P_b."""
    d = rep.dim
    worst = 0.0
    witness = "all operator sums match the basis projectors"
    for a in range(d):
        dev = float(np.linalg.norm(rep.operators[a].sum(axis=0) - rep.basis_a.projector(a)))
        if dev > worst:
            worst, witness = dev, f"row a={a}: ||sum_b Pi(a,b) - P_a||_F = {dev:.3e}"
    for b in range(d):
        dev = float(np.linalg.norm(rep.operators[:, b].sum(axis=0) - rep.basis_b.projector(b)))
        if dev > worst:
            worst, witness = dev, f"column b={b}: ||sum_a Pi(a,b) - P_b||_F = {dev:.3e}"
    return AuditReport("C1", worst <= tol, worst, witness, samples_used=0, seed=0)


def check_condition2(rep: QuasiProbRep, tol: float = DEFAULT_AUDIT_TOL) -> AuditReport:
    """Eigenstate inputs: forbidden cells vanish, allowed cells equal |<a|b>|^2."""
    d = rep.dim
    cross = rep.basis_b.matrix.conj().T @ rep.basis_a.matrix  # cross[b, a] = <b|a>
    born = np.abs(cross.T) ** 2  # born[a, b] = |<a|b>|^2
    worst = 0.0
    witness = "all eigenstate tables have the required delta structure"

    def _scan(table: np.ndarray, expected: np.ndarray, mask_allowed: np.ndarray, tag: str):
        nonlocal worst, witness
        forbidden = np.abs(np.where(mask_allowed, 0.0, table))
        idx = np.unravel_index(int(np.argmax(forbidden)), forbidden.shape)
        if forbidden[idx] > worst:
            worst = float(forbidden[idx])
            witness = f"{tag}: forbidden cell (a={idx[0]}, b={idx[1]}) has |{table[idx]:.3e}|"
        allowed_dev = np.abs(np.where(mask_allowed, table - expected, 0.0))
        idx = np.unravel_index(int(np.argmax(allowed_dev)), allowed_dev.shape)
        if allowed_dev[idx] > worst:
            worst = float(allowed_dev[idx])
            witness = f"{tag}: allowed cell (a={idx[0]}, b={idx[1]}) deviates by {allowed_dev[idx]:.3e}"

    rows = np.arange(d)[:, None]
    cols = np.arange(d)[None, :]
    for k in range(d):
        table = _evaluate_raw(rep.operators, rep.basis_a.projector(k))
        _scan(table, born, rows == k, f"eigenstate |A_{k}>")
    for k in range(d):
        table = _evaluate_raw(rep.operators, rep.basis_b.projector(k))
        _scan(table, born, cols == k, f"eigenstate |B_{k}>")
    return AuditReport("C2", worst <= tol, worst, witness, samples_used=0, seed=0)


def check_condition3(
    rep: QuasiProbRep,
    samples: int = 100,
    seed: int = 0,
    tol: float = DEFAULT_AUDIT_TOL,
) -> AuditReport:
    """Orthogonality zeros, decided two ways.

    Deterministic: the compression ||Q Pi(a,b) Q||_F with Q = 1 - P_a
    (and Q = 1 - P_b) must vanish; that single norm covers every state of
    the complement.  Stochastic: ``samples`` random complement states per
    row/column are evaluated directly as independent witnesses.
    """
    if samples < 1:
        raise BadSampleCountError(f"samples must be >= 1, got {samples}")
    d = rep.dim
    eye = np.eye(d)
    rng = np.random.default_rng(seed)
    worst = 0.0
    witness = "all compressions and sampled states vanish"

    def _bump(value: float, text: str):
        nonlocal worst, witness
        if value > worst:
            worst, witness = value, text

    for a in range(d):
        q = eye - rep.basis_a.projector(a)
        for b in range(d):
            dev = float(np.linalg.norm(q @ rep.operators[a, b] @ q))
            _bump(dev, f"compression ||Q_a Pi Q_a||_F = {dev:.3e} at (a={a}, b={b})")
    for b in range(d):
        q = eye - rep.basis_b.projector(b)
        for a in range(d):
            dev = float(np.linalg.norm(q @ rep.operators[a, b] @ q))
            _bump(dev, f"compression ||Q_b Pi Q_b||_F = {dev:.3e} at (a={a}, b={b})")

    def _complement_samples(v: np.ndarray) -> np.ndarray:
        out = np.empty((samples, d), dtype=np.complex128)
        n = 0
        while n < samples:
            z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            z = z - v * np.vdot(v, z)
            nrm = np.linalg.norm(z)
            if nrm > 1e-8:
                out[n] = z / nrm
                n += 1
        return out

    for a in range(d):
        m = _complement_samples(rep.basis_a.matrix[:, a])
        vals = np.abs(np.einsum("si,bij,sj->sb", m.conj(), rep.operators[a], m))
        s, b = np.unravel_index(int(np.argmax(vals)), vals.shape)
        _bump(
            float(vals[s, b]),
            f"sampled state #{s} orthogonal to |A_{a}> gives |<m|Pi|m>| = {vals[s, b]:.3e} at (a={a}, b={b})",
        )
    for b in range(d):
        m = _complement_samples(rep.basis_b.matrix[:, b])
        vals = np.abs(np.einsum("si,aij,sj->sa", m.conj(), rep.operators[:, b], m))
        s, a = np.unravel_index(int(np.argmax(vals)), vals.shape)
        _bump(
            float(vals[s, a]),
            f"sampled state #{s} orthogonal to |B_{b}> gives |<m|Pi|m>| = {vals[s, a]:.3e} at (a={a}, b={b})",
        )
    return AuditReport("C3", worst <= tol, worst, witness, samples_used=samples, seed=seed)


def span_residual(rep: QuasiProbRep, tol_overlap: float = 1e-8) -> SpanResidual:
    """Distance of each cell operator from span{P_b P_a, P_a P_b}.

    When <b|a> = 0 both products vanish and the span collapses to {0}; the
    residual is then the raw operator norm and the cell is flagged.
    """
    d = rep.dim
    cross = rep.basis_b.matrix.conj().T @ rep.basis_a.matrix
    residuals = np.zeros((d, d))
    degenerate = np.zeros((d, d), dtype=bool)
    for a in range(d):
        pa = rep.basis_a.projector(a)
        for b in range(d):
            pb = rep.basis_b.projector(b)
            basis_mats = np.stack([(pb @ pa).ravel(), (pa @ pb).ravel()], axis=1)
            x = rep.operators[a, b].ravel()
            coef, *_ = np.linalg.lstsq(basis_mats, x, rcond=None)
            residuals[a, b] = float(np.linalg.norm(x - basis_mats @ coef))
            degenerate[a, b] = abs(cross[b, a]) <= tol_overlap
    return SpanResidual(residuals, degenerate)


def check_span(rep: QuasiProbRep, tol: float = DEFAULT_AUDIT_TOL) -> AuditReport:
    """Pass iff every nondegenerate cell sits in the two-ordering span."""
    res = span_residual(rep)
    masked = np.where(res.degenerate, 0.0, res.residuals)
    a, b = np.unravel_index(int(np.argmax(masked)), masked.shape)
    worst = float(masked[a, b])
    n_degen = int(res.degenerate.sum())
    witness = f"cell (a={a}, b={b}): residual {worst:.3e}"
    if n_degen:
        witness += f" ({n_degen} degenerate cells excluded)"
    return AuditReport("Span", worst <= tol, worst, witness, samples_used=0, seed=0)


def _zero_sum_sign_pattern(d: int) -> np.ndarray:
    """Integer pattern whose every row and column sums to zero.

    Even d: checkerboard (-1)^(a+b).  Odd d: difference of the identity
    permutation pattern and a cyclic shift of it.
    """
    if d % 2 == 0:
        a = np.arange(d)
        return np.where((a[:, None] + a[None, :]) % 2 == 0, 1, -1)
    pattern = np.zeros((d, d), dtype=int)
    for a in range(d):
        pattern[a, a] += 1
        pattern[a, (a - 1) % d] -= 1
    return pattern


def make_condition2_violator(
    basis_a: OrthonormalBasis, basis_b: OrthonormalBasis, epsilon: float
) -> QuasiProbRep:
    """Marginal-preserving corruption of the projector-product family.

    Adds epsilon * s(a,b) * C to every cell, where C is a fixed traceless
    Hermitian operator (|A_0><A_1| + |A_1><A_0|) and the integer pattern s
    has zero row and column sums.  Condition 1 survives by construction;
    condition 2 fails at epsilon scale on eigenstates whose expectation of
    C is nonzero.
    """
    _require_same_dim(basis_a.dim, basis_b.dim)
    if basis_a.dim < 2:
        raise ValidationError("violator construction needs dim >= 2")
    if epsilon == 0:
        raise BadEpsilonError("epsilon must be nonzero")
    d = basis_a.dim
    a0, a1 = basis_a.matrix[:, 0], basis_a.matrix[:, 1]
    noise = np.outer(a0, a1.conj()) + np.outer(a1, a0.conj())
    signs = _zero_sum_sign_pattern(d)
    base = kd_rep(basis_a, basis_b, Ordering.AB).operators
    ops = base + epsilon * signs[:, :, None, None] * noise[None, None, :, :]
    return QuasiProbRep(basis_a, basis_b, ops, label=f"violator:{epsilon:g}")
