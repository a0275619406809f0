"""Kirkwood-Dirac complex joint quasi-probabilities.

The joint table of a state over two orthonormal bases is built from ordered
products of the basis projectors.  With ordering AB (project on a first)
the cell operator is |b><b|a><a| and the table reads

    table[a, b] = <b|a> <a|rho|b>.

The opposite ordering BA conjugates every cell.  The transform is exactly
invertible whenever all cross-basis overlaps <b|a> are nonzero, which makes
the table a complete parametrization of the density operator.
"""

from __future__ import annotations

import enum
from dataclasses import InitVar, dataclass

import numpy as np

from .errors import SingularOverlapError, ValidationError
from .hilbert import (
    TOL_IMAG,
    TOL_NORM,
    DensityOperator,
    LinearOperator,
    OrthonormalBasis,
    StateVector,
    _require_same_dim,
    overlap,
)

TOL_OVERLAP = 1e-8


class Ordering(enum.Enum):
    """Which basis projector acts first in the cell operator."""

    AB = "AB"  # project on a first: |b><b|a><a|
    BA = "BA"  # project on b first: |a><a|b><b|

    def flipped(self) -> "Ordering":
        return Ordering.BA if self is Ordering.AB else Ordering.AB


@dataclass(frozen=True, eq=False)
class KDDistribution:
    """Complex joint quasi-probability table over two bases.

    Invariants checked on construction: the complex total is 1 and every
    row/column sum is real (those sums are the single-observable
    probabilities).
    """

    basis_a: OrthonormalBasis
    basis_b: OrthonormalBasis
    ordering: Ordering
    table: np.ndarray
    tol: InitVar[float | None] = None
    tol_imag: InitVar[float | None] = None

    def __post_init__(self, tol, tol_imag):
        d = self.basis_a.dim
        _require_same_dim(d, self.basis_b.dim)
        tab = np.array(self.table, dtype=np.complex128)
        if tab.shape != (d, d):
            raise ValidationError(f"table must have shape {(d, d)}, got {tab.shape}")
        if not np.all(np.isfinite(tab)):
            raise ValidationError("table contains non-finite entries")
        norm_tol = TOL_NORM if tol is None else tol
        imag_tol = TOL_IMAG if tol_imag is None else tol_imag
        total = complex(tab.sum())
        if abs(total - 1.0) > norm_tol:
            raise ValidationError(f"table sums to {total}, expected 1", total=total)
        worst_imag = max(
            float(np.max(np.abs(tab.sum(axis=1).imag))),
            float(np.max(np.abs(tab.sum(axis=0).imag))),
        )
        if worst_imag > imag_tol:
            raise ValidationError(
                f"row/column sums have imaginary part {worst_imag:.3e}",
                worst_imag=worst_imag,
            )
        tab.setflags(write=False)
        object.__setattr__(self, "table", tab)

    @property
    def dim(self) -> int:
        return self.basis_a.dim


def kd_operator(a: StateVector, b: StateVector, ordering: Ordering = Ordering.AB) -> LinearOperator:
    """Cell operator |b><b|a><a| (AB) or |a><a|b><b| (BA)."""
    _require_same_dim(a.dim, b.dim)
    ov = overlap(b, a)  # <b|a>
    if ordering is Ordering.AB:
        mat = ov * np.outer(b.amplitudes, a.amplitudes.conj())
    else:
        mat = np.conj(ov) * np.outer(a.amplitudes, b.amplitudes.conj())
    return LinearOperator(mat)


def kd_transform(
    rho: DensityOperator,
    basis_a: OrthonormalBasis,
    basis_b: OrthonormalBasis,
    ordering: Ordering = Ordering.AB,
    tol: float | None = None,
    tol_imag: float | None = None,
) -> KDDistribution:
    """Joint quasi-probability table of ``rho`` over the two bases."""
    _require_same_dim(rho.dim, basis_a.dim)
    _require_same_dim(basis_a.dim, basis_b.dim)
    am, bm = basis_a.matrix, basis_b.matrix
    cross = bm.conj().T @ am  # cross[b, a] = <b|a>
    if ordering is Ordering.AB:
        mixed = am.conj().T @ rho.matrix @ bm  # mixed[a, b] = <a|rho|b>
        table = cross.T * mixed
    else:
        mixed = bm.conj().T @ rho.matrix @ am  # mixed[b, a] = <b|rho|a>
        table = (cross.conj() * mixed).T
    return KDDistribution(basis_a, basis_b, ordering, table, tol=tol, tol_imag=tol_imag)


def _real_marginal(
    sums: np.ndarray, axis_name: str, tol: float | None, tol_imag: float | None
) -> np.ndarray:
    tol = TOL_NORM if tol is None else tol
    tol_imag = TOL_IMAG if tol_imag is None else tol_imag
    worst_imag = float(np.max(np.abs(sums.imag)))
    if worst_imag > tol_imag:
        raise ValidationError(
            f"{axis_name} marginal has imaginary part {worst_imag:.3e}", worst_imag=worst_imag
        )
    probs = sums.real.copy()
    if float(probs.min()) < -tol:
        raise ValidationError(f"{axis_name} marginal has negative entry {probs.min():.3e}")
    if abs(float(probs.sum()) - 1.0) > tol:
        raise ValidationError(f"{axis_name} marginal sums to {probs.sum()!r}")
    return probs


def kd_marginal_a(
    dist: KDDistribution, tol: float | None = None, tol_imag: float | None = None
) -> np.ndarray:
    """Row sums of the table: the outcome probabilities of the first basis."""
    return _real_marginal(dist.table.sum(axis=1), "a", tol, tol_imag)


def kd_marginal_b(
    dist: KDDistribution, tol: float | None = None, tol_imag: float | None = None
) -> np.ndarray:
    """Column sums of the table: the outcome probabilities of the second basis."""
    return _real_marginal(dist.table.sum(axis=0), "b", tol, tol_imag)


def kd_inverse(dist: KDDistribution, tol_overlap: float = TOL_OVERLAP) -> DensityOperator:
    """Reconstruct the density operator from its joint table.

    Divides each cell by the corresponding basis overlap to recover the
    mixed matrix element, then changes basis back to the computational
    representation.  Requires every |<b|a>| to exceed ``tol_overlap``.
    """
    am, bm = dist.basis_a.matrix, dist.basis_b.matrix
    cross_t = (bm.conj().T @ am).T  # cross_t[a, b] = <b|a>
    mags = np.abs(cross_t)
    if float(mags.min()) <= tol_overlap:
        a_bad, b_bad = np.unravel_index(int(np.argmin(mags)), mags.shape)
        raise SingularOverlapError(
            f"overlap <b|a> vanishes at (a={a_bad}, b={b_bad}): "
            f"|<b|a>| = {mags[a_bad, b_bad]:.3e} <= {tol_overlap:g}",
            a=int(a_bad),
            b=int(b_bad),
            magnitude=float(mags[a_bad, b_bad]),
        )
    if dist.ordering is Ordering.AB:
        mixed = dist.table / cross_t  # mixed[a, b] = <a|rho|b>
        mat = am @ mixed @ bm.conj().T
    else:
        mixed = (dist.table / cross_t.conj()).T  # mixed[b, a] = <b|rho|a>
        mat = bm @ mixed @ am.conj().T
    return DensityOperator(mat)


def conditional_weak_value(
    m_op: LinearOperator, a: StateVector, b: StateVector, tol_overlap: float = TOL_OVERLAP
) -> complex:
    """Complex conditional probability <b|M|a> / <b|a> (the weak value of M)."""
    _require_same_dim(m_op.dim, a.dim)
    _require_same_dim(a.dim, b.dim)
    ov = overlap(b, a)
    if abs(ov) <= tol_overlap:
        raise SingularOverlapError(
            f"|<b|a>| = {abs(ov):.3e} <= {tol_overlap:g}: weak value undefined",
            magnitude=abs(ov),
        )
    num = complex(np.vdot(b.amplitudes, m_op.matrix @ a.amplitudes))
    return num / ov


def total_probability(
    m_op: LinearOperator,
    rho: DensityOperator,
    basis_a: OrthonormalBasis,
    basis_b: OrthonormalBasis,
) -> complex:
    """P(m) decomposed over the joint table: sum_ab <b|M|a><a|rho|b>.

    Uses the combined-product form, which stays finite when overlaps vanish;
    it always equals Tr(M rho).
    """
    _require_same_dim(m_op.dim, rho.dim)
    _require_same_dim(rho.dim, basis_a.dim)
    _require_same_dim(basis_a.dim, basis_b.dim)
    am, bm = basis_a.matrix, basis_b.matrix
    cond = bm.conj().T @ m_op.matrix @ am  # cond[b, a] = <b|M|a>
    mixed = am.conj().T @ rho.matrix @ bm  # mixed[a, b] = <a|rho|b>
    return complex(np.einsum("ba,ab->", cond, mixed))
