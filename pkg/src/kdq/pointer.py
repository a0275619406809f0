"""Idealized von Neumann pointer simulation of a weak measurement.

A single 1-D Gaussian pointer is coupled to a projector: the projected
component of the system has its pointer translated by the coupling g, the
complementary component is untouched, and the system is then post-selected
on a final state |b>.  To first order in g the conditioned pointer moves by

    <x> = g * Re(w),      <p> = 2 g Var_p * Im(w),

where w = <b|P|psi>/<b|psi> is the complex conditional probability of the
projector and Var_p = 1/(4 sigma^2) is the initial momentum variance.  The
translation is applied as a phase in the momentum representation, so it is
exact on the periodic grid and the only systematic error in the estimator
is the O(g^2) back-action, plus wraparound that is negligible for
g <= sigma/2 at the default grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import (
    DegeneratePostselectionError,
    GridTooCoarseError,
    ValidationError,
    ZeroCouplingError,
)
from .hilbert import LinearOperator, StateVector, _require_same_dim
from .kd import conditional_weak_value

_PROJECTOR_TOL = 1e-10
_POSTSELECT_FLOOR = 1e-12


@dataclass(frozen=True)
class PointerConfig:
    """Pointer grid and coupling parameters.

    Positions run over [-grid_extent/2, grid_extent/2); grid_points must be
    a power of two >= 16 and the extent must leave the Gaussian tails room
    (grid_extent > 8 sigma) so wraparound is negligible.
    """

    grid_points: int = 512
    grid_extent: float = 20.0
    sigma: float = 1.0
    coupling: float = 0.1

    def __post_init__(self):
        n = self.grid_points
        if n < 16 or n & (n - 1) != 0:
            raise ValidationError(f"grid_points must be a power of two >= 16, got {n}")
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise ValidationError(f"sigma must be positive and finite, got {self.sigma}")
        if not (self.grid_extent > 8 * self.sigma and np.isfinite(self.grid_extent)):
            raise ValidationError(
                f"grid_extent must exceed 8*sigma = {8 * self.sigma:g}, got {self.grid_extent}"
            )
        if not np.isfinite(self.coupling):
            raise ValidationError(f"coupling must be finite, got {self.coupling}")

    @property
    def dx(self) -> float:
        return self.grid_extent / self.grid_points

    def positions(self) -> np.ndarray:
        return (np.arange(self.grid_points) - self.grid_points // 2) * self.dx

    def momenta(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.grid_points, d=self.dx)

    @property
    def momentum_variance(self) -> float:
        """Analytic initial momentum variance 1/(4 sigma^2)."""
        return 1.0 / (4.0 * self.sigma**2)


@dataclass(frozen=True)
class PointerReadout:
    """Post-selected pointer means plus the coupling that produced them."""

    mean_x: float
    mean_p: float
    postselect_prob: float
    coupling: float

    def __post_init__(self):
        if not -1e-12 <= self.postselect_prob <= 1.0 + 1e-12:
            raise ValidationError(
                f"post-selection probability {self.postselect_prob!r} outside [0, 1]"
            )


class SweepPoint(NamedTuple):
    coupling: float
    estimate: complex
    exact: complex
    abs_error: float
    postselect_prob: float


def _initial_gaussian(cfg: PointerConfig) -> np.ndarray:
    x = cfg.positions()
    phi = np.exp(-(x**2) / (4.0 * cfg.sigma**2)).astype(np.complex128)
    return phi / np.sqrt(np.sum(np.abs(phi) ** 2) * cfg.dx)


def _validate_projector(a_proj: LinearOperator) -> None:
    mat = a_proj.matrix
    if float(np.max(np.abs(mat - mat.conj().T))) > _PROJECTOR_TOL:
        raise ValidationError("measurement operator must be Hermitian")
    if float(np.max(np.abs(mat @ mat - mat))) > _PROJECTOR_TOL:
        raise ValidationError("measurement operator must be idempotent (a projector)")


def simulate_weak_measurement(
    psi: StateVector, a_proj: LinearOperator, b: StateVector, cfg: PointerConfig
) -> PointerReadout:
    """Couple, post-select, and read out the pointer.

    Returns the conditioned pointer's mean position, mean momentum, and the
    post-selection probability.  Raises ``GridTooCoarseError`` when the
    requested shift is below one grid cell and
    ``DegeneratePostselectionError`` when the post-selection probability
    falls under 1e-12 (the conditioned state is then undefined).
    """
    _validate_projector(a_proj)
    _require_same_dim(psi.dim, a_proj.dim)
    _require_same_dim(psi.dim, b.dim)
    g = cfg.coupling
    if g != 0.0 and abs(g) < cfg.dx:
        raise GridTooCoarseError(
            f"coupling {g:g} is below the grid spacing {cfg.dx:g}",
            coupling=g,
            dx=cfg.dx,
        )

    phi = _initial_gaussian(cfg)
    k = cfg.momenta()
    shifted = np.fft.ifft(np.fft.fft(phi) * np.exp(-1j * k * g))

    c_proj = complex(np.vdot(b.amplitudes, a_proj.matrix @ psi.amplitudes))  # <b|P|psi>
    c_rest = complex(np.vdot(b.amplitudes, psi.amplitudes)) - c_proj  # <b|(1-P)|psi>
    chi = c_proj * shifted + c_rest * phi

    weights = np.abs(chi) ** 2
    prob = float(np.sum(weights) * cfg.dx)
    if prob < _POSTSELECT_FLOOR:
        raise DegeneratePostselectionError(
            f"post-selection probability {prob:.3e} is below {_POSTSELECT_FLOOR:g}",
            postselect_prob=prob,
        )
    mean_x = float(np.sum(cfg.positions() * weights) * cfg.dx / prob)
    spectral = np.abs(np.fft.fft(chi)) ** 2
    mean_p = float(np.sum(k * spectral) / np.sum(spectral))
    return PointerReadout(mean_x, mean_p, min(prob, 1.0), g)


def weak_value_estimate(readout: PointerReadout, cfg: PointerConfig) -> complex:
    """First-order estimator: mean_x/g + i mean_p/(2 g Var_p)."""
    g = readout.coupling
    if g == 0.0:
        raise ZeroCouplingError("cannot estimate a weak value from a zero-coupling readout")
    var_p = cfg.momentum_variance
    return readout.mean_x / g + 1j * readout.mean_p / (2.0 * g * var_p)


def coupling_sweep(
    psi: StateVector,
    a_proj: LinearOperator,
    b: StateVector,
    cfg: PointerConfig,
    couplings: list[float],
) -> list[SweepPoint]:
    """Run the simulation at each coupling and compare to the exact value.

    The exact reference is the complex conditional probability
    <b|P|psi>/<b|psi>; the error column is the absolute difference.
    """
    if len(set(couplings)) != len(couplings):
        raise ValidationError("couplings must be distinct")
    if any(g == 0.0 for g in couplings):
        raise ZeroCouplingError("couplings must be nonzero")
    if not couplings:
        return []
    # simulate before touching the exact reference, so a vanishing
    # post-selection probability surfaces as the degenerate-readout error
    # rather than as a singular overlap in the comparison column
    readouts = [
        simulate_weak_measurement(psi, a_proj, b, replace(cfg, coupling=g)) for g in couplings
    ]
    exact = conditional_weak_value(a_proj, psi, b)
    points = []
    for readout in readouts:
        est = weak_value_estimate(readout, cfg)
        points.append(
            SweepPoint(readout.coupling, est, exact, abs(est - exact), readout.postselect_prob)
        )
    return points
