"""Complex joint quasi-probabilities of non-commuting observables.

Core objects: the Kirkwood-Dirac transform of a density operator over two
orthonormal bases, its exact inverse, complex conditional probabilities
(weak values), a mechanical audit of the marginal / eigenstate /
orthogonality requirements for candidate joint-probability
representations, a discrete Wigner baseline that fails the orthogonality
requirement, and a von Neumann pointer simulation that recovers the
complex conditionals operationally.
"""

from .errors import (
    BadEpsilonError,
    BadRankError,
    BadSampleCountError,
    BadSlitsError,
    DegeneratePostselectionError,
    DimMismatchError,
    EvenDimensionError,
    GridTooCoarseError,
    KdqError,
    NotNormalizedError,
    SingularOverlapError,
    ValidationError,
    ZeroCouplingError,
)
from .hilbert import (
    TOL_HERM,
    TOL_IMAG,
    TOL_NORM,
    TOL_ORTHO,
    TOL_PSD,
    DensityOperator,
    LinearOperator,
    OrthonormalBasis,
    StateVector,
    basis_state,
    computational_basis,
    fourier_basis,
    make_pure_density,
    maximally_mixed,
    overlap,
    product_trace,
    random_basis,
    random_density,
    random_state,
    random_state_orthogonal_to,
    states_equal_up_to_phase,
)
from .kd import (
    TOL_OVERLAP,
    KDDistribution,
    Ordering,
    conditional_weak_value,
    kd_inverse,
    kd_marginal_a,
    kd_marginal_b,
    kd_operator,
    kd_transform,
    total_probability,
)
from .audit import (
    AuditReport,
    QuasiProbRep,
    SpanResidual,
    check_condition1,
    check_condition2,
    check_condition3,
    check_span,
    evaluate,
    kd_rep,
    make_condition2_violator,
    mixed_rep,
    span_residual,
)
from .pointer import (
    PointerConfig,
    PointerReadout,
    SweepPoint,
    coupling_sweep,
    simulate_weak_measurement,
    weak_value_estimate,
)
from .wigner import (
    WignerTable,
    condition3_violation_report,
    discrete_wigner,
    double_slit_state,
    momentum_basis,
    phase_point_operator,
    position_marginal,
    wigner_as_rep,
)

__version__ = "0.1.0"
