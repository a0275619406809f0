"""Joint quasi-probability tests: cell operators, transform, inverse, weak values."""

import numpy as np
import pytest

from kdq import (
    DensityOperator,
    LinearOperator,
    Ordering,
    SingularOverlapError,
    StateVector,
    ValidationError,
    basis_state,
    computational_basis,
    conditional_weak_value,
    fourier_basis,
    kd_inverse,
    kd_marginal_a,
    kd_marginal_b,
    kd_operator,
    kd_transform,
    make_pure_density,
    maximally_mixed,
    overlap,
    product_trace,
    random_basis,
    random_density,
    total_probability,
)

SQ2 = np.sqrt(2.0)


def hadamard_basis():
    return fourier_basis(2)


def plus_state():
    return StateVector(np.array([1, 1]) / SQ2)


def i_state():
    return StateVector(np.array([1, 1j]) / SQ2)


# ---------------------------------------------------------------------------
# kd_operator


def test_kd_operator_commuting_case_is_projector():
    zero = basis_state(2, 0)
    op = kd_operator(zero, zero, Ordering.AB)
    np.testing.assert_allclose(op.matrix, np.diag([1.0, 0.0]), atol=1e-15)


def test_kd_operator_orthogonal_pair_is_zero():
    op = kd_operator(basis_state(2, 0), basis_state(2, 1), Ordering.AB)
    np.testing.assert_allclose(op.matrix, np.zeros((2, 2)), atol=1e-15)


def test_kd_operator_half_half_example():
    op = kd_operator(basis_state(2, 0), plus_state(), Ordering.AB)
    # oracle: <b|a> |b><a| built directly from outer products
    b, a = plus_state().amplitudes, basis_state(2, 0).amplitudes
    oracle = np.vdot(b, a) * np.outer(b, a.conj())
    np.testing.assert_allclose(op.matrix, oracle, atol=1e-15)
    np.testing.assert_allclose(op.matrix, np.array([[0.5, 0.0], [0.5, 0.0]]), atol=1e-15)


def test_kd_operator_adjoint_flips_ordering():
    a, b = i_state(), plus_state()
    ab = kd_operator(a, b, Ordering.AB)
    ba = kd_operator(a, b, Ordering.BA)
    np.testing.assert_allclose(ab.matrix.conj().T, ba.matrix, atol=1e-15)


def test_kd_operator_rank_at_most_one():
    a, b = i_state(), plus_state()
    s = np.linalg.svd(kd_operator(a, b, Ordering.AB).matrix, compute_uv=False)
    assert np.sum(s > 1e-12) <= 1


# ---------------------------------------------------------------------------
# kd_transform


def test_kd_transform_eigenstate_delta_structure():
    # input |0><0| over computational / hadamard bases
    dist = kd_transform(
        make_pure_density(basis_state(2, 0)), computational_basis(2), hadamard_basis()
    )
    np.testing.assert_allclose(dist.table, np.array([[0.5, 0.5], [0.0, 0.0]]), atol=1e-14)


def test_kd_transform_maximally_mixed_is_real_born_table():
    a, b = computational_basis(3), fourier_basis(3)
    dist = kd_transform(maximally_mixed(3), a, b)
    born = np.abs(b.matrix.conj().T @ a.matrix).T ** 2 / 3
    np.testing.assert_allclose(dist.table, born, atol=1e-14)
    assert np.abs(dist.table.imag).max() <= 1e-14


def test_kd_transform_circular_state_frozen_values():
    dist = kd_transform(make_pure_density(i_state()), computational_basis(2), hadamard_basis())
    expected = np.array([[(1 - 1j) / 4, (1 + 1j) / 4], [(1 + 1j) / 4, (1 - 1j) / 4]])
    np.testing.assert_allclose(dist.table, expected, atol=1e-14)
    np.testing.assert_allclose(kd_marginal_a(dist), [0.5, 0.5], atol=1e-14)
    np.testing.assert_allclose(kd_marginal_b(dist), [0.5, 0.5], atol=1e-14)


def test_kd_transform_matches_cell_operator_traces():
    # dual route: every table cell equals the product trace of its cell operator
    a, b = computational_basis(3), fourier_basis(3)
    rho = random_density(3, 2, seed=33)
    for ordering in (Ordering.AB, Ordering.BA):
        dist = kd_transform(rho, a, b, ordering)
        for i in range(3):
            for j in range(3):
                cell = product_trace(kd_operator(a.vector(i), b.vector(j), ordering), rho)
                assert dist.table[i, j] == pytest.approx(cell, abs=1e-13)


def test_marginal_examples():
    comp, had = computational_basis(2), hadamard_basis()
    dist = kd_transform(make_pure_density(basis_state(2, 0)), comp, had)
    np.testing.assert_allclose(kd_marginal_a(dist), [1.0, 0.0], atol=1e-14)
    np.testing.assert_allclose(kd_marginal_b(dist), [0.5, 0.5], atol=1e-14)
    uniform = kd_transform(maximally_mixed(4), computational_basis(4), fourier_basis(4))
    np.testing.assert_allclose(kd_marginal_a(uniform), np.full(4, 0.25), atol=1e-14)
    np.testing.assert_allclose(kd_marginal_b(uniform), np.full(4, 0.25), atol=1e-14)


def test_marginals_match_born_rule():
    for dim in range(2, 7):
        a = random_basis(dim, seed=dim)
        b = random_basis(dim, seed=100 + dim)
        rho = random_density(dim, dim, seed=200 + dim)
        dist = kd_transform(rho, a, b)
        born_a = np.real(np.diagonal(a.matrix.conj().T @ rho.matrix @ a.matrix))
        born_b = np.real(np.diagonal(b.matrix.conj().T @ rho.matrix @ b.matrix))
        np.testing.assert_allclose(kd_marginal_a(dist), born_a, atol=1e-12)
        np.testing.assert_allclose(kd_marginal_b(dist), born_b, atol=1e-12)


def test_condition1_operator_identity():
    # sum_b Pi(a,b) = P_a and sum_a Pi(a,b) = P_b for random basis pairs
    for dim in range(2, 9):
        a = random_basis(dim, seed=3 * dim)
        b = random_basis(dim, seed=3 * dim + 1)
        for i in range(dim):
            total = sum(
                kd_operator(a.vector(i), b.vector(j), Ordering.AB).matrix for j in range(dim)
            )
            assert np.abs(total - a.projector(i)).max() <= 1e-12
        for j in range(dim):
            total = sum(
                kd_operator(a.vector(i), b.vector(j), Ordering.AB).matrix for i in range(dim)
            )
            assert np.abs(total - b.projector(j)).max() <= 1e-12


def test_ordering_conjugation():
    for dim in range(2, 7):
        a = random_basis(dim, seed=7 * dim)
        b = random_basis(dim, seed=7 * dim + 1)
        rho = random_density(dim, dim, seed=7 * dim + 2)
        ab = kd_transform(rho, a, b, Ordering.AB)
        ba = kd_transform(rho, a, b, Ordering.BA)
        assert np.abs(ba.table - ab.table.conj()).max() <= 1e-12


def test_commuting_reduction_same_basis():
    for dim in (2, 4, 6):
        basis = random_basis(dim, seed=dim + 50)
        rho = random_density(dim, dim, seed=dim + 60)
        dist = kd_transform(rho, basis, basis)
        born = np.real(np.diagonal(basis.matrix.conj().T @ rho.matrix @ basis.matrix))
        off_diag = dist.table - np.diag(np.diagonal(dist.table))
        assert np.abs(off_diag).max() <= 1e-12
        np.testing.assert_allclose(np.diagonal(dist.table).real, born, atol=1e-12)
        assert np.abs(dist.table.imag).max() <= 1e-12


# ---------------------------------------------------------------------------
# kd_inverse


def test_inverse_round_trip_circular_state():
    rho = make_pure_density(i_state())
    dist = kd_transform(rho, computational_basis(2), hadamard_basis())
    rec = kd_inverse(dist)
    assert np.linalg.norm(rec.matrix - rho.matrix) <= 1e-10


@pytest.mark.parametrize("ordering", [Ordering.AB, Ordering.BA])
def test_inverse_round_trip_random_states(ordering):
    worst = 0.0
    for dim in range(2, 9):
        a, b = computational_basis(dim), fourier_basis(dim)
        for k in range(50):
            rho = random_density(dim, 1 + k % dim, seed=10_000 + 97 * dim + k)
            dist = kd_transform(rho, a, b, ordering)
            rec = kd_inverse(dist)
            worst = max(worst, float(np.linalg.norm(rec.matrix - rho.matrix)))
    assert worst <= 1e-9


def test_inverse_reproduces_table():
    # forward(inverse(dist)) == dist
    rho = random_density(4, 4, seed=77)
    a, b = computational_basis(4), fourier_basis(4)
    dist = kd_transform(rho, a, b)
    again = kd_transform(kd_inverse(dist), a, b)
    assert np.abs(again.table - dist.table).max() <= 1e-12


def test_round_trip_at_dimension_ceiling():
    # the numerics are rated up to d = 64
    dim = 64
    rho = random_density(dim, dim // 2, seed=640)
    a, b = computational_basis(dim), fourier_basis(dim)
    dist = kd_transform(rho, a, b)
    rec = kd_inverse(dist)
    assert np.linalg.norm(rec.matrix - rho.matrix) <= 1e-9


def test_inverse_singular_overlap_reports_pair():
    rho = random_density(3, 3, seed=5)
    basis = computational_basis(3)
    dist = kd_transform(rho, basis, basis)
    with pytest.raises(SingularOverlapError) as err:
        kd_inverse(dist)
    assert "a" in err.value.context and "b" in err.value.context
    a_bad, b_bad = err.value.context["a"], err.value.context["b"]
    assert a_bad != b_bad  # off-diagonal overlaps vanish in identical bases


# ---------------------------------------------------------------------------
# conditional_weak_value


def test_weak_value_no_postselection_is_expectation():
    rng = np.random.default_rng(4)
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    op = LinearOperator(h)
    a = StateVector(np.linalg.qr(rng.standard_normal((3, 3)) + 0j)[0][:, 0])
    expectation = np.vdot(a.amplitudes, h @ a.amplitudes)
    assert conditional_weak_value(op, a, a) == pytest.approx(expectation, abs=1e-12)


def test_weak_value_frozen_example():
    proj0 = LinearOperator(np.array([[1, 0], [0, 0]], dtype=complex))
    # oracle: direct quotient
    num = np.vdot(i_state().amplitudes, proj0.matrix @ plus_state().amplitudes)
    den = overlap(i_state(), plus_state())
    assert num / den == pytest.approx((1 + 1j) / 2, abs=1e-14)
    got = conditional_weak_value(proj0, plus_state(), i_state())
    assert got == pytest.approx((1 + 1j) / 2, abs=1e-13)


def test_weak_value_identity_is_one():
    a = plus_state()
    b = i_state()
    got = conditional_weak_value(LinearOperator(np.eye(2)), a, b)
    assert got == pytest.approx(1.0, abs=1e-13)


def test_weak_value_singular_overlap():
    proj0 = LinearOperator(np.array([[1, 0], [0, 0]], dtype=complex))
    with pytest.raises(SingularOverlapError):
        conditional_weak_value(proj0, basis_state(2, 0), basis_state(2, 1))


# ---------------------------------------------------------------------------
# total_probability


def test_total_probability_identity():
    rho = random_density(4, 4, seed=8)
    got = total_probability(
        LinearOperator(np.eye(4)), rho, computational_basis(4), fourier_basis(4)
    )
    assert got == pytest.approx(1.0, abs=1e-12)


def test_total_probability_projector_example():
    rho = make_pure_density(plus_state())
    proj0 = LinearOperator(np.array([[1, 0], [0, 0]], dtype=complex))
    got = total_probability(proj0, rho, computational_basis(2), hadamard_basis())
    assert got == pytest.approx(product_trace(proj0, rho), abs=1e-13)
    assert got == pytest.approx(0.5, abs=1e-13)


def test_total_probability_matches_direct_trace():
    worst = 0.0
    for dim in range(2, 7):
        a, b = computational_basis(dim), fourier_basis(dim)
        for k in range(20):
            rng = np.random.default_rng(500 * dim + k)
            v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            v /= np.linalg.norm(v)
            m_op = LinearOperator(np.outer(v, v.conj()))
            rho = random_density(dim, dim, seed=600 * dim + k)
            diff = abs(total_probability(m_op, rho, a, b) - product_trace(m_op, rho))
            worst = max(worst, diff)
    assert worst <= 1e-10


def test_total_probability_real_for_hermitian():
    rng = np.random.default_rng(6)
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = h + h.conj().T
    rho = random_density(3, 3, seed=61)
    got = total_probability(LinearOperator(h), rho, computational_basis(3), fourier_basis(3))
    assert abs(got.imag) <= 1e-10


# ---------------------------------------------------------------------------
# distribution validation


def test_distribution_rejects_bad_total():
    a, b = computational_basis(2), hadamard_basis()
    from kdq import KDDistribution

    with pytest.raises(ValidationError):
        KDDistribution(a, b, Ordering.AB, np.array([[0.5, 0.5], [0.5, 0.5]]))


def test_distribution_rejects_imaginary_row_sums():
    a, b = computational_basis(2), hadamard_basis()
    from kdq import KDDistribution

    table = np.array([[0.5 + 0.1j, 0.5], [0.0, 0.0 - 0.1j]])
    with pytest.raises(ValidationError):
        KDDistribution(a, b, Ordering.AB, table)
