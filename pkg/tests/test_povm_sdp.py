import numpy as np
import pytest

from algebra.qudit import basis_ket, fourier_ket, make_rng
from errors import ContractViolation
from models import PovmSolution, PovmSubproblem
from optimizers.povm_sdp import certify, diagonal_optimum, hermitian_basis, solve_povm

from .conftest import random_hermitian


def subproblem(rewards) -> PovmSubproblem:
    rewards = np.asarray(rewards, dtype=complex)
    return PovmSubproblem(dim=rewards.shape[1], reward_operators=rewards)


def test_hermitian_basis_is_orthonormal():
    basis = hermitian_basis(3)
    gram = np.einsum("aij,bji->ab", basis, basis)
    assert np.allclose(gram, np.eye(9), atol=1e-12)


def test_zero_rewards_give_uniform_povm():
    sol = solve_povm(subproblem(np.zeros((3, 2, 2))))
    assert sol.primal_value == 0.0
    assert np.allclose(sol.povm, np.eye(2) / 3)


def test_single_outcome_is_forced_to_identity(rng):
    r = random_hermitian(3, rng)
    sol = solve_povm(subproblem([r]))
    assert sol.primal_value == pytest.approx(np.trace(r).real, abs=1e-12)
    assert np.allclose(sol.povm[0], np.eye(3))


def test_two_state_discrimination_reaches_helstrom_bound():
    zero, plus = basis_ket(2, 0), fourier_ket(2, 0)
    rewards = [0.5 * np.outer(zero, zero.conj()), 0.5 * np.outer(plus, plus.conj())]
    sol = solve_povm(subproblem(rewards))
    assert sol.primal_value == pytest.approx(0.5 + 0.5 / np.sqrt(2.0), abs=1e-8)
    assert certify(sol, subproblem(rewards)).certified


def test_diagonal_rewards_match_analytic_oracle():
    rng = make_rng(11)
    for _ in range(50):
        dim = int(rng.integers(2, 6))
        outcomes = int(rng.integers(2, 6))
        rewards = np.array([np.diag(rng.uniform(-1.0, 1.0, dim)) for _ in range(outcomes)])
        value, _ = diagonal_optimum(rewards)
        sol = solve_povm(subproblem(rewards))
        assert abs(sol.primal_value - value) <= 1e-9


def test_random_rewards_are_certified():
    rng = make_rng(12)
    for _ in range(50):
        rewards = [random_hermitian(3, rng) for _ in range(3)]
        p = subproblem(rewards)
        sol = solve_povm(p)
        report = certify(sol, p)
        assert report.certified, report.failures
        assert 0.0 <= report.gap + 1e-12 and report.gap <= 1e-8
        assert sol.primal_value <= sol.dual_value + 1e-12


def random_subproblems(seed: int, count: int):
    rng = make_rng(seed)
    for _ in range(count):
        dim = int(rng.integers(2, 6))
        outcomes = int(rng.integers(2, 6))
        yield subproblem([random_hermitian(dim, rng) for _ in range(outcomes)])


def test_mixed_size_subproblems_are_certified():
    # includes dim 5 cases whose centering stalls at large t
    for p in random_subproblems(13, 30):
        sol = solve_povm(p)
        report = certify(sol, p)
        assert report.certified, report.failures
        assert report.gap <= 1e-8


@pytest.mark.slow
def test_many_random_subproblems_are_certified():
    for p in random_subproblems(13, 200):
        report = certify(solve_povm(p), p)
        assert report.certified, report.failures
        assert report.gap <= 1e-8


def test_tampered_povm_is_flagged(rng):
    p = subproblem([random_hermitian(3, rng) for _ in range(2)])
    sol = solve_povm(p)
    tampered = PovmSolution(
        povm=1.01 * sol.povm,
        primal_value=sol.primal_value,
        dual_value=sol.dual_value,
        dual_witness=sol.dual_witness,
    )
    report = certify(tampered, p)
    assert report.completeness_residual == pytest.approx(0.01, abs=1e-6)
    assert not report.certified
    assert report.max_residual >= 0.0099


def test_identity_shift_moves_optimum_by_dimension(rng):
    rewards = [random_hermitian(3, rng) for _ in range(3)]
    shifted = [r + 0.7 * np.eye(3) for r in rewards]
    base = solve_povm(subproblem(rewards)).primal_value
    moved = solve_povm(subproblem(shifted)).primal_value
    assert abs(moved - base - 0.7 * 3) <= 1e-9


def test_outcome_permutation_equivariance(rng):
    rewards = [random_hermitian(3, rng) for _ in range(3)]
    sol = solve_povm(subproblem(rewards))
    permuted = solve_povm(subproblem([rewards[2], rewards[0], rewards[1]]))
    assert abs(sol.primal_value - permuted.primal_value) <= 1e-9


def test_non_hermitian_rewards_are_rejected():
    with pytest.raises(ContractViolation):
        solve_povm(subproblem([np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2)]))


def test_problem_size_limits():
    with pytest.raises(ContractViolation):
        solve_povm(subproblem(np.zeros((2, 17, 17))))
    with pytest.raises(ContractViolation):
        solve_povm(subproblem(np.zeros((9, 2, 2))))
