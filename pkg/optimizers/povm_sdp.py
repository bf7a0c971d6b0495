"""Exact solver for the POVM subproblem of the see-saw.

Maximise sum_a Tr(A^a R^a) over POVMs {A^a}. The solver works on the dual

    minimise Tr Y  subject to  Y - R^a >= 0 for every outcome a,

with a log-det barrier t Tr Y - sum_a log det(Y - R^a) and damped Newton
steps. Y is stored as real coordinates in an orthonormal basis of Hermitian
matrices. At a central point sum_a (Y - R^a)^{-1} = t I, so
A^a = (Y - R^a)^{-1} / t is a POVM and the duality gap is outcomes * dim / t.
"""

import logging
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from algebra.linalg import hermitian_eig, hermitian_part, inverse_sqrt, is_hermitian, povm_residuals
from config.tolerances import (
    BARRIER_LINE_SEARCH_ALPHA,
    BARRIER_LINE_SEARCH_BETA,
    BARRIER_MAX_NEWTON_STEPS,
    BARRIER_MU_SHRINK,
    BARRIER_NEWTON_TOL,
    COMPLETENESS_TOL,
    DECOMPOSITION_TOL,
    DEGENERATE_REWARD_TOL,
    DUAL_FEASIBILITY_TOL,
    GAP_TOL,
    MAX_SDP_DIM,
    PSD_TOL,
)
from errors import ContractViolation, ConvergenceError
from models import CertificationReport, PovmSolution, PovmSubproblem

logger = logging.getLogger(__name__)

# Newton steps allowed per centering before moving on to the next t
MAX_CENTERING_STEPS = 60
MAX_BACKTRACKS = 60

# Centering stops when a Newton step no longer moves Y at this relative scale
STALL_STEP = 1e-13

# Recovery runs at every t once the predicted gap is below GAP_TOL. The best
# recovered solution returns when its gap reaches TARGET_GAP or when a larger t
# no longer improves it and it is within GAP_TOL.
TARGET_GAP = GAP_TOL / 100.0


@lru_cache(maxsize=None)
def hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal basis of d x d Hermitian matrices under Tr(A B), shape (d*d, d, d).

    Order: E_ii, then (E_ij + E_ji)/sqrt 2 and i(E_ij - E_ji)/sqrt 2 for i < j.
    """
    basis = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    r = 1.0 / np.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[i, j] = sym[j, i] = r
            anti = np.zeros((d, d), dtype=complex)
            anti[i, j] = 1j * r
            anti[j, i] = -1j * r
            basis.extend([sym, anti])
    arr = np.array(basis)
    arr.flags.writeable = False
    return arr


def solve_povm(p: PovmSubproblem) -> PovmSolution:
    """Optimal POVM with a dual witness certifying its value.

    Args:
        p: Reward operators R^a, one per outcome.

    Returns:
        PovmSolution whose certified gap is at most ``GAP_TOL``.

    Raises:
        ContractViolation: for non-Hermitian rewards or oversized problems.
        ConvergenceError: if the Newton budget runs out; carries the last gap.
    """
    dim, outcomes = p.dim, p.outcomes
    if dim > MAX_SDP_DIM:
        raise ContractViolation(f"POVM subproblems support dim <= {MAX_SDP_DIM}, got {dim}")
    if outcomes > 4 * dim:
        raise ContractViolation(f"at most {4 * dim} outcomes allowed for dim {dim}, got {outcomes}")
    for a, r in enumerate(p.reward_operators):
        if not is_hermitian(r, DECOMPOSITION_TOL):
            raise ContractViolation(f"reward operator for outcome {a} is not Hermitian")

    rewards = np.array([hermitian_part(r) for r in p.reward_operators])
    if _degenerate(rewards):
        return _uniform_solution(rewards)

    scale = max(float(np.linalg.norm(r)) for r in rewards)
    return _barrier(rewards / scale, scale)


def _degenerate(rewards: np.ndarray) -> bool:
    spread = np.max(np.abs(rewards - rewards[0]), initial=0.0)
    return rewards.shape[0] == 1 or spread <= DEGENERATE_REWARD_TOL


def _uniform_solution(rewards: np.ndarray) -> PovmSolution:
    """Every POVM is optimal when all rewards coincide; Y = R^0 closes the gap."""
    outcomes, dim = rewards.shape[0], rewards.shape[1]
    value = float(np.trace(rewards[0]).real)
    povm = np.array([np.eye(dim, dtype=complex) / outcomes] * outcomes)
    return PovmSolution(povm=povm, primal_value=value, dual_value=value, dual_witness=rewards[0])


def _barrier(rewards: np.ndarray, scale: float) -> PovmSolution:
    outcomes, dim = rewards.shape[0], rewards.shape[1]
    basis = hermitian_basis(dim)
    traces = np.einsum("kii->k", basis).real

    top = max(float(hermitian_eig(r, tol=DECOMPOSITION_TOL).eigenvalues[0]) for r in rewards)
    coords = np.zeros(dim * dim)
    coords[:dim] = top + 1.0  # Y = (max lambda_max + 1) I
    t = 1.0
    steps = 0
    best = None

    while True:
        steps = _center(coords, rewards, basis, traces, t, steps)
        predicted = outcomes * dim / t * scale
        if predicted <= GAP_TOL:
            solution = _recover(coords, rewards, basis, t, scale, steps)
            if best is None or solution.gap < best.gap:
                best = solution
            elif best.gap <= GAP_TOL:
                # recovered gap stopped shrinking with t
                return _accepted(best)
            if best.gap <= TARGET_GAP:
                return _accepted(best)
        if steps >= BARRIER_MAX_NEWTON_STEPS:
            if best is not None and best.gap <= GAP_TOL:
                return _accepted(best)
            last_gap = best.gap if best is not None else float("inf")
            raise ConvergenceError(
                f"barrier method stopped after {steps} Newton steps (last gap {last_gap:.3e})",
                last_gap=last_gap,
                iterations=steps,
            )
        t /= BARRIER_MU_SHRINK


def _accepted(solution: PovmSolution) -> PovmSolution:
    logger.debug(f"POVM subproblem solved: gap {solution.gap:.2e}, {solution.newton_steps} Newton steps")
    return solution


def _slacks(coords: np.ndarray, rewards: np.ndarray, basis: np.ndarray) -> np.ndarray:
    y = np.einsum("k,kij->ij", coords, basis)
    return y[None, :, :] - rewards


def _center(coords, rewards, basis, traces, t, steps) -> int:
    """Damped Newton on the barrier at fixed t; updates ``coords`` in place."""
    for _ in range(MAX_CENTERING_STEPS):
        if steps >= BARRIER_MAX_NEWTON_STEPS:
            break
        slacks = _slacks(coords, rewards, basis)
        factors = [np.linalg.cholesky(s) for s in slacks]
        inverses = [np.linalg.inv(s) for s in slacks]

        gradient = t * traces - sum(np.einsum("kij,ji->k", basis, inv).real for inv in inverses)
        hessian = np.zeros((len(coords), len(coords)))
        for inv in inverses:
            w = inv[None, :, :] @ basis  # (K, d, d)
            flat = w.reshape(len(coords), -1)
            flat_t = np.transpose(w, (0, 2, 1)).reshape(len(coords), -1)
            hessian += (flat @ flat_t.T).real

        # symmetric diagonal scaling of the Newton system
        diag = np.sqrt(np.maximum(np.diag(hessian), np.finfo(float).tiny))
        scaled = hessian / np.outer(diag, diag)
        direction = -np.linalg.solve(scaled, gradient / diag) / diag
        decrement = -float(gradient @ direction)
        steps += 1
        if decrement / 2.0 <= BARRIER_NEWTON_TOL:
            break

        delta_y = np.einsum("k,kij->ij", direction, basis)
        alpha = _line_search(factors, delta_y, t * float(traces @ direction), -decrement)
        if alpha * np.max(np.abs(direction)) <= STALL_STEP * (1.0 + np.max(np.abs(coords))):
            break
        coords += alpha * direction
    return steps


def _line_search(factors: List[np.ndarray], delta_y: np.ndarray, linear: float, slope: float) -> float:
    """Backtracking step length for the barrier along delta_y.

    The change of the objective is evaluated from the eigenvalues of
    L^{-1} dY L^{-H}, which avoids cancelling the large t Tr Y terms.
    """
    spectra = []
    for chol in factors:
        half = np.linalg.solve(chol, delta_y)
        m = np.linalg.solve(chol, half.conj().T)
        spectra.append(np.linalg.eigvalsh(hermitian_part(m)))
    spectrum = np.concatenate(spectra)

    alpha = 1.0
    for _ in range(MAX_BACKTRACKS):
        stretched = 1.0 + alpha * spectrum
        if np.all(stretched > 0.0):
            change = alpha * linear - float(np.sum(np.log(stretched)))
            if change <= BARRIER_LINE_SEARCH_ALPHA * alpha * slope:
                return alpha
        alpha *= BARRIER_LINE_SEARCH_BETA
    return 0.0


def _recover(coords, rewards, basis, t, scale, steps) -> PovmSolution:
    """Primal POVM from complementary slackness, renormalised to exact completeness."""
    slacks = _slacks(coords, rewards, basis)
    raw = np.array([np.linalg.inv(s) / t for s in slacks])
    root = inverse_sqrt(hermitian_part(raw.sum(axis=0)))
    povm = np.array([hermitian_part(root @ a @ root) for a in raw])

    y = np.einsum("k,kij->ij", coords, basis) * scale
    original = rewards * scale
    primal = float(sum(np.trace(a @ r).real for a, r in zip(povm, original)))
    dual = float(np.trace(y).real)
    return PovmSolution(povm=povm, primal_value=primal, dual_value=dual, dual_witness=y, newton_steps=steps)


def objective(povm: np.ndarray, p: PovmSubproblem) -> float:
    """sum_a Tr(A^a R^a)."""
    return float(np.einsum("aij,aji->", povm, p.reward_operators).real)


def certify(sol: PovmSolution, p: PovmSubproblem) -> CertificationReport:
    """Recompute feasibility residuals and the duality gap from scratch."""
    failures = []
    min_povm, completeness = povm_residuals(sol.povm)
    y = hermitian_part(sol.dual_witness)
    min_slack = min(
        float(hermitian_eig(hermitian_part(y - r), tol=DECOMPOSITION_TOL).eigenvalues[-1])
        for r in p.reward_operators
    )
    primal = objective(sol.povm, p)
    dual = float(np.trace(y).real)
    gap = dual - primal

    if min_povm < -PSD_TOL:
        failures.append(f"POVM element not PSD (min eigenvalue {min_povm:.3e})")
    if completeness > COMPLETENESS_TOL:
        failures.append(f"POVM elements do not sum to identity (residual {completeness:.3e})")
    if min_slack < -DUAL_FEASIBILITY_TOL:
        failures.append(f"dual witness infeasible (min slack eigenvalue {min_slack:.3e})")
    if gap > GAP_TOL:
        failures.append(f"duality gap {gap:.3e} above {GAP_TOL:.0e}")

    return CertificationReport(
        min_povm_eigenvalue=min_povm,
        completeness_residual=completeness,
        min_dual_slack_eigenvalue=min_slack,
        primal_value=primal,
        dual_value=dual,
        gap=gap,
        failures=failures,
    )


def diagonal_optimum(rewards: np.ndarray) -> Tuple[float, np.ndarray]:
    """Closed form for commuting diagonal rewards: each basis vector goes to its best outcome.

    Returns:
        (value, projective POVM); ties go to the lowest outcome.
    """
    diagonals = np.array([np.diag(r).real for r in rewards])  # (outcomes, dim)
    best = np.argmax(diagonals, axis=0)
    outcomes, dim = diagonals.shape
    povm = np.zeros((outcomes, dim, dim), dtype=complex)
    for k, a in enumerate(best):
        povm[a, k, k] = 1.0
    return float(diagonals.max(axis=0).sum()), povm
