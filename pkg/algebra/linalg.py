"""Dense complex matrix algebra for Hilbert spaces of dimension up to 64.

Matrices and kets are plain ``numpy`` complex arrays. Every function returns
a fresh array and never writes into its arguments.
"""

import logging
from typing import List, NamedTuple, Sequence

import numpy as np

from config.tolerances import (
    ALGEBRA_TOL,
    COMPLETENESS_TOL,
    DECOMPOSITION_TOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFFDIAG_TOL,
    MAX_EIG_DIM,
    PSD_TOL,
)
from errors import ContractViolation, ConvergenceError

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray
Ket = np.ndarray


class EigenDecomposition(NamedTuple):
    """Eigenvalues sorted descending with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def kets(self) -> List[Ket]:
        return [self.eigenvectors[:, k].copy() for k in range(self.eigenvectors.shape[1])]

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> ComplexMatrix:
    """Copy ``m`` into a square complex128 array."""
    arr = np.array(m, dtype=complex, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {arr.shape}")
    return arr


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(np.transpose(m))


def hermitian_part(m: ComplexMatrix) -> ComplexMatrix:
    return 0.5 * (m + dagger(m))


def is_hermitian(m: ComplexMatrix, tol: float = ALGEBRA_TOL) -> bool:
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        return False
    return bool(np.max(np.abs(arr - dagger(arr)), initial=0.0) <= tol)


def ket_to_density(ket: Ket) -> ComplexMatrix:
    v = np.asarray(ket, dtype=complex)
    return np.outer(v, v.conj())


def hermitian_eig(m: ComplexMatrix, tol: float = ALGEBRA_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot A[p, q] and then applies
    the real symmetric Jacobi rotation that zeroes it. Sweeps stop when the
    off-diagonal Frobenius mass falls below ``JACOBI_OFFDIAG_TOL`` (relative to
    the Frobenius norm when that exceeds one).

    Args:
        m: Hermitian matrix of dimension at most 64.
        tol: Entrywise Hermiticity tolerance for the input.

    Returns:
        EigenDecomposition with eigenvalues sorted descending. Ties keep the
        order in which the sweeps left them (stable sort).

    Raises:
        ContractViolation: if ``m`` is not Hermitian or too large.
        ConvergenceError: if the sweep cap is reached.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if n > MAX_EIG_DIM:
        raise ContractViolation(f"hermitian_eig supports dimension <= {MAX_EIG_DIM}, got {n}")
    if not is_hermitian(a, tol):
        raise ContractViolation("hermitian_eig requires a Hermitian matrix")

    a = hermitian_part(a)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = JACOBI_OFFDIAG_TOL * scale

    sweeps = 0
    while _off_diagonal_mass(a) > threshold:
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal mass {_off_diagonal_mass(a):.3e})",
                iterations=sweeps,
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)

    eigenvalues = np.real(np.diag(a)).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return EigenDecomposition(eigenvalues[order], v[:, order].copy(), sweeps)


def _off_diagonal_mass(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero a[p, q] in place with a unitary acting on coordinates p and q."""
    beta = a[p, q]
    magnitude = abs(beta)
    if magnitude == 0.0:
        return
    phase = beta / magnitude
    alpha = a[p, p].real
    gamma = a[q, q].real
    theta = 0.5 * np.arctan2(2.0 * magnitude, gamma - alpha)
    c, s = np.cos(theta), np.sin(theta)

    # Columns p and q of the unitary: (c, -s e^{-i phi}) and (s, c e^{-i phi})
    j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
    idx = [p, q]
    a[:, idx] = a[:, idx] @ j
    a[idx, :] = dagger(j) @ a[idx, :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ j


def eigenvalues(m: ComplexMatrix) -> np.ndarray:
    return hermitian_eig(m).eigenvalues


def min_eigenvalue(m: ComplexMatrix) -> float:
    return float(hermitian_eig(m).eigenvalues[-1])


def max_eigenvalue(m: ComplexMatrix) -> float:
    return float(hermitian_eig(m).eigenvalues[0])


def inverse_sqrt(m: ComplexMatrix) -> ComplexMatrix:
    """M^{-1/2} for a positive definite Hermitian matrix."""
    dec = hermitian_eig(m, tol=DECOMPOSITION_TOL)
    if dec.eigenvalues[-1] <= 0.0:
        raise ContractViolation("inverse_sqrt requires a positive definite matrix")
    vecs = dec.eigenvectors
    return (vecs / np.sqrt(dec.eigenvalues)) @ dagger(vecs)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Tensor product with (kron(A,B))[i*dB + k, j*dB + l] = A[i,j] * B[k,l]."""
    a = as_matrix(a)
    b = as_matrix(b)
    return np.kron(a, b)


def partial_trace_B(m: ComplexMatrix, dA: int, dB: int) -> ComplexMatrix:
    """Trace out the second tensor factor of an operator on C^dA (x) C^dB."""
    arr = _bipartite(m, dA, dB)
    return np.einsum("ikjk->ij", arr)


def partial_trace_A(m: ComplexMatrix, dA: int, dB: int) -> ComplexMatrix:
    """Trace out the first tensor factor of an operator on C^dA (x) C^dB."""
    arr = _bipartite(m, dA, dB)
    return np.einsum("ikil->kl", arr)


def _bipartite(m: ComplexMatrix, dA: int, dB: int) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if dA < 1 or dB < 1 or arr.shape != (dA * dB, dA * dB):
        raise ContractViolation(
            f"operator of shape {arr.shape} does not act on dimension {dA}x{dB}"
        )
    return arr.reshape(dA, dB, dA, dB)


def normalize(ket: Ket) -> Ket:
    v = np.array(ket, dtype=complex, copy=True)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ContractViolation("cannot normalize the zero vector")
    return v / norm


def povm_residuals(elements: Sequence[ComplexMatrix]) -> tuple:
    """Return (most negative eigenvalue over elements, completeness residual).

    The completeness residual is the max-entry distance of the element sum
    from the identity.
    """
    ops = np.asarray(elements, dtype=complex)
    dim = ops.shape[-1]
    worst = min(min_eigenvalue(hermitian_part(op)) for op in ops)
    residual = float(np.max(np.abs(ops.sum(axis=0) - np.eye(dim))))
    return worst, residual


def is_valid_povm(
    elements: Sequence[ComplexMatrix],
    psd_tol: float = PSD_TOL,
    completeness_tol: float = COMPLETENESS_TOL,
) -> bool:
    ops = np.asarray(elements, dtype=complex)
    if any(not is_hermitian(op, DECOMPOSITION_TOL) for op in ops):
        return False
    worst, residual = povm_residuals(ops)
    return worst >= -psd_tol and residual <= completeness_tol
