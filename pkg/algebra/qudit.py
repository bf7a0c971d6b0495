"""Qudit toolbox: clock and shift operators, Fourier kets, entangled states, randomness."""

from enum import Enum
from typing import List, Optional

import numpy as np

from errors import ContractViolation
from .linalg import ComplexMatrix, Ket, dagger, hermitian_part, inverse_sqrt, ket_to_density, normalize


class ShiftConvention(str, Enum):
    """Direction of the shift operator X.

    RAISE builds X = sum_k |k><k+1| (so X|k> = |k-1>); LOWER builds
    X = sum_k |k><k-1| (so X|k> = |k+1>).
    """

    RAISE = "raise"
    LOWER = "lower"


def mod_index(k: int, d: int) -> int:
    """Reduce a ket or outcome label modulo d (always into 0..d-1)."""
    return int(k) % d


def root_of_unity(d: int, power: int = 1) -> complex:
    """omega^power with omega = exp(2 pi i / d), exact on the unit circle for integer powers."""
    return np.exp(2j * np.pi * mod_index(power, d) / d)


def _require_dim(d: int) -> None:
    if d < 1:
        raise ContractViolation(f"dimension must be at least 1, got {d}")


def clock_operator(d: int) -> ComplexMatrix:
    """Z = sum_k omega^k |k><k|."""
    _require_dim(d)
    return np.diag([root_of_unity(d, k) for k in range(d)])


def shift_operator(d: int, conv: ShiftConvention = ShiftConvention.LOWER) -> ComplexMatrix:
    """Cyclic shift X as a permutation matrix in the requested convention."""
    _require_dim(d)
    conv = ShiftConvention(conv)
    x = np.zeros((d, d), dtype=complex)
    step = 1 if conv is ShiftConvention.RAISE else -1
    for k in range(d):
        x[k, mod_index(k + step, d)] = 1.0
    return x


def weyl_operator(d: int, shift_power: int, clock_power: int, conv: ShiftConvention) -> ComplexMatrix:
    """X^shift_power Z^clock_power (powers taken modulo d)."""
    x = np.linalg.matrix_power(shift_operator(d, conv), mod_index(shift_power, d))
    z = np.linalg.matrix_power(clock_operator(d), mod_index(clock_power, d))
    return x @ z


def basis_ket(d: int, k: int) -> Ket:
    _require_dim(d)
    v = np.zeros(d, dtype=complex)
    v[mod_index(k, d)] = 1.0
    return v


def fourier_ket(d: int, l: int) -> Ket:
    """|e_l> = d^{-1/2} sum_k omega^{kl} |k>."""
    _require_dim(d)
    if not 0 <= l < d:
        raise ContractViolation(f"Fourier index {l} outside 0..{d - 1}")
    return np.array([root_of_unity(d, k * l) for k in range(d)], dtype=complex) / np.sqrt(d)


def fourier_basis(d: int) -> np.ndarray:
    """Rows are the Fourier kets |e_0>, ..., |e_{d-1}>."""
    return np.array([fourier_ket(d, l) for l in range(d)])


def computational_measurement(d: int) -> np.ndarray:
    """Projectors |l><l| stacked along the first axis."""
    return np.array([ket_to_density(basis_ket(d, l)) for l in range(d)])


def fourier_measurement(d: int, offset: int = 0) -> np.ndarray:
    """Projectors |e_{l+offset}><e_{l+offset}| for outcome l."""
    return np.array([ket_to_density(fourier_ket(d, mod_index(l + offset, d))) for l in range(d)])


def max_entangled(d: int) -> Ket:
    """(1/sqrt d) sum_k |kk> on C^d (x) C^d."""
    _require_dim(d)
    psi = np.zeros(d * d, dtype=complex)
    for k in range(d):
        psi[k * d + k] = 1.0
    return psi / np.sqrt(d)


# Randomness

def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Counter-based generator so streams are reproducible across platforms."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """Independent streams for ``count`` workers derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def _ginibre(d: int, rng: np.random.Generator, cols: Optional[int] = None) -> np.ndarray:
    cols = d if cols is None else cols
    return (rng.standard_normal((d, cols)) + 1j * rng.standard_normal((d, cols))) / np.sqrt(2.0)


def random_unitary(d: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix.

    The diagonal of R is normalised to positive phases so the law is exactly Haar.
    """
    _require_dim(d)
    q, r = np.linalg.qr(_ginibre(d, rng))
    diag = np.diag(r)
    phases = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    return q * phases


def random_state(d: int, rng: np.random.Generator) -> Ket:
    """Haar-random pure state."""
    v = _ginibre(d, rng, 1)[:, 0]
    return normalize(v)


def random_projective_measurement(d: int, rng: np.random.Generator, outcomes: Optional[int] = None) -> np.ndarray:
    """Projectors onto the columns of a Haar-random unitary.

    With fewer outcomes than d the surplus columns are merged into the last outcome.
    """
    outcomes = d if outcomes is None else outcomes
    if outcomes < 1:
        raise ContractViolation("a measurement needs at least one outcome")
    u = random_unitary(d, rng)
    projectors = [ket_to_density(u[:, k]) for k in range(d)]
    if outcomes >= d:
        zeros = [np.zeros((d, d), dtype=complex)] * (outcomes - d)
        return np.array(projectors + zeros)
    merged = projectors[: outcomes - 1] + [sum(projectors[outcomes - 1:])]
    return np.array(merged)


def random_povm(d: int, outcomes: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank POVM: random PSD operators rescaled to sum to the identity."""
    if outcomes < 1:
        raise ContractViolation("a measurement needs at least one outcome")
    raw = []
    for _ in range(outcomes):
        g = _ginibre(d, rng)
        raw.append(g @ dagger(g))
    root = inverse_sqrt(hermitian_part(sum(raw)))
    return np.array([hermitian_part(root @ op @ root) for op in raw])
