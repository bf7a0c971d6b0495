from .linalg import (
    EigenDecomposition,
    hermitian_eig,
    kron,
    partial_trace_A,
    partial_trace_B,
)
from .qudit import (
    ShiftConvention,
    clock_operator,
    fourier_ket,
    max_entangled,
    random_unitary,
    shift_operator,
)

__all__ = [
    "EigenDecomposition",
    "hermitian_eig",
    "kron",
    "partial_trace_A",
    "partial_trace_B",
    "ShiftConvention",
    "clock_operator",
    "fourier_ket",
    "max_entangled",
    "random_unitary",
    "shift_operator",
]
