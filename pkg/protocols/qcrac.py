"""Prepare-and-measure (sequential correlation) random access codes."""

import logging
from typing import List

import numpy as np

from algebra.linalg import is_valid_povm
from algebra.qudit import (
    ShiftConvention,
    basis_ket,
    computational_measurement,
    fourier_ket,
    fourier_measurement,
    weyl_operator,
)
from errors import ContractViolation
from models import PrepareAndMeasureProtocol, Scenario

logger = logging.getLogger(__name__)


def fourier_qcrac_protocol(d: int) -> PrepareAndMeasureProtocol:
    """The explicit 2^(d)->1 QCRAC.

    |phi_00> = (|0> + |e_0>) / sqrt(2 + 2/sqrt(d)) and
    |phi_{x0 x1}> = X^{x0} Z^{x1} |phi_00> with X in the LOWER convention.
    Bob measures the computational basis for y = 0 and the Fourier basis for y = 1.
    """
    if d < 2:
        raise ContractViolation(f"the QCRAC needs d >= 2, got {d}")
    scenario = Scenario(n=2, d=d)
    phi_00 = (basis_ket(d, 0) + fourier_ket(d, 0)) / np.sqrt(2.0 + 2.0 / np.sqrt(d))

    preparations = [
        weyl_operator(d, x0, x1, ShiftConvention.LOWER) @ phi_00
        for x0, x1 in scenario.data_strings
    ]
    measurements = [computational_measurement(d), fourier_measurement(d)]
    return PrepareAndMeasureProtocol(
        scenario=scenario,
        preparations=np.array(preparations),
        measurements=np.array(measurements),
    )


def sequential_success(p: PrepareAndMeasureProtocol) -> float:
    """Average probability that Bob's outcome G equals x_y.

    (1 / (n d^n)) sum over data strings and y of <phi_x| M_y^{x_y} |phi_x>.
    """
    n, d = p.scenario.n, p.scenario.d
    for y in range(n):
        if not is_valid_povm(p.measurements[y]):
            raise ContractViolation(f"measurement y={y} is not a valid POVM")

    # Fixed summation order keeps the result bit-stable.
    total = 0.0
    for index, data in enumerate(p.scenario.data_strings):
        phi = p.preparations[index]
        for y in range(n):
            element = p.measurements[y, data[y]]
            total += float(np.vdot(phi, element @ phi).real)
    return total * p.scenario.sequential_weight


def qcrac_analytic(d: int) -> float:
    """p^Q_{2,d} = 1/2 + 1/(2 sqrt d)."""
    if d < 2:
        raise ContractViolation(f"the QCRAC needs d >= 2, got {d}")
    return 0.5 + 0.5 / np.sqrt(d)


def transform_protocol(p: PrepareAndMeasureProtocol, u: np.ndarray) -> PrepareAndMeasureProtocol:
    """Apply one unitary to every preparation and conjugate every POVM element."""
    u = np.asarray(u, dtype=complex)
    preps = p.preparations @ u.T
    meas = np.einsum("ij,yajk,lk->yail", u, p.measurements, u.conj())
    return PrepareAndMeasureProtocol(scenario=p.scenario, preparations=preps, measurements=meas)


def preparation_overlaps(p: PrepareAndMeasureProtocol, decimals: int = 9) -> List[float]:
    """Distinct values of |<phi_j|phi_j'>| over pairs j != j', ascending."""
    gram = np.abs(p.preparations.conj() @ p.preparations.T)
    count = gram.shape[0]
    off = gram[~np.eye(count, dtype=bool)]
    return sorted(set(np.round(off, decimals).tolist()))
