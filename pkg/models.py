from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, root_validator, validator

from config.tolerances import ALGEBRA_TOL, COMPLETENESS_TOL


def frozen_array(value, dtype=complex) -> np.ndarray:
    """Copy ``value`` into a read-only array so models behave as values."""
    arr = np.array(value, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


class FrozenModel(BaseModel):
    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False


class Scenario(FrozenModel):
    """The pair (n, d) of an n^(d)->1 random access code."""

    n: int
    d: int

    @validator("n")
    def _n_positive(cls, v):
        if v < 1:
            raise ValueError("n must be at least 1")
        return v

    @validator("d")
    def _d_at_least_two(cls, v):
        if v < 2:
            raise ValueError("d must be at least 2")
        return v

    @property
    def key(self) -> Tuple[int, int]:
        return (self.n, self.d)

    @property
    def data_strings(self) -> List[Tuple[int, ...]]:
        """All x_0...x_{n-1} in lexicographic order (x_0 most significant)."""
        return list(product(range(self.d), repeat=self.n))

    @property
    def alice_settings(self) -> int:
        return self.d ** (self.n - 1)

    @property
    def sequential_weight(self) -> float:
        return 1.0 / (self.n * self.d ** self.n)

    @property
    def bell_weight(self) -> float:
        return 1.0 / (self.n * self.d ** (self.n - 1))

    def __str__(self) -> str:
        return f"{self.n}^({self.d})->1"


class MeasurementFamily(FrozenModel):
    """One POVM per setting, stored as an array of shape (settings, outcomes, dim, dim)."""

    operators: np.ndarray

    @validator("operators", pre=True)
    def _freeze(cls, v):
        arr = frozen_array(v)
        if arr.ndim != 4 or arr.shape[2] != arr.shape[3]:
            raise ValueError(f"operators must have shape (settings, outcomes, dim, dim), got {arr.shape}")
        return arr

    @property
    def settings(self) -> int:
        return self.operators.shape[0]

    @property
    def outcomes(self) -> int:
        return self.operators.shape[1]

    @property
    def dim(self) -> int:
        return self.operators.shape[2]

    def povm(self, setting: int) -> np.ndarray:
        return self.operators[setting]

    def is_valid(self) -> bool:
        from algebra.linalg import is_valid_povm

        return all(is_valid_povm(self.operators[s]) for s in range(self.settings))


class PrepareAndMeasureProtocol(FrozenModel):
    """Explicit table of d^n preparations and n measurements of a QCRAC."""

    scenario: Scenario
    preparations: np.ndarray  # (d^n, dim), rows in Scenario.data_strings order
    measurements: np.ndarray  # (n, d, dim, dim)

    @validator("preparations", "measurements", pre=True)
    def _freeze(cls, v):
        return frozen_array(v)

    @root_validator(skip_on_failure=True)
    def _shapes(cls, values):
        scenario, preps, meas = values["scenario"], values["preparations"], values["measurements"]
        n, d = scenario.n, scenario.d
        if preps.ndim != 2 or preps.shape[0] != d ** n:
            raise ValueError(f"expected {d ** n} preparations, got shape {preps.shape}")
        dim = preps.shape[1]
        if meas.shape != (n, d, dim, dim):
            raise ValueError(f"measurements must have shape {(n, d, dim, dim)}, got {meas.shape}")
        norms = np.sum(np.abs(preps) ** 2, axis=1)
        if np.max(np.abs(norms - 1.0)) > ALGEBRA_TOL:
            raise ValueError("every preparation must be normalized")
        return values

    @property
    def dim(self) -> int:
        return self.preparations.shape[1]

    def preparation(self, data: Tuple[int, ...]) -> np.ndarray:
        index = 0
        for dit in data:
            index = index * self.scenario.d + dit
        return self.preparations[index]


class BellRacInstance(FrozenModel):
    """The Bell functional of an n^(d)->1 EARAC.

    ``targets[x, y]`` is the value (a + b) mod d must take for Bob to decode x_y.
    """

    scenario: Scenario
    alice_settings: int
    bob_settings: int
    outcomes: int
    targets: np.ndarray

    @validator("targets", pre=True)
    def _freeze(cls, v):
        return frozen_array(v, dtype=int)

    @root_validator(skip_on_failure=True)
    def _target_shape(cls, values):
        shape = (values["alice_settings"], values["bob_settings"])
        if values["targets"].shape != shape:
            raise ValueError(f"targets must have shape {shape}")
        return values

    @property
    def weight(self) -> float:
        return self.scenario.bell_weight


class BipartiteStrategy(FrozenModel):
    """Shared pure state and both parties' measurement families."""

    state: np.ndarray
    alice: MeasurementFamily
    bob: MeasurementFamily

    @validator("state", pre=True)
    def _freeze(cls, v):
        return frozen_array(v)

    @root_validator(skip_on_failure=True)
    def _consistent(cls, values):
        state, alice, bob = values["state"], values["alice"], values["bob"]
        if state.ndim != 1 or state.shape[0] != alice.dim * bob.dim:
            raise ValueError(
                f"state of length {state.shape} does not match local dimensions {alice.dim}x{bob.dim}"
            )
        if abs(float(np.vdot(state, state).real) - 1.0) > ALGEBRA_TOL:
            raise ValueError("shared state must be normalized")
        return values

    @property
    def local_dims(self) -> Tuple[int, int]:
        return (self.alice.dim, self.bob.dim)

    @property
    def density(self) -> np.ndarray:
        return np.outer(self.state, self.state.conj())

    def is_valid(self) -> bool:
        return self.alice.is_valid() and self.bob.is_valid()


class ProbabilityTable(FrozenModel):
    """P(a, b | x, y) indexed as entries[x, y, a, b]."""

    entries: np.ndarray

    @validator("entries", pre=True)
    def _freeze(cls, v):
        arr = frozen_array(v, dtype=float)
        if arr.ndim != 4:
            raise ValueError("entries must be indexed (x, y, a, b)")
        return arr

    def normalization_residual(self) -> float:
        return float(np.max(np.abs(self.entries.sum(axis=(2, 3)) - 1.0)))

    def alice_marginals(self) -> np.ndarray:
        """P(a | x, y), indexed (x, y, a)."""
        return self.entries.sum(axis=3)

    def bob_marginals(self) -> np.ndarray:
        """P(b | x, y), indexed (x, y, b)."""
        return self.entries.sum(axis=2)


class ClassicalStrategy(FrozenModel):
    """Deterministic encoder over data strings and one decoder per dit position."""

    encoder: List[int]  # indexed like Scenario.data_strings
    decoders: List[List[int]]  # decoders[y][message] = guess


class ClassicalOptimum(FrozenModel):
    value: Fraction
    witness: ClassicalStrategy
    decoder_classes: int = 0

    @property
    def decimal(self) -> float:
        return float(self.value)


class PovmSubproblem(FrozenModel):
    """Maximise sum_a Tr(A^a R^a) over POVMs {A^a}."""

    dim: int
    reward_operators: np.ndarray  # (outcomes, dim, dim)

    @validator("reward_operators", pre=True)
    def _freeze(cls, v):
        return frozen_array(v)

    @root_validator(skip_on_failure=True)
    def _shape(cls, values):
        ops, dim = values["reward_operators"], values["dim"]
        if ops.ndim != 3 or ops.shape[1:] != (dim, dim) or ops.shape[0] < 1:
            raise ValueError(f"reward operators must have shape (outcomes, {dim}, {dim})")
        return values

    @property
    def outcomes(self) -> int:
        return self.reward_operators.shape[0]


class PovmSolution(FrozenModel):
    povm: np.ndarray
    primal_value: float
    dual_value: float
    dual_witness: np.ndarray
    newton_steps: int = 0

    @validator("povm", "dual_witness", pre=True)
    def _freeze(cls, v):
        return frozen_array(v)

    @property
    def gap(self) -> float:
        return self.dual_value - self.primal_value


class CertificationReport(FrozenModel):
    min_povm_eigenvalue: float
    completeness_residual: float
    min_dual_slack_eigenvalue: float
    primal_value: float
    dual_value: float
    gap: float
    failures: List[str] = Field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(
            max(0.0, -self.min_povm_eigenvalue),
            self.completeness_residual,
            max(0.0, -self.min_dual_slack_eigenvalue),
        )

    @property
    def certified(self) -> bool:
        return not self.failures


class SeesawConfig(FrozenModel):
    scenario: Scenario
    local_dims: Optional[Tuple[int, int]] = None
    restarts: int = 20
    max_sweeps: int = 200
    improvement_floor: float = 1e-9
    seed: int = 1
    workers: int = 1

    @validator("restarts", "workers")
    def _at_least_one(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @validator("improvement_floor")
    def _positive_floor(cls, v):
        if v <= 0:
            raise ValueError("improvement_floor must be positive")
        return v

    @property
    def dims(self) -> Tuple[int, int]:
        if self.local_dims is None:
            return (self.scenario.d, self.scenario.d)
        return self.local_dims


class SeesawResult(FrozenModel):
    best_value: float
    strategy: BipartiteStrategy
    trace: List[float]
    restart_traces: List[List[float]]
    restarts_summary: List[float]
    best_restart: int = 0


class OutcomeDistribution(FrozenModel):
    """probs[k] = probability that the decoded value equals target + k (mod d)."""

    d: int
    probs: np.ndarray

    @validator("probs", pre=True)
    def _freeze(cls, v):
        return frozen_array(v, dtype=float)

    @root_validator(skip_on_failure=True)
    def _distribution(cls, values):
        probs = values["probs"]
        if probs.shape != (values["d"],):
            raise ValueError(f"expected {values['d']} probabilities")
        if np.min(probs) < -ALGEBRA_TOL or abs(float(probs.sum()) - 1.0) > COMPLETENESS_TOL:
            raise ValueError("probs must be a probability distribution")
        return values

    @property
    def success(self) -> float:
        return float(self.probs[0])


class ReportValue(BaseModel):
    """One named number in a RunReport."""

    decimal: Optional[str] = None
    exact: Optional[str] = None
    kind: str = "computed"  # computed | reference | comparison
    note: Optional[str] = None
    error: Optional[str] = None


class RunReport(BaseModel):
    command: str
    scenario: Optional[Dict[str, int]] = None
    values: Dict[str, ReportValue] = Field(default_factory=dict)
    witness: Optional[dict] = None
    seed: Optional[int] = None
    version: str
    timing: float = 0.0

    class Config:
        # add_value fills the report as commands run
        allow_mutation = True

    def add_value(self, name: str, value: ReportValue) -> None:
        self.values[name] = value
