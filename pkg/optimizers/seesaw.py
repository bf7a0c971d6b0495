"""See-saw lower bounds on the entanglement-assisted RAC value.

For fixed measurements the best shared state is the top eigenvector of the
Bell operator G. For a fixed state and one party's measurements, the other
party's problem splits into one POVM subproblem per setting. Alternating the
three updates never decreases the objective, and each restart climbs to a
local maximum from a random projective start.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from algebra.linalg import hermitian_eig, hermitian_part
from algebra.qudit import max_entangled, random_projective_measurement, random_state
from config.tolerances import MONOTONICITY_TOL
from errors import ConsistencyError, ContractViolation, ConvergenceError
from models import (
    BellRacInstance,
    BipartiteStrategy,
    MeasurementFamily,
    PovmSubproblem,
    SeesawConfig,
    SeesawResult,
)
from protocols.earac import bell_rac_value, probability_table
from .povm_sdp import objective, solve_povm

logger = logging.getLogger(__name__)

# Reported values must be realised by their witness to this accuracy
RECOMPUTE_TOL = 1e-10


def _check_families(inst: BellRacInstance, alice: MeasurementFamily, bob: MeasurementFamily) -> None:
    if alice.settings != inst.alice_settings or bob.settings != inst.bob_settings:
        raise ContractViolation(
            f"families have {alice.settings}/{bob.settings} settings, "
            f"instance needs {inst.alice_settings}/{inst.bob_settings}"
        )
    if alice.outcomes != inst.outcomes or bob.outcomes != inst.outcomes:
        raise ContractViolation(f"families must have {inst.outcomes} outcomes")


def _paired(inst: BellRacInstance, operators: np.ndarray, by_alice: bool) -> np.ndarray:
    """Partner operators that complete a success for every outcome of one party.

    With ``by_alice`` the result is indexed (x, y, a) and holds B_y^{t(x,y) - a};
    otherwise it holds A_x^{t(x,y) - b} indexed (x, y, b).
    """
    d = inst.outcomes
    targets = inst.targets
    xs, ys = targets.shape
    partner = (targets[:, :, None] - np.arange(d)[None, None, :]) % d
    if by_alice:
        return operators[np.arange(ys)[None, :, None], partner]
    return operators[np.arange(xs)[:, None, None], partner]


def bell_operator(inst: BellRacInstance, alice: MeasurementFamily, bob: MeasurementFamily) -> np.ndarray:
    """G = w sum_{x,y} sum_{a+b = t(x,y)} A_x^a (x) B_y^b, so that Tr(rho G) is the RAC value."""
    _check_families(inst, alice, bob)
    dA, dB = alice.dim, bob.dim
    bob_partner = _paired(inst, bob.operators, by_alice=True)
    g = np.einsum("xaij,xyakl->ikjl", alice.operators, bob_partner, optimize=True)
    return hermitian_part(g.reshape(dA * dB, dA * dB) * inst.weight)


def state_update(g: np.ndarray) -> np.ndarray:
    """Top eigenvector of G; degenerate eigenspaces resolve to the eigensolver's first vector."""
    return hermitian_eig(g).kets[0]


def alice_rewards(inst: BellRacInstance, state: np.ndarray, bob: MeasurementFamily, dA: int) -> np.ndarray:
    """R_x^a = w sum_y Tr_B[(I (x) B_y^{t(x,y)-a}) rho], indexed (x, a, i, j)."""
    dB = bob.dim
    rho = np.outer(state, state.conj()).reshape(dA, dB, dA, dB)
    bob_partner = _paired(inst, bob.operators, by_alice=True)
    rewards = np.einsum("xyalk,ikjl->xaij", bob_partner, rho, optimize=True) * inst.weight
    return _hermitize(rewards)


def bob_rewards(inst: BellRacInstance, state: np.ndarray, alice: MeasurementFamily, dB: int) -> np.ndarray:
    """R_y^b = w sum_x Tr_A[(A_x^{t(x,y)-b} (x) I) rho], indexed (y, b, k, l)."""
    dA = alice.dim
    rho = np.outer(state, state.conj()).reshape(dA, dB, dA, dB)
    alice_partner = _paired(inst, alice.operators, by_alice=False)
    rewards = np.einsum("xybji,ikjl->ybkl", alice_partner, rho, optimize=True) * inst.weight
    return _hermitize(rewards)


def _hermitize(ops: np.ndarray) -> np.ndarray:
    return 0.5 * (ops + np.conj(np.swapaxes(ops, -1, -2)))


def _update_family(rewards: np.ndarray, incumbent: Optional[MeasurementFamily], party: str) -> MeasurementFamily:
    """Solve one POVM subproblem per setting; keep the incumbent POVM when it is at least as good."""
    settings, _, dim, _ = rewards.shape
    updated = []
    for s in range(settings):
        sub = PovmSubproblem(dim=dim, reward_operators=rewards[s])
        try:
            solution = solve_povm(sub)
        except ConvergenceError as e:
            raise ConvergenceError(
                f"{party} setting {s}: {e}", last_gap=e.last_gap, iterations=e.iterations
            ) from e
        except ContractViolation as e:
            raise ContractViolation(f"{party} setting {s}: {e}") from e

        povm = solution.povm
        if incumbent is not None:
            current = incumbent.operators[s]
            if objective(current, sub) >= objective(povm, sub):
                povm = current
        updated.append(povm)
    return MeasurementFamily(operators=np.array(updated))


def measurement_update_alice(
    inst: BellRacInstance,
    state: np.ndarray,
    bob: MeasurementFamily,
    alice: Optional[MeasurementFamily] = None,
    dA: Optional[int] = None,
) -> MeasurementFamily:
    """Optimal Alice family for a fixed state and Bob.

    Args:
        inst: The Bell RAC instance.
        state: Shared pure state on C^dA (x) C^dB.
        bob: Bob's current family.
        alice: Alice's current family; when given, no setting gets worse.
        dA: Alice's local dimension (defaults to her current family's, then to Bob's).
    """
    dA = dA or (alice.dim if alice is not None else bob.dim)
    rewards = alice_rewards(inst, state, bob, dA)
    return _update_family(rewards, alice, "Alice")


def measurement_update_bob(
    inst: BellRacInstance,
    state: np.ndarray,
    alice: MeasurementFamily,
    bob: Optional[MeasurementFamily] = None,
    dB: Optional[int] = None,
) -> MeasurementFamily:
    """Optimal Bob family for a fixed state and Alice (mirror of ``measurement_update_alice``)."""
    dB = dB or (bob.dim if bob is not None else alice.dim)
    rewards = bob_rewards(inst, state, alice, dB)
    return _update_family(rewards, bob, "Bob")


def random_measurement_family(settings: int, outcomes: int, dim: int, rng: np.random.Generator) -> MeasurementFamily:
    """Projective measurements onto the columns of independent Haar-random unitaries."""
    ops = [random_projective_measurement(dim, rng, outcomes) for _ in range(settings)]
    return MeasurementFamily(operators=np.array(ops))


def _value(inst: BellRacInstance, state: np.ndarray, alice: MeasurementFamily, bob: MeasurementFamily) -> float:
    g = bell_operator(inst, alice, bob)
    return float(np.vdot(state, g @ state).real)


def _run_restart(job: Tuple[BellRacInstance, SeesawConfig, int, np.random.SeedSequence]):
    """One see-saw climb. Returns (value, state, alice ops, bob ops, trace)."""
    inst, cfg, index, seed_seq = job
    rng = np.random.Generator(np.random.Philox(seed_seq))
    dA, dB = cfg.dims

    alice = random_measurement_family(inst.alice_settings, inst.outcomes, dA, rng)
    bob = random_measurement_family(inst.bob_settings, inst.outcomes, dB, rng)
    warm = index == 0 and dA == dB
    state = max_entangled(dA) if warm else random_state(dA * dB, rng)

    value = _value(inst, state, alice, bob)
    trace = [value]
    started = time.time()
    for sweep in range(cfg.max_sweeps):
        previous = value
        steps = []
        if not (warm and sweep == 0):
            state = state_update(bell_operator(inst, alice, bob))
            steps.append(_value(inst, state, alice, bob))
        alice = measurement_update_alice(inst, state, bob, alice, dA)
        steps.append(_value(inst, state, alice, bob))
        bob = measurement_update_bob(inst, state, alice, bob, dB)
        steps.append(_value(inst, state, alice, bob))

        for before, after in zip([previous] + steps[:-1], steps):
            if after < before - MONOTONICITY_TOL:
                logger.warning(f"restart {index} sweep {sweep}: objective fell from {before:.12f} to {after:.12f}")
        value = steps[-1]
        trace.append(value)
        logger.debug(f"restart {index} sweep {sweep}: {value:.12f}")
        if value - previous < cfg.improvement_floor:
            break

    logger.info(f"Restart {index}: {value:.10f} after {len(trace) - 1} sweeps ({time.time() - started:.1f}s)")
    return value, state, alice.operators, bob.operators, trace


def seesaw(inst: BellRacInstance, cfg: SeesawConfig) -> SeesawResult:
    """Best see-saw value over ``cfg.restarts`` seeded restarts, with its witness strategy.

    Restart 0 starts from the maximally entangled state and keeps it for the
    first sweep. Restarts run in parallel; the best value wins and ties go to
    the lowest restart index.

    Raises:
        ConsistencyError: if the best witness does not reproduce its value.
    """
    if cfg.scenario != inst.scenario:
        raise ContractViolation(f"config scenario {cfg.scenario} does not match instance {inst.scenario}")

    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    jobs = [(inst, cfg, index, child) for index, child in enumerate(children)]
    logger.info(f"See-saw {inst.scenario}: {cfg.restarts} restarts on {cfg.workers} worker(s)")

    if cfg.workers > 1 and cfg.restarts > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, cfg.restarts)) as pool:
            results = list(pool.map(_run_restart, jobs))
    else:
        results = [_run_restart(job) for job in jobs]

    best_index = 0
    for index, result in enumerate(results):
        if result[0] > results[best_index][0]:
            best_index = index
    value, state, alice_ops, bob_ops, _ = results[best_index]

    strategy = BipartiteStrategy(
        state=state,
        alice=MeasurementFamily(operators=alice_ops),
        bob=MeasurementFamily(operators=bob_ops),
    )
    recomputed = bell_rac_value(inst, probability_table(strategy))
    if abs(recomputed - value) > RECOMPUTE_TOL:
        raise ConsistencyError(f"witness gives {recomputed!r}, see-saw reported {value!r}")

    traces: List[List[float]] = [r[4] for r in results]
    return SeesawResult(
        best_value=recomputed,
        strategy=strategy,
        trace=traces[best_index],
        restart_traces=traces,
        restarts_summary=[r[0] for r in results],
        best_restart=best_index,
    )
