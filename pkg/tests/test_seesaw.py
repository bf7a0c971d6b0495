import numpy as np
import pytest
from pydantic import ValidationError

from algebra.linalg import max_eigenvalue
from algebra.qudit import make_rng, max_entangled, random_state
from config.references import Q1AB_UPPER_BOUNDS
from models import BipartiteStrategy, MeasurementFamily, Scenario, SeesawConfig
from optimizers.seesaw import (
    bell_operator,
    measurement_update_alice,
    measurement_update_bob,
    random_measurement_family,
    seesaw,
    state_update,
)
from protocols.earac import bell_rac_instance, bell_rac_value, probability_table

SEVEN_NINTHS = 7.0 / 9.0


def uniform_family(settings: int, outcomes: int, dim: int) -> MeasurementFamily:
    return MeasurementFamily(operators=np.full((settings, outcomes, dim, dim), 0.0) + np.eye(dim) / outcomes)


def assert_monotone(trace):
    for before, after in zip(trace, trace[1:]):
        assert after >= before - 1e-10


def test_uniform_families_give_scaled_identity(inst_23):
    g = bell_operator(inst_23, uniform_family(3, 3, 3), uniform_family(2, 3, 3))
    assert np.allclose(g, np.eye(9) / 3.0, atol=1e-12)


def test_explicit_bell_operator(explicit, inst_23):
    g = bell_operator(inst_23, explicit.alice, explicit.bob)
    psi = max_entangled(3)
    assert np.vdot(psi, g @ psi).real == pytest.approx(SEVEN_NINTHS, abs=1e-12)
    assert max_eigenvalue(g) >= SEVEN_NINTHS - 1e-12


def test_bell_operator_matches_probability_table():
    rng = make_rng(21)
    inst = bell_rac_instance(Scenario(n=2, d=3))
    for _ in range(20):
        alice = random_measurement_family(3, 3, 3, rng)
        bob = random_measurement_family(2, 3, 3, rng)
        state = random_state(9, rng)
        g = bell_operator(inst, alice, bob)
        strategy = BipartiteStrategy(state=state, alice=alice, bob=bob)
        direct = bell_rac_value(inst, probability_table(strategy))
        assert np.vdot(state, g @ state).real == pytest.approx(direct, abs=1e-12)


def test_state_update_picks_top_eigenvector():
    psi = state_update(np.diag([0.9, 0.1, 0.0, 0.0]))
    assert abs(psi[0]) == pytest.approx(1.0, abs=1e-12)


def test_state_update_attains_largest_eigenvalue(explicit, inst_23):
    g = bell_operator(inst_23, explicit.alice, explicit.bob)
    psi = state_update(g)
    assert np.vdot(psi, g @ psi).real == pytest.approx(max_eigenvalue(g), abs=1e-10)


def test_measurement_updates_do_not_decrease_explicit_value(explicit, inst_23):
    state = np.asarray(explicit.state)
    alice = measurement_update_alice(inst_23, state, explicit.bob, explicit.alice)
    after_alice = np.vdot(state, bell_operator(inst_23, alice, explicit.bob) @ state).real
    assert after_alice >= SEVEN_NINTHS - 1e-9
    bob = measurement_update_bob(inst_23, state, alice, explicit.bob)
    after_bob = np.vdot(state, bell_operator(inst_23, alice, bob) @ state).real
    assert after_bob >= after_alice - 1e-10


def test_uninformative_bob_leaves_one_over_d(inst_23):
    state = max_entangled(3)
    bob = uniform_family(2, 3, 3)
    alice = measurement_update_alice(inst_23, state, bob, dA=3)
    value = np.vdot(state, bell_operator(inst_23, alice, bob) @ state).real
    assert value == pytest.approx(1.0 / 3.0, abs=1e-9)


def test_chsh_seesaw_reaches_tsirelson(inst_22):
    cfg = SeesawConfig(scenario=Scenario(n=2, d=2), restarts=8, seed=1)
    result = seesaw(inst_22, cfg)
    assert 0.8535 <= result.best_value <= 0.8536 + 1e-9
    assert len(result.restarts_summary) == 8
    for trace in result.restart_traces:
        assert_monotone(trace)
    recomputed = bell_rac_value(inst_22, probability_table(result.strategy))
    assert abs(recomputed - result.best_value) <= 1e-10


@pytest.mark.parametrize("n, d", [(2, 3), (2, 4), (3, 3)])
def test_random_start_updates_never_decrease(n, d):
    inst = bell_rac_instance(Scenario(n=n, d=d))
    rng = make_rng(17)
    for _ in range(3):
        alice = random_measurement_family(inst.alice_settings, d, d, rng)
        bob = random_measurement_family(inst.bob_settings, d, d, rng)
        state = state_update(bell_operator(inst, alice, bob))
        values = [np.vdot(state, bell_operator(inst, alice, bob) @ state).real]
        for _ in range(2):
            alice = measurement_update_alice(inst, state, bob, alice)
            values.append(np.vdot(state, bell_operator(inst, alice, bob) @ state).real)
            bob = measurement_update_bob(inst, state, alice, bob)
            values.append(np.vdot(state, bell_operator(inst, alice, bob) @ state).real)
            state = state_update(bell_operator(inst, alice, bob))
            values.append(np.vdot(state, bell_operator(inst, alice, bob) @ state).real)
        for before, after in zip(values, values[1:]):
            assert after >= before - 1e-9
        assert 1.0 / d - 1e-10 <= values[-1] <= 1.0 + 1e-10


def test_seesaw_traces_are_monotone_beyond_chsh(inst_23):
    cfg = SeesawConfig(scenario=Scenario(n=2, d=3), restarts=2, seed=3, max_sweeps=4, workers=1)
    result = seesaw(inst_23, cfg)
    assert len(result.restart_traces) == 2
    for trace in result.restart_traces:
        assert_monotone(trace)
    assert 1.0 / 3.0 <= result.best_value <= Q1AB_UPPER_BOUNDS[(2, 3)] + 1e-3
    recomputed = bell_rac_value(inst_23, probability_table(result.strategy))
    assert abs(recomputed - result.best_value) <= 1e-10


def test_seesaw_is_reproducible(inst_22):
    cfg = SeesawConfig(scenario=Scenario(n=2, d=2), restarts=2, seed=5, max_sweeps=20)
    assert seesaw(inst_22, cfg).restarts_summary == seesaw(inst_22, cfg).restarts_summary


def test_config_validation():
    with pytest.raises(ValidationError):
        SeesawConfig(scenario=Scenario(n=2, d=2), restarts=0)
    with pytest.raises(ValidationError):
        SeesawConfig(scenario=Scenario(n=2, d=2), improvement_floor=0.0)


@pytest.mark.slow
@pytest.mark.parametrize(
    "n, d, restarts, floor",
    [
        (2, 3, 20, 0.77770),
        (2, 4, 20, 0.74000),
        (2, 5, 20, 0.71700),
        (3, 3, 50, 0.68500),
    ],
)
def test_seesaw_lower_bounds(n, d, restarts, floor):
    scenario = Scenario(n=n, d=d)
    inst = bell_rac_instance(scenario)
    cfg = SeesawConfig(scenario=scenario, restarts=restarts, seed=1, workers=4)
    result = seesaw(inst, cfg)
    assert result.best_value >= floor
    assert result.best_value <= Q1AB_UPPER_BOUNDS[(n, d)] + 1e-3
    for trace in result.restart_traces:
        assert_monotone(trace)
