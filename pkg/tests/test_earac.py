import numpy as np
import pytest

from algebra.linalg import hermitian_eig, is_valid_povm
from algebra.qudit import (
    computational_measurement,
    fourier_ket,
    fourier_measurement,
    make_rng,
    random_unitary,
    root_of_unity,
)
from errors import ContractViolation
from models import BipartiteStrategy, MeasurementFamily, ProbabilityTable, Scenario
from optimizers.seesaw import bell_operator
from protocols.earac import (
    EXPLICIT_BOB_FOURIER_OFFSET,
    bell_rac_instance,
    bell_rac_value,
    displacement_probabilities,
    earac_23_closed_form,
    earac_23_success,
    explicit_a00,
    explicit_alice_entrywise,
    explicit_alice_family,
    explicit_bob_family,
    local_transform,
    probability_table,
    steered_states,
)

from .conftest import random_strategy

SEVEN_NINTHS = 7.0 / 9.0
TSIRELSON = (1.0 + 1.0 / np.sqrt(2.0)) / 2.0


def test_instance_targets():
    inst = bell_rac_instance(Scenario(n=3, d=3))
    assert inst.targets.shape == (9, 3)
    assert inst.alice_settings == 9 and inst.bob_settings == 3
    # x = (x_1, x_2) = (2, 1) is Alice's setting 7
    assert inst.targets[7].tolist() == [0, 2, 1]


def test_explicit_code_reaches_seven_ninths():
    assert abs(earac_23_success() - SEVEN_NINTHS) <= 1e-12
    assert abs(earac_23_closed_form() - SEVEN_NINTHS) <= 1e-12


def test_explicit_a00_is_positive_with_unit_trace():
    a = explicit_a00()
    assert np.allclose(a, a.conj().T, atol=1e-12)
    assert hermitian_eig(a).eigenvalues[-1] >= -1e-12
    assert np.trace(a).real == pytest.approx(1.0, abs=1e-12)


def test_explicit_alice_measurements_are_valid_povms():
    family = explicit_alice_family()
    for x in range(3):
        assert is_valid_povm(family.operators[x])
        assert np.max(np.abs(family.operators[x].sum(axis=0) - np.eye(3))) <= 1e-12


def test_entrywise_formula_matches_conjugation():
    family = explicit_alice_family()
    for x in range(3):
        for a in range(3):
            assert np.allclose(explicit_alice_entrywise(x, a), family.operators[x, a], atol=1e-12)


def test_computational_basis_statistics(explicit):
    table = probability_table(explicit).entries
    for x in range(3):
        for a in range(3):
            for b in range(3):
                expected = 7.0 / 27.0 if (a + b) % 3 == 0 else 1.0 / 27.0
                assert table[x, 0, a, b] == pytest.approx(expected, abs=1e-12)


def test_probability_table_is_normalized_and_no_signaling(explicit):
    table = probability_table(explicit)
    assert table.normalization_residual() < 1e-12
    alice = table.alice_marginals()
    bob = table.bob_marginals()
    assert np.allclose(alice[:, 0, :], alice[:, 1, :], atol=1e-12)
    assert np.allclose(bob[0], bob[1], atol=1e-12)
    assert np.allclose(bob[0], bob[2], atol=1e-12)


def test_displacement_split(explicit, inst_23):
    probs = displacement_probabilities(inst_23, probability_table(explicit))
    assert np.allclose(probs, [7 / 9, 1 / 9, 1 / 9], atol=1e-12)


def test_chsh_strategy_reaches_tsirelson(chsh, inst_22):
    assert bell_rac_value(inst_22, probability_table(chsh)) == pytest.approx(TSIRELSON, abs=1e-12)


def test_local_unitaries_preserve_value(explicit, inst_23, rng):
    for _ in range(10):
        moved = local_transform(explicit, random_unitary(3, rng), random_unitary(3, rng))
        assert bell_rac_value(inst_23, probability_table(moved)) == pytest.approx(SEVEN_NINTHS, abs=1e-12)


def test_steered_states_are_orthogonal(explicit):
    probs, states = steered_states(explicit)
    assert np.allclose(probs, 1.0 / 3.0, atol=1e-12)
    for x in range(3):
        for a in range(3):
            assert np.trace(states[x][a]).real == pytest.approx(1.0, abs=1e-12)
            for b in range(a + 1, 3):
                assert abs(np.trace(states[x][a] @ states[x][b])) < 1e-12


def test_value_rejects_mismatched_table(inst_23):
    with pytest.raises(ContractViolation):
        bell_rac_value(inst_23, ProbabilityTable(entries=np.zeros((2, 2, 2, 2))))


def fourier_setting_oracle(x: int, a: int, b: int) -> float:
    """(1/9) sum_{k,k'} lambda_{k,k'} omega^{(k-k')(a+b-x+1)} for Bob's Fourier setting."""
    lam = explicit_a00()
    total = sum(
        lam[k, kp] * root_of_unity(3, (k - kp) * (a + b - x + 1))
        for k in range(3)
        for kp in range(3)
    )
    return float((total / 9.0).real)


def test_fourier_setting_statistics_match_summation_formula(explicit):
    table = probability_table(explicit).entries
    for x in range(3):
        for a in range(3):
            for b in range(3):
                assert table[x, 1, a, b] == pytest.approx(fourier_setting_oracle(x, a, b), abs=1e-12)


def test_explicit_bob_measurements():
    bob = explicit_bob_family().operators
    e1 = fourier_ket(3, 1)
    assert np.allclose(bob[1, 0], np.outer(e1, e1.conj()), atol=1e-12)
    for y in range(2):
        assert is_valid_povm(bob[y])
        assert np.max(np.abs(bob[y].sum(axis=0) - np.eye(3))) <= 1e-12
    for b in range(3):
        for bp in range(3):
            assert np.trace(bob[0, b] @ bob[1, bp]).real == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_plus_two_fourier_relabelling_gives_four_ninths(explicit, inst_23):
    assert EXPLICIT_BOB_FOURIER_OFFSET % 3 == 1
    bob = MeasurementFamily(operators=np.array([computational_measurement(3), fourier_measurement(3, 2)]))
    relabelled = BipartiteStrategy(state=explicit.state, alice=explicit.alice, bob=bob)
    assert bell_rac_value(inst_23, probability_table(relabelled)) == pytest.approx(4.0 / 9.0, abs=1e-12)


@pytest.mark.parametrize("n, d", [(2, 2), (2, 3), (3, 3)])
def test_random_strategies_are_consistent(n, d):
    rng = make_rng(100 * n + d)
    inst = bell_rac_instance(Scenario(n=n, d=d))
    for _ in range(100):
        s = random_strategy(inst, rng)
        assert s.alice.is_valid() and s.bob.is_valid()
        table = probability_table(s)
        assert table.normalization_residual() < 1e-10
        alice = table.alice_marginals()
        bob = table.bob_marginals()
        # Alice's marginal ignores Bob's setting and vice versa
        assert np.allclose(alice, alice[:, :1, :], atol=1e-10)
        assert np.allclose(bob, bob[:1, :, :], atol=1e-10)
        value = bell_rac_value(inst, table)
        assert -1e-12 <= value <= 1.0 + 1e-12
        g = bell_operator(inst, s.alice, s.bob)
        assert np.vdot(s.state, g @ s.state).real == pytest.approx(value, abs=1e-10)


@pytest.mark.parametrize("n, d", [(2, 2), (2, 3), (3, 3)])
def test_local_unitaries_preserve_random_strategy_values(n, d):
    rng = make_rng(200 * n + d)
    inst = bell_rac_instance(Scenario(n=n, d=d))
    for _ in range(10):
        s = random_strategy(inst, rng)
        value = bell_rac_value(inst, probability_table(s))
        moved = local_transform(s, random_unitary(d, rng), random_unitary(d, rng))
        assert bell_rac_value(inst, probability_table(moved)) == pytest.approx(value, abs=1e-10)
