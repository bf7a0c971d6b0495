import numpy as np
import pytest

from algebra.qudit import (
    basis_ket,
    computational_measurement,
    fourier_measurement,
    make_rng,
    random_povm,
    random_state,
    random_unitary,
)
from errors import ContractViolation
from models import PrepareAndMeasureProtocol, Scenario
from protocols.qcrac import (
    fourier_qcrac_protocol,
    preparation_overlaps,
    qcrac_analytic,
    sequential_success,
    transform_protocol,
)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_protocol_reaches_analytic_value(d):
    assert abs(sequential_success(fourier_qcrac_protocol(d)) - qcrac_analytic(d)) <= 1e-10


@pytest.mark.parametrize(
    "d, expected",
    [(2, 0.8536), (3, 0.7887), (4, 0.7500), (5, 0.7236)],
)
def test_analytic_values_to_four_decimals(d, expected):
    assert round(qcrac_analytic(d), 4) == pytest.approx(expected)


def test_qubit_value_is_tsirelson_like():
    assert qcrac_analytic(2) == pytest.approx((1 + 1 / np.sqrt(2)) / 2, abs=1e-12)


def test_preparations_are_normalized():
    preps = fourier_qcrac_protocol(4).preparations
    assert np.allclose(np.sum(np.abs(preps) ** 2, axis=1), 1.0)


def test_preparation_lookup_by_data_string():
    p = fourier_qcrac_protocol(3)
    assert np.allclose(p.preparation((2, 1)), p.preparations[2 * 3 + 1])


def test_qutrit_preparations_have_two_overlaps_and_none_orthogonal():
    overlaps = preparation_overlaps(fourier_qcrac_protocol(3))
    assert len(overlaps) == 2
    assert min(overlaps) > 0.1
    s3 = np.sqrt(3.0)
    assert overlaps[0] == pytest.approx((1 / s3) / (2 + 2 / s3), abs=1e-6)
    assert overlaps[1] == pytest.approx((1 + 2 / s3) / (2 + 2 / s3), abs=1e-6)


def test_common_unitary_preserves_success(rng):
    p = fourier_qcrac_protocol(3)
    for _ in range(10):
        q = transform_protocol(p, random_unitary(3, rng))
        assert abs(sequential_success(q) - sequential_success(p)) < 1e-10


def test_invalid_measurement_is_rejected():
    p = fourier_qcrac_protocol(3)
    broken = PrepareAndMeasureProtocol(
        scenario=p.scenario,
        preparations=p.preparations,
        measurements=1.01 * p.measurements,
    )
    with pytest.raises(ContractViolation):
        sequential_success(broken)


def test_dimension_one_is_rejected():
    with pytest.raises(ContractViolation):
        fourier_qcrac_protocol(1)


def random_protocol(d: int, rng) -> PrepareAndMeasureProtocol:
    return PrepareAndMeasureProtocol(
        scenario=Scenario(n=2, d=d),
        preparations=np.array([random_state(d, rng) for _ in range(d * d)]),
        measurements=np.array([random_povm(d, d, rng) for _ in range(2)]),
    )


@pytest.mark.parametrize("d", [2, 3, 4])
def test_uniform_measurements_guess_at_random(d):
    p = fourier_qcrac_protocol(d)
    uniform = PrepareAndMeasureProtocol(
        scenario=p.scenario,
        preparations=p.preparations,
        measurements=np.zeros((2, d, d, d)) + np.eye(d) / d,
    )
    assert sequential_success(uniform) == pytest.approx(1.0 / d, abs=1e-12)


def test_random_protocols_give_probabilities():
    rng = make_rng(41)
    for d in (2, 3, 4):
        for _ in range(20):
            p = random_protocol(d, rng)
            success = sequential_success(p)
            assert -1e-12 <= success <= 1.0 + 1e-12
            u = random_unitary(d, rng)
            assert sequential_success(transform_protocol(p, u)) == pytest.approx(success, abs=1e-10)


def test_adversarial_protocol_falls_below_uniform_guessing():
    # prepares |x_0 + 1>, so the computational measurement is always wrong
    d = 3
    scenario = Scenario(n=2, d=d)
    p = PrepareAndMeasureProtocol(
        scenario=scenario,
        preparations=np.array([basis_ket(d, x0 + 1) for x0, _ in scenario.data_strings]),
        measurements=np.array([computational_measurement(d), fourier_measurement(d)]),
    )
    assert sequential_success(p) == pytest.approx(1.0 / (2 * d), abs=1e-12)
