import numpy as np
import pytest

from algebra.qudit import make_rng, random_povm, random_state
from config.settings import get_settings
from models import BipartiteStrategy, MeasurementFamily, Scenario
from protocols.earac import bell_rac_instance, chsh_strategy, explicit_strategy


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20240601)


@pytest.fixture
def explicit():
    return explicit_strategy()


@pytest.fixture
def chsh():
    return chsh_strategy()


@pytest.fixture
def inst_22():
    return bell_rac_instance(Scenario(n=2, d=2))


@pytest.fixture
def inst_23():
    return bell_rac_instance(Scenario(n=2, d=3))


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2.0


def random_strategy(inst, rng: np.random.Generator) -> BipartiteStrategy:
    """Random full-rank POVMs on qudits of the instance's outcome dimension and a random pure state."""
    d = inst.outcomes
    alice = [random_povm(d, d, rng) for _ in range(inst.alice_settings)]
    bob = [random_povm(d, d, rng) for _ in range(inst.bob_settings)]
    return BipartiteStrategy(
        state=random_state(d * d, rng),
        alice=MeasurementFamily(operators=np.array(alice)),
        bob=MeasurementFamily(operators=np.array(bob)),
    )
