"""JSON-ready dictionaries for protocols, strategies and witnesses.

Complex entries are written as [re, im] pairs so the files stay plain JSON.
"""

from typing import Any, Dict

import numpy as np

from models import (
    BipartiteStrategy,
    ClassicalStrategy,
    MeasurementFamily,
    PrepareAndMeasureProtocol,
    Scenario,
    SeesawResult,
)


def complex_to_json(arr: np.ndarray) -> Any:
    """Nested lists with every complex number replaced by [re, im]."""
    arr = np.asarray(arr, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def complex_from_json(data: Any) -> np.ndarray:
    pairs = np.asarray(data, dtype=float)
    return pairs[..., 0] + 1j * pairs[..., 1]


def scenario_to_dict(scenario: Scenario) -> Dict[str, int]:
    return {"n": scenario.n, "d": scenario.d}


def strategy_to_dict(s: BipartiteStrategy) -> Dict[str, Any]:
    dA, dB = s.local_dims
    return {
        "type": "bipartite",
        "local_dims": [dA, dB],
        "state": complex_to_json(s.state),
        "alice": complex_to_json(s.alice.operators),
        "bob": complex_to_json(s.bob.operators),
    }


def strategy_from_dict(data: Dict[str, Any]) -> BipartiteStrategy:
    return BipartiteStrategy(
        state=complex_from_json(data["state"]),
        alice=MeasurementFamily(operators=complex_from_json(data["alice"])),
        bob=MeasurementFamily(operators=complex_from_json(data["bob"])),
    )


def protocol_to_dict(p: PrepareAndMeasureProtocol) -> Dict[str, Any]:
    return {
        "type": "prepare_and_measure",
        "scenario": scenario_to_dict(p.scenario),
        "preparations": complex_to_json(p.preparations),
        "measurements": complex_to_json(p.measurements),
    }


def protocol_from_dict(data: Dict[str, Any]) -> PrepareAndMeasureProtocol:
    return PrepareAndMeasureProtocol(
        scenario=Scenario(**data["scenario"]),
        preparations=complex_from_json(data["preparations"]),
        measurements=complex_from_json(data["measurements"]),
    )


def classical_strategy_to_dict(s: ClassicalStrategy) -> Dict[str, Any]:
    return {"type": "classical", "encoder": list(s.encoder), "decoders": [list(d) for d in s.decoders]}


def seesaw_witness(result: SeesawResult) -> Dict[str, Any]:
    """Witness strategy plus the per-restart summary of a see-saw run."""
    witness = strategy_to_dict(result.strategy)
    witness["best_restart"] = result.best_restart
    witness["restarts_summary"] = [f"{v:.12g}" for v in result.restarts_summary]
    witness["sweeps"] = len(result.trace) - 1
    return witness
