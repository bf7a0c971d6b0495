from .povm_sdp import certify, solve_povm
from .seesaw import (
    bell_operator,
    measurement_update_alice,
    measurement_update_bob,
    seesaw,
    state_update,
)

__all__ = [
    "certify",
    "solve_povm",
    "bell_operator",
    "measurement_update_alice",
    "measurement_update_bob",
    "seesaw",
    "state_update",
]
