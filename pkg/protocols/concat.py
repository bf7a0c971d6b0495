"""Two-level concatenation of entanglement-assisted RACs.

A 4^(3)->1 code is built from two copies of the 2^(3)->1 code: the outer copy
decodes a value displaced by k from its target, and the inner copy displaces
again. The composed guess is correct when the two displacements cancel.
"""

import logging

import numpy as np

from errors import ContractViolation
from models import BellRacInstance, BipartiteStrategy, OutcomeDistribution
from .earac import displacement_probabilities, probability_table

logger = logging.getLogger(__name__)


def concat_success(outer: OutcomeDistribution, inner: OutcomeDistribution) -> float:
    """Probability that the displacement of ``outer`` is undone by ``inner``.

    sum_k outer[k] * inner[-k mod d]. For (p, q, q) composed with itself this
    is p^2 + 2 q^2.
    """
    if outer.d != inner.d:
        raise ContractViolation(f"cannot concatenate codes over d={outer.d} and d={inner.d}")
    d = outer.d
    cancelling = inner.probs[(-np.arange(d)) % d]
    return float(np.dot(outer.probs, cancelling))


def extract_outcome_distribution(s: BipartiteStrategy, inst: BellRacInstance) -> OutcomeDistribution:
    """Displacement statistics of a strategy; probs[0] equals its Bell RAC value."""
    if s.alice.outcomes != inst.outcomes or s.alice.settings != inst.alice_settings:
        raise ContractViolation("strategy does not match the instance")
    probs = displacement_probabilities(inst, probability_table(s))
    # clip round-off so the distribution validator sees non-negative entries
    probs = np.clip(probs, 0.0, None)
    logger.debug(f"displacement distribution {np.round(probs, 6).tolist()}")
    return OutcomeDistribution(d=inst.outcomes, probs=probs)


def perfect_code(d: int) -> OutcomeDistribution:
    """The distribution of a code that always decodes correctly."""
    probs = np.zeros(d)
    probs[0] = 1.0
    return OutcomeDistribution(d=d, probs=probs)
