"""Exact classical bounds p^C_{n,d} by exhaustive search over deterministic strategies.

For fixed decoders the best encoder picks, for every data string, the message
whose decoded guesses hit the most dits. The search therefore runs over
decoders only. Relabelling messages permutes Bob's decoding columns (column m
is the tuple of guesses for message m) without changing the value, so only
multisets of columns are enumerated.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations_with_replacement, islice, product
from math import comb
from typing import List, Optional, Tuple

import numpy as np

from config.settings import get_settings
from errors import ConsistencyError, ContractViolation, WorkCapExceeded
from models import ClassicalOptimum, ClassicalStrategy, Scenario

logger = logging.getLogger(__name__)

BATCH_SIZE = 4096


def classical_value(s: ClassicalStrategy, scenario: Scenario) -> Fraction:
    """Exact success probability of a deterministic strategy."""
    n, d = scenario.n, scenario.d
    data = scenario.data_strings
    if len(s.encoder) != len(data) or len(s.decoders) != n or any(len(dec) != d for dec in s.decoders):
        raise ContractViolation(f"strategy does not match scenario {scenario}")
    if any(not 0 <= m < d for m in s.encoder) or any(not 0 <= g < d for dec in s.decoders for g in dec):
        raise ContractViolation("strategy outputs must lie in 0..d-1")

    hits = 0
    for message, dits in zip(s.encoder, data):
        hits += sum(1 for y in range(n) if s.decoders[y][message] == dits[y])
    return Fraction(hits, n * d ** n)


def decoder_classes(scenario: Scenario) -> int:
    """Number of decoder tuples up to message relabelling."""
    n, d = scenario.n, scenario.d
    return comb(d ** n + d - 1, d)


def work_estimate(scenario: Scenario) -> int:
    """Inner evaluations: classes x data strings x messages x positions."""
    n, d = scenario.n, scenario.d
    return decoder_classes(scenario) * d ** n * d * n


def classical_optimum(scenario: Scenario, workers: Optional[int] = None, work_cap: Optional[float] = None) -> ClassicalOptimum:
    """Exact maximum over deterministic strategies, with a witness.

    Ties resolve to the lexicographically first decoder class in enumeration
    order and the smallest message per data string.

    Raises:
        WorkCapExceeded: when ``work_estimate`` is above the configured cap.
    """
    settings = get_settings()
    cap = settings.classical_work_cap if work_cap is None else work_cap
    estimate = work_estimate(scenario)
    if estimate > cap:
        raise WorkCapExceeded(
            f"classical search for {scenario} needs ~{estimate:.3g} evaluations (cap {cap:.3g})",
            estimate=estimate,
            cap=cap,
        )

    workers = settings.worker_count if workers is None else workers
    total = decoder_classes(scenario)
    chunks = _chunk_bounds(total, workers)
    logger.info(f"Classical search {scenario}: {total} decoder classes, {len(chunks)} chunk(s)")

    jobs = [(scenario.n, scenario.d, start, stop) for start, stop in chunks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_chunk, jobs))
    else:
        results = [_search_chunk(job) for job in jobs]

    # Chunks are in enumeration order, so the first maximum is the smallest witness.
    best_hits = max(hits for hits, _ in results)
    best_columns = next(columns for hits, columns in results if hits == best_hits)

    witness = _witness(scenario, best_columns)
    value = Fraction(best_hits, scenario.n * scenario.d ** scenario.n)
    if classical_value(witness, scenario) != value:
        raise ConsistencyError("classical witness does not reproduce the optimum")
    return ClassicalOptimum(value=value, witness=witness, decoder_classes=total)


def classical_analytic_n2(d: int) -> Fraction:
    """p^C_{2,d} = 1/2 + 1/(2d) = (d + 1) / (2d)."""
    if d < 2:
        raise ContractViolation(f"p^C_{{2,d}} needs d >= 2, got {d}")
    return Fraction(d + 1, 2 * d)


def _chunk_bounds(total: int, workers: int) -> List[Tuple[int, int]]:
    parts = max(1, min(workers * 4, -(-total // BATCH_SIZE)))
    step = -(-total // parts)
    return [(start, min(start + step, total)) for start in range(0, total, step)]


def _search_chunk(job: Tuple[int, int, int, int]) -> Tuple[int, Tuple[int, ...]]:
    """Best (hits, column multiset) over decoder classes start..stop-1."""
    n, d, start, stop = job
    column_values = np.array(list(product(range(d), repeat=n)), dtype=np.int8)  # (d^n, n)
    data = column_values  # data strings share the same enumeration
    classes = islice(combinations_with_replacement(range(d ** n), d), start, stop)

    best_hits, best_columns = -1, None
    while True:
        batch = list(islice(classes, BATCH_SIZE))
        if not batch:
            break
        combos = np.array(batch, dtype=np.int64)  # (B, d) column ids per message
        decoders = column_values[combos]  # (B, message, n)
        # hits[B, m, x] = number of positions y with decoder_y(m) == x_y
        hits = (decoders[:, :, None, :] == data[None, None, :, :]).sum(axis=3)
        scores = hits.max(axis=1).sum(axis=1)
        index = int(np.argmax(scores))
        if scores[index] > best_hits:
            best_hits = int(scores[index])
            best_columns = tuple(batch[index])
    return best_hits, best_columns


def _witness(scenario: Scenario, columns: Tuple[int, ...]) -> ClassicalStrategy:
    n, d = scenario.n, scenario.d
    column_values = list(product(range(d), repeat=n))
    decoders = [[column_values[columns[m]][y] for m in range(d)] for y in range(n)]
    encoder = []
    for dits in scenario.data_strings:
        scores = [sum(1 for y in range(n) if decoders[y][m] == dits[y]) for m in range(d)]
        encoder.append(scores.index(max(scores)))
    return ClassicalStrategy(encoder=encoder, decoders=decoders)
