"""
Monte Carlo referee of the six-coin and EPR protocols.

Every run the players choose their first coin or direction with
probabilities (x, y, z), the referee samples an outcome triple from the
chosen block and rewards the players per the payoff table.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, InstanceOf

from eprgame import rules, utils
from eprgame.classical_play import MixedProfile
from eprgame.errors import InvalidInputError
from eprgame.game_model import GameParams, payoff_for_outcome
from eprgame.joint_dist import JointDistribution, check_normalization

CHUNK_SIZE = 100_000


def _block_lookup() -> np.ndarray:
    """
    Map second-strategy flags of (Alice, Bob, Chris) to a 0-based block.
    """
    lookup = np.zeros((2, 2, 2), dtype=np.int64)
    for number, profile in enumerate(rules.BLOCK_ORDER):
        alice, bob, chris = (
            int(strategy is rules.Strategy.SECOND) for strategy in profile
        )
        lookup[alice, bob, chris] = number
    return lookup


BLOCK_LOOKUP = _block_lookup()


class SimulationConfig(BaseModel):
    """
    Configuration of simulate_runs.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    distribution: InstanceOf[JointDistribution]
    profile: InstanceOf[MixedProfile]
    runs: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    workers: int = Field(default=1, ge=1)


@dataclass(frozen=True)
class SimulationResult:
    """
    Empirical payoffs of simulated runs.
    """

    means: Tuple[float, float, float]
    standard_errors: Tuple[float, float, float]
    runs: int
    seed: int
    exact_means: Tuple[Fraction, Fraction, Fraction]
    block_counts: Tuple[int, ...]
    outcome_counts: Tuple[Tuple[int, ...], ...]


def _cumulative_tables(d: JointDistribution) -> np.ndarray:
    """
    Float cumulative outcome probabilities of every block.

    Sums are exact before conversion and the last entry is pinned to one.
    """
    tables = []
    for profile in rules.BLOCK_ORDER:
        running = Fraction(0)
        cumulative = []
        for value in d.block(profile):
            running += value
            cumulative.append(float(running))
        cumulative[-1] = 1.0
        tables.append(cumulative)
    return np.array(tables, dtype=np.float64)


def simulate_partition(
    cumulative: np.ndarray,
    first_probabilities: Tuple[float, float, float],
    seed: int,
    worker: int,
    runs: int,
) -> np.ndarray:
    """
    Count visits of every (block, position) pair over runs on one stream.
    """
    rng = utils.worker_generator(seed, worker)
    counts = np.zeros((rules.BLOCK_SIZE, rules.BLOCK_SIZE), dtype=np.int64)
    thresholds = np.array(first_probabilities, dtype=np.float64)
    remaining = runs
    while remaining > 0:
        size = min(CHUNK_SIZE, remaining)
        seconds = (rng.random((size, 3)) >= thresholds).astype(np.int64)
        blocks = BLOCK_LOOKUP[seconds[:, 0], seconds[:, 1], seconds[:, 2]]
        draws = rng.random(size)
        positions = np.empty(size, dtype=np.int64)
        for block in range(rules.BLOCK_SIZE):
            mask = blocks == block
            positions[mask] = np.searchsorted(
                cumulative[block], draws[mask], side="right"
            )
        np.add.at(counts, (blocks, positions), 1)
        remaining -= size
    logging.debug(f"Worker {worker} simulated {runs} runs.")
    return counts


def simulate_runs(params: GameParams, config: SimulationConfig) -> SimulationResult:
    """
    Simulate config.runs runs and report empirical payoffs.

    Standard errors are sample standard deviations over sqrt(runs).
    Payoff sums are accumulated exactly from integer visit counts.
    """
    d = config.distribution
    verdict = check_normalization(d)
    if not verdict.passed:
        raise InvalidInputError(
            "Expected a normalized distribution, "
            f"blocks {verdict.failed_blocks} and "
            f"negative entries {verdict.negative_indices} fail."
        )
    cumulative = _cumulative_tables(d)
    x, y, z = (float(value) for value in config.profile.as_tuple())
    counts_per_worker = utils.partition_counts(config.runs, config.workers)
    partitions = [
        (worker, runs) for worker, runs in enumerate(counts_per_worker) if runs > 0
    ]
    logging.info(
        f"Simulating {config.runs} runs over {len(partitions)} partitions.",
        extra=dict(seed=config.seed),
    )
    counts = np.zeros((rules.BLOCK_SIZE, rules.BLOCK_SIZE), dtype=np.int64)
    if config.workers == 1:
        for worker, runs in partitions:
            counts += simulate_partition(
                cumulative, (x, y, z), config.seed, worker, runs
            )
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            futures = {
                executor.submit(
                    simulate_partition, cumulative, (x, y, z), config.seed, worker, runs
                ): worker
                for worker, runs in partitions
            }
            for future in as_completed(futures):
                try:
                    counts += future.result()
                except Exception:
                    logging.error(
                        f"Simulation worker {futures[future]} failed.", exc_info=True
                    )
                    raise
    return _aggregate(params, counts, runs=config.runs, seed=config.seed)


def _aggregate(
    params: GameParams, counts: np.ndarray, runs: int, seed: int
) -> SimulationResult:
    totals = [Fraction(0)] * 3
    squares = [Fraction(0)] * 3
    for block in range(rules.BLOCK_SIZE):
        for position, outcome in enumerate(rules.OUTCOME_ORDER):
            visits = int(counts[block, position])
            if visits == 0:
                continue
            for player, payoff in enumerate(payoff_for_outcome(params, outcome)):
                totals[player] += visits * payoff
                squares[player] += visits * payoff * payoff
    exact_means = tuple(total / runs for total in totals)
    errors: List[float] = []
    for total, square in zip(totals, squares):
        if runs == 1:
            errors.append(0.0)
            continue
        variance = (square - total * total / runs) / (runs - 1)
        errors.append(float(np.sqrt(float(variance)) / np.sqrt(runs)))
    block_counts = tuple(int(value) for value in counts.sum(axis=1))
    return SimulationResult(
        means=(float(exact_means[0]), float(exact_means[1]), float(exact_means[2])),
        standard_errors=(errors[0], errors[1], errors[2]),
        runs=runs,
        seed=seed,
        exact_means=(exact_means[0], exact_means[1], exact_means[2]),
        block_counts=block_counts,
        outcome_counts=tuple(tuple(int(value) for value in row) for row in counts),
    )
