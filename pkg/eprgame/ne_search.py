"""
Search the embedded no-signaling polytope for (C,C,C) equilibria.

The objective is the minimum of the three beta-normalized (C,C,C) margins.
The linear program finds its exact optimum, the random method scores seeded
samples of the polytope.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, InstanceOf, field_validator

from eprgame import rules, simplex, utils
from eprgame.epr_game import (
    CompletionInput,
    ccc_coefficients,
    ccc_margins,
    complete_distribution,
    completion_forms,
    evaluate_form,
    margin_forms,
)
from eprgame.errors import (
    InfeasibleInputError,
    InfeasibleProgramError,
    SamplingError,
)
from eprgame.game_model import GameParams
from eprgame.joint_dist import (
    JointDistribution,
    check_embedding_zeros,
    check_no_signaling,
    check_normalization,
    no_signaling_chains,
)

ZERO, ONE = Fraction(0), Fraction(1)

DrawFunction = Callable[[np.random.Generator, int], CompletionInput]


class SearchConfig(BaseModel):
    """
    Configuration of maximize_min_ccc_margin.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: GameParams
    objective: rules.Objective = rules.Objective.MAX_MIN_CCC_MARGIN
    method: rules.SearchMethod = rules.SearchMethod.LP
    seed: int = Field(default=0, ge=0, lt=2**64)
    iterations: int = Field(default=1000, ge=1)
    tolerance: Fraction = rules.FLOAT_TOLERANCE
    formulation: rules.Formulation = rules.Formulation.REDUCED
    workers: int = Field(default=1, ge=1)
    warm_start: Optional[InstanceOf[CompletionInput]] = None
    max_attempts: int = Field(default=1000, ge=1)
    denominator: int = Field(default=1000, ge=1)

    @field_validator("tolerance", mode="before")
    @classmethod
    def _coerce_tolerance(cls, value) -> Fraction:
        """
        Coerce to Fraction and require nonnegativity.
        """
        value = utils.as_fraction(value)
        if value < 0:
            raise ValueError(f"Expected a nonnegative tolerance, got {value}.")
        return value


@dataclass(frozen=True)
class SearchResult:
    """
    Best distribution found and its exact certificate.
    """

    distribution: JointDistribution
    margins: Tuple[Fraction, Fraction, Fraction]
    objective_value: Fraction
    certificate: Dict[str, bool]
    method: rules.SearchMethod
    samples: int = 0
    independents: Optional[CompletionInput] = None
    notes: Tuple[str, ...] = field(default=())

    @property
    def certified(self) -> bool:
        """
        All exact checks passed.
        """
        return all(self.certificate.values())


def certify(d: JointDistribution) -> Dict[str, bool]:
    """
    Exact constraint checks of a reported distribution.
    """
    return {
        "normalization": check_normalization(d).passed,
        "no-signaling": check_no_signaling(d).passed,
        "embedding-zeros": check_embedding_zeros(d).passed,
        "in-range": all(ZERO <= value <= ONE for value in d),
    }


def min_ccc_margin(params: GameParams, d: JointDistribution) -> Fraction:
    """
    Objective value of a distribution.
    """
    return min(ccc_margins(params, d))


def _build_result(
    params: GameParams,
    d: JointDistribution,
    method: rules.SearchMethod,
    samples: int = 0,
    notes: Sequence[str] = (),
) -> SearchResult:
    margins = ccc_margins(params, d)
    certificate = certify(d)
    if not all(certificate.values()):
        logging.error(
            "Search result failed exact re-verification.",
            extra=dict(certificate=certificate),
        )
    return SearchResult(
        distribution=d,
        margins=margins,
        objective_value=min(margins),
        certificate=certificate,
        method=method,
        samples=samples,
        independents=CompletionInput.from_distribution(d),
        notes=tuple(notes),
    )


def reduced_program(params: GameParams) -> simplex.LinearProgram:
    """
    Linear program over the ten independents and the objective t >= 0.

    The dependent entries enter through their affine completion forms.
    Variables are ordered as the independents followed by t.
    """
    size = len(rules.INDEPENDENT_INDICES)
    forms = margin_forms(params)
    completion = completion_forms()
    a_ub: List[Tuple[Fraction, ...]] = []
    b_ub: List[Fraction] = []
    for index in rules.DEPENDENT_INDICES:
        constant, coefficients = completion[index]
        if not any(coefficients):
            # Constant entries like p64 = 1 need no row.
            continue
        a_ub.append(tuple(-value for value in coefficients) + (ZERO,))
        b_ub.append(constant)
    for column in range(size):
        unit = tuple(ONE if other == column else ZERO for other in range(size))
        a_ub.append(unit + (ZERO,))
        b_ub.append(ONE)
    for constant, coefficients in forms:
        a_ub.append(tuple(-value for value in coefficients) + (ONE,))
        b_ub.append(constant)
    return simplex.LinearProgram(
        objective=(ZERO,) * size + (ONE,),
        a_ub=tuple(a_ub),
        b_ub=tuple(b_ub),
    )


def full_program(params: GameParams) -> simplex.LinearProgram:
    """
    Linear program over the 27 permitted entries and the objective t >= 0.

    Normalization and the printed marginal chains are equality rows.
    Variables are ordered as the permitted indices followed by t.
    """
    columns = {index: column for column, index in enumerate(rules.PERMITTED_INDICES)}
    size = len(columns)

    def row_of(weights: Dict[int, Fraction]) -> Tuple[Fraction, ...]:
        row = [ZERO] * (size + 1)
        for index, weight in weights.items():
            if index in columns:
                row[columns[index]] += weight
        return tuple(row)

    a_eq: List[Tuple[Fraction, ...]] = []
    b_eq: List[Fraction] = []
    for block in range(rules.BLOCK_SIZE):
        start = block * rules.BLOCK_SIZE + 1
        a_eq.append(row_of({index: ONE for index in range(start, start + 8)}))
        b_eq.append(ONE)
    for chain in no_signaling_chains():
        first = chain.groups[0]
        for group in chain.groups[1:]:
            weights: Dict[int, Fraction] = {index: ONE for index in first}
            for index in group:
                weights[index] = weights.get(index, ZERO) - ONE
            row = row_of(weights)
            if any(row):
                a_eq.append(row)
                b_eq.append(ZERO)
    a_ub = []
    for coefficients in ccc_coefficients(params):
        margin = row_of(dict(enumerate(coefficients, start=1)))
        a_ub.append(tuple(-value for value in margin[:size]) + (ONE,))
    return simplex.LinearProgram(
        objective=(ZERO,) * size + (ONE,),
        a_ub=tuple(a_ub),
        b_ub=(ZERO,) * len(a_ub),
        a_eq=tuple(a_eq),
        b_eq=tuple(b_eq),
    )


def _solve_lp(config: SearchConfig) -> SearchResult:
    if config.formulation is rules.Formulation.REDUCED:
        program = reduced_program(config.params)
    else:
        program = full_program(config.params)
    logging.info(
        f"Solving {config.formulation.value} formulation with "
        f"{program.size} variables, {len(program.b_ub)} inequalities "
        f"and {len(program.b_eq)} equalities."
    )
    solution = simplex.solve(program)
    if solution.status is not rules.LPStatus.OPTIMAL:
        raise InfeasibleProgramError(
            f"Linear program terminated as {solution.status.value}."
        )
    assert solution.value is not None
    if config.formulation is rules.Formulation.REDUCED:
        independents = CompletionInput.from_values(solution.x[:-1])
        d = complete_distribution(independents)
    else:
        d = JointDistribution.from_mapping(
            dict(zip(rules.PERMITTED_INDICES, solution.x[:-1]))
        )
    result = _build_result(
        config.params,
        d,
        method=rules.SearchMethod.LP,
        notes=(f"pivots={solution.pivots}",),
    )
    assert result.objective_value == solution.value, (
        "Optimal objective disagrees with the exact margins of the optimum."
    )
    return result


def draw_independents(
    rng: np.random.Generator, denominator: int = 1000
) -> CompletionInput:
    """
    Draw a feasible set of independents on a rational grid.

    Block 1 is uniform on the grid of the 8-simplex with spacing
    1/denominator. p13, p18 and p27 are uniform on the grid of the interval
    that keeps their blocks nonnegative, and p15, p20, p22 follow from the
    block 1 marginals. Every draw completes feasibly.
    """
    # Stars and bars: 7 distinct bars among denominator + 7 slots.
    bars = np.sort(rng.choice(denominator + 7, size=7, replace=False))
    edges = np.concatenate(([-1], bars, [denominator + 7]))
    counts = [int(value) for value in np.diff(edges) - 1]
    block = [Fraction(count, denominator) for count in counts]
    p = {index: value for index, value in enumerate(block, start=1)}
    r = p[1] + p[2] + p[3] + p[4]
    rp = p[1] + p[3] + p[5] + p[7]
    rpp = p[1] + p[2] + p[5] + p[6]

    def within(low: Fraction, high: Fraction) -> Fraction:
        low_count = int(low * denominator)
        high_count = int(high * denominator)
        return Fraction(int(rng.integers(low_count, high_count + 1)), denominator)

    p13 = within(max(ZERO, rp + rpp - ONE), min(rp, rpp))
    p18 = within(max(ZERO, r + rpp - ONE), min(r, rpp))
    p27 = within(max(ZERO, r + rp - ONE), min(r, rp))
    return CompletionInput(
        p1=p[1],
        p3=p[3],
        p5=p[5],
        p6=p[6],
        p13=p13,
        p15=rp - p13,
        p18=p18,
        p20=r - p18,
        p22=rpp - p18,
        p27=p27,
    )


def _accepted_sample(
    rng: np.random.Generator,
    draw: DrawFunction,
    denominator: int,
    max_attempts: int,
) -> Tuple[CompletionInput, JointDistribution]:
    for attempt in range(1, max_attempts + 1):
        independents = draw(rng, denominator)
        try:
            return independents, complete_distribution(independents)
        except InfeasibleInputError as exc:
            logging.debug(f"Rejected draw {attempt}: {exc}")
    raise SamplingError(attempts=max_attempts)


def sample_polytope(
    config: SearchConfig, draw: Optional[DrawFunction] = None
) -> JointDistribution:
    """
    Draw one distribution of the embedded no-signaling polytope.

    Independents come from draw (draw_independents by default) on the stream
    of worker 0 and infeasible completions are rejected.
    """
    rng = utils.worker_generator(config.seed, 0)
    _, d = _accepted_sample(
        rng,
        draw=draw if draw is not None else draw_independents,
        denominator=config.denominator,
        max_attempts=config.max_attempts,
    )
    return d


def _score_partition(
    params: GameParams,
    seed: int,
    worker: int,
    count: int,
    denominator: int,
    max_attempts: int,
    tolerance: Fraction,
) -> Tuple[Fraction, Tuple[Fraction, ...], int]:
    """
    Score count samples of one worker stream.

    Margins are scored in floating point and candidates within tolerance of
    the best float score are re-scored exactly.
    """
    rng = utils.worker_generator(seed, worker)
    samples = [
        _accepted_sample(rng, draw_independents, denominator, max_attempts)[0]
        for _ in range(count)
    ]
    forms = margin_forms(params)
    constants = np.array([float(constant) for constant, _ in forms])
    gradients = np.array(
        [[float(value) for value in coefficients] for _, coefficients in forms]
    )
    values = np.array(
        [[float(value) for value in sample.values()] for sample in samples]
    )
    scores = (values @ gradients.T + constants).min(axis=1)
    threshold = scores.max() - float(tolerance)
    best: Optional[Tuple[Fraction, Tuple[Fraction, ...]]] = None
    for position in np.flatnonzero(scores >= threshold):
        sample = samples[int(position)]
        exact = min(evaluate_form(form, sample.values()) for form in forms)
        candidate = (exact, sample.values())
        if best is None or _better(candidate, best):
            best = candidate
    assert best is not None
    logging.debug(f"Worker {worker} best exact score {best[0]} of {count} samples.")
    return best[0], best[1], count


def _better(
    candidate: Tuple[Fraction, Tuple[Fraction, ...]],
    incumbent: Tuple[Fraction, Tuple[Fraction, ...]],
) -> bool:
    # Higher score wins, ties go to the lexicographically smaller distribution.
    if candidate[0] != incumbent[0]:
        return candidate[0] > incumbent[0]
    return _entries(candidate[1]) < _entries(incumbent[1])


def _entries(values: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(complete_distribution(CompletionInput.from_values(values)))


def _random_search(config: SearchConfig) -> SearchResult:
    counts = [
        (worker, count)
        for worker, count in enumerate(
            utils.partition_counts(config.iterations, config.workers)
        )
        if count > 0
    ]
    arguments = dict(
        params=config.params,
        seed=config.seed,
        denominator=config.denominator,
        max_attempts=config.max_attempts,
        tolerance=config.tolerance,
    )
    partials: List[Tuple[Fraction, Tuple[Fraction, ...], int]] = []
    if config.workers == 1:
        partials = [
            _score_partition(worker=worker, count=count, **arguments)
            for worker, count in counts
        ]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            futures = {
                executor.submit(
                    _score_partition, worker=worker, count=count, **arguments
                ): worker
                for worker, count in counts
            }
            for future in as_completed(futures):
                try:
                    partials.append(future.result())
                except Exception:
                    logging.error(
                        f"Sampling worker {futures[future]} failed.", exc_info=True
                    )
                    raise
    samples = sum(partial[2] for partial in partials)
    best: Optional[Tuple[Fraction, Tuple[Fraction, ...]]] = None
    if config.warm_start is not None:
        warm = complete_distribution(config.warm_start)
        best = (min_ccc_margin(config.params, warm), config.warm_start.values())
    for score, values, _ in partials:
        if best is None or _better((score, values), best):
            best = (score, values)
    assert best is not None
    independents = CompletionInput.from_values(best[1])
    return _build_result(
        config.params,
        complete_distribution(independents),
        method=rules.SearchMethod.RANDOM,
        samples=samples,
    )


def maximize_min_ccc_margin(config: SearchConfig) -> SearchResult:
    """
    Find a distribution maximizing the minimum (C,C,C) margin.

    The linear program returns the exact optimum. The random method returns
    the best of config.iterations seeded samples. With a warm start the
    result is never worse than the warm start point.
    """
    logging.info(
        f"Searching with method {config.method.value}.",
        extra=dict(seed=config.seed, iterations=config.iterations),
    )
    if config.method is rules.SearchMethod.LP:
        result = _solve_lp(config)
    else:
        result = _random_search(config)
    if config.warm_start is not None:
        warm_value = min_ccc_margin(
            config.params, complete_distribution(config.warm_start)
        )
        assert result.objective_value >= warm_value, (
            f"Search result {result.objective_value} is below "
            f"the warm start value {warm_value}."
        )
    return result
