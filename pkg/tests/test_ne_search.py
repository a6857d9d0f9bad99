"""
Tests for ne_search.py.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers
from pydantic import ValidationError
from scipy.optimize import linprog

import tests
from eprgame import rules, utils
from eprgame.epr_game import (
    REFERENCE_INDEPENDENTS,
    CompletionInput,
    complete_distribution,
    reference_params,
)
from eprgame.errors import SamplingError
from eprgame.ne_search import (
    SearchConfig,
    _better,
    certify,
    draw_independents,
    full_program,
    maximize_min_ccc_margin,
    min_ccc_margin,
    reduced_program,
    sample_polytope,
)

REFERENCE_VALUE = Fraction(43, 2500)


def test_lp_reference():
    """
    Test that the exact optimum beats the reference example.
    """
    result = maximize_min_ccc_margin(SearchConfig(params=reference_params()))
    assert result.certified
    assert result.method is rules.SearchMethod.LP
    assert result.objective_value >= REFERENCE_VALUE
    assert result.objective_value == min(result.margins)
    assert result.independents is not None
    assert complete_distribution(result.independents) == result.distribution


def test_lp_formulations_agree():
    """
    Test that the reduced and full programs share the optimum.
    """
    params = reference_params()
    reduced = maximize_min_ccc_margin(SearchConfig(params=params))
    full = maximize_min_ccc_margin(
        SearchConfig(params=params, formulation=rules.Formulation.FULL)
    )
    assert full.certified
    assert reduced.objective_value == full.objective_value


def test_lp_scaling_invariance():
    """
    Test that scaling every payoff leaves the normalized optimum unchanged.
    """
    params = reference_params()
    base = maximize_min_ccc_margin(SearchConfig(params=params))
    scaled = maximize_min_ccc_margin(SearchConfig(params=params.scaled(7)))
    assert base.objective_value == scaled.objective_value


def test_lp_against_scipy():
    """
    Test the exact optimum of the reduced program against scipy.
    """
    program = reduced_program(reference_params())
    reference = linprog(
        c=[-float(value) for value in program.objective],
        A_ub=[[float(value) for value in row] for row in program.a_ub],
        b_ub=[float(value) for value in program.b_ub],
        bounds=[(0, None)] * program.size,
        method="highs",
    )
    assert reference.status == 0
    result = maximize_min_ccc_margin(SearchConfig(params=reference_params()))
    assert float(result.objective_value) == pytest.approx(-reference.fun, abs=1e-7)


def test_program_sizes():
    """
    Test the variable counts of both formulations.
    """
    params = reference_params()
    assert reduced_program(params).size == len(rules.INDEPENDENT_INDICES) + 1
    full = full_program(params)
    assert full.size == len(rules.PERMITTED_INDICES) + 1
    assert len(full.b_ub) == 3


def test_random_search_deterministic():
    """
    Test that a seed fixes the random search result.
    """
    config = SearchConfig(
        params=reference_params(),
        method=rules.SearchMethod.RANDOM,
        seed=11,
        iterations=200,
    )
    first = maximize_min_ccc_margin(config)
    second = maximize_min_ccc_margin(config)
    assert first.certified
    assert first.samples == 200
    assert first.distribution == second.distribution
    assert first.objective_value == second.objective_value


def test_random_search_workers_deterministic():
    """
    Test that a seed fixes the result for a fixed worker count.
    """
    config = SearchConfig(
        params=reference_params(),
        method=rules.SearchMethod.RANDOM,
        seed=5,
        iterations=100,
        workers=2,
    )
    first = maximize_min_ccc_margin(config)
    second = maximize_min_ccc_margin(config)
    assert first.samples == 100
    assert first.distribution == second.distribution


def test_random_search_warm_start():
    """
    Test that the result is never worse than the warm start.
    """
    result = maximize_min_ccc_margin(
        SearchConfig(
            params=reference_params(),
            method=rules.SearchMethod.RANDOM,
            iterations=20,
            warm_start=REFERENCE_INDEPENDENTS,
        )
    )
    assert result.certified
    assert result.objective_value >= REFERENCE_VALUE


def test_lp_warm_start():
    """
    Test the warm start with the exact method.
    """
    result = maximize_min_ccc_margin(
        SearchConfig(params=reference_params(), warm_start=REFERENCE_INDEPENDENTS)
    )
    assert result.objective_value >= REFERENCE_VALUE


def test_sample_polytope_rejection_budget():
    """
    Test that an always infeasible draw exhausts the budget.
    """
    config = SearchConfig(params=tests.PD_PARAMS, max_attempts=5)
    with pytest.raises(SamplingError) as excinfo:
        sample_polytope(config, draw=tests.pinned_draw([Fraction(1, 4)] * 10))
    assert excinfo.value.attempts == 5


def test_sample_polytope_pinned():
    """
    Test that a feasible pinned draw is completed.
    """
    config = SearchConfig(params=tests.PD_PARAMS)
    d = sample_polytope(
        config, draw=tests.pinned_draw(list(REFERENCE_INDEPENDENTS.values()))
    )
    assert d == complete_distribution(REFERENCE_INDEPENDENTS)


@settings(max_examples=100, deadline=None)
@given(integers(min_value=0, max_value=2**32), integers(min_value=1, max_value=1000))
def test_draw_independents_feasible(seed: int, denominator: int):
    """
    Test that every draw completes to a certified distribution.
    """
    independents = draw_independents(
        utils.worker_generator(seed, 0), denominator=denominator
    )
    d = complete_distribution(independents)
    assert all(certify(d).values())
    for value in independents.values():
        assert (value * denominator).denominator == 1


def test_draw_independents_deterministic():
    """
    Test that equal generators give equal draws.
    """
    first = draw_independents(utils.worker_generator(3, 1))
    second = draw_independents(utils.worker_generator(3, 1))
    assert first == second
    assert isinstance(utils.worker_generator(3, 1), np.random.Generator)


def test_min_ccc_margin_reference():
    """
    Test the objective value of the reference example.
    """
    d = complete_distribution(REFERENCE_INDEPENDENTS)
    assert min_ccc_margin(reference_params(), d) == REFERENCE_VALUE


@pytest.mark.parametrize("kwargs", tests.test_search_config_invalid_params())
def test_search_config_invalid(kwargs):
    """
    Test that invalid configuration values are rejected.
    """
    with pytest.raises(ValidationError):
        SearchConfig(params=tests.PD_PARAMS, **kwargs)


@given(tests.completion_strategy(), tests.completion_strategy())
def test_better_ties_compare_distributions(
    first: CompletionInput, second: CompletionInput
):
    """
    Test that equal scores are ordered by the completed distribution entries.
    """
    score = Fraction(1, 10)
    expected = tuple(complete_distribution(first)) < tuple(
        complete_distribution(second)
    )
    assert _better((score, first.values()), (score, second.values())) == expected
    assert _better((score + 1, first.values()), (score, second.values()))
    assert not _better((score, first.values()), (score, first.values()))
