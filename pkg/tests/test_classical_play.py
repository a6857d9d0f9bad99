"""
Tests for classical_play.py.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings

import tests
from eprgame import rules
from eprgame.classical_play import (
    MixedProfile,
    all_pure_profiles,
    enumerate_pure_ne,
    is_nash_classical,
    mixed_payoff_classical,
    profile_weights,
)
from eprgame.errors import ProbabilityRangeError
from eprgame.game_model import GameParams, payoff_table


@pytest.mark.parametrize("values", [(2, 0, 0), (0, -1, 0), ("1/2", "1/2", "3/2")])
def test_mixed_profile_out_of_range(values):
    """
    Test that probabilities outside [0, 1] are rejected.
    """
    with pytest.raises(ProbabilityRangeError):
        MixedProfile.of(*values)


@given(tests.profile_strategy())
def test_profile_weights_sum_to_one(profile: MixedProfile):
    """
    Test that trilinear weights form a distribution.
    """
    weights = profile_weights(profile)
    assert len(weights) == 8
    assert sum(weights.values()) == 1
    assert all(weight >= 0 for weight in weights.values())


@given(tests.params_strategy())
def test_mixed_payoff_at_pure_profiles(params: GameParams):
    """
    Test that mixed payoffs at pure profiles equal the payoff table.
    """
    for pure in all_pure_profiles():
        assert mixed_payoff_classical(params, MixedProfile.pure(pure)) == payoff_table(
            params, pure
        )


@settings(max_examples=100)
@given(tests.pd_params_strategy())
def test_enumerate_pure_ne_pd(params: GameParams):
    """
    Test that all-defect is the unique pure equilibrium of every PD.
    """
    assert enumerate_pure_ne(params) == [rules.BLOCK_ORDER[-1]]


def test_is_nash_classical_manual():
    """
    Test margins at all-defect and all-cooperate.
    """
    g = tests.PD_PARAMS
    defect = is_nash_classical(g, MixedProfile.of(0, 0, 0))
    assert defect.is_nash
    assert defect.margins == (g.omega - g.epsilon,) * 3
    assert defect.binding_deviations == (1, 1, 1)

    cooperate = is_nash_classical(g, MixedProfile.of(1, 1, 1))
    assert not cooperate.is_nash
    assert cooperate.margins == (g.alpha - g.beta,) * 3
    assert cooperate.binding_deviations == (0, 0, 0)


@settings(max_examples=50)
@given(tests.pd_params_strategy(), tests.profile_strategy())
def test_is_nash_classical_pd(params: GameParams, profile: MixedProfile):
    """
    Test that only all-defect is an equilibrium of a PD.

    Defection strictly dominates, so any weight on cooperation is a loss.
    """
    report = is_nash_classical(params, profile)
    assert report.is_nash == (profile.as_tuple() == (0, 0, 0))


def test_interior_profile_margins():
    """
    Test that interior probabilities compare against both endpoints.
    """
    half = Fraction(1, 2)
    report = is_nash_classical(tests.PD_PARAMS, MixedProfile.of(half, half, half))
    assert report.binding_deviations == (0, 0, 0)
    assert all(margin < 0 for margin in report.margins)


@settings(max_examples=50)
@given(tests.params_strategy(), tests.profile_strategy())
def test_is_nash_classical_grid_oracle(params: GameParams, profile: MixedProfile):
    """
    Test endpoint margins against a scan of deviations on a 1/16 grid.
    """
    report = is_nash_classical(params, profile)
    current = mixed_payoff_classical(params, profile)
    grid = [Fraction(step, 16) for step in range(17)]
    for player in range(3):
        scanned = min(
            current[player]
            - mixed_payoff_classical(params, profile.with_player(player, deviation))[
                player
            ]
            for deviation in grid
        )
        assert scanned == min(report.margins[player], Fraction(0))
    assert report.is_nash == all(margin >= 0 for margin in report.margins)


@given(
    tests.params_strategy(),
    tests.profile_strategy(),
    tests.fractions(denominator=16, high=16),
    tests.fractions(denominator=16, high=16),
)
def test_mixed_payoff_affine_in_own_probability(
    params: GameParams, profile: MixedProfile, low: Fraction, high: Fraction
):
    """
    Test that payoffs at the midpoint of two probabilities average the ends.
    """
    middle = (low + high) / 2
    for player in range(3):
        ends = [
            mixed_payoff_classical(params, profile.with_player(player, value))[player]
            for value in (low, high)
        ]
        at_middle = mixed_payoff_classical(
            params, profile.with_player(player, middle)
        )[player]
        assert at_middle == (ends[0] + ends[1]) / 2


@given(tests.params_strategy())
def test_enumerate_pure_ne_brute_force(params: GameParams):
    """
    Test pure equilibria against every unilateral switch.
    """
    expected = []
    for pure in all_pure_profiles():
        payoffs = payoff_table(params, pure)
        stable = True
        for player in range(3):
            switched = list(pure)
            switched[player] = next(
                strategy for strategy in rules.Strategy if strategy is not pure[player]
            )
            alice, bob, chris = switched
            if payoff_table(params, (alice, bob, chris))[player] > payoffs[player]:
                stable = False
        if stable:
            expected.append(pure)
    assert set(enumerate_pure_ne(params)) == set(expected)


def test_enumerate_pure_ne_constant_game():
    """
    Test that every profile is an equilibrium when all payoffs agree.
    """
    params = GameParams.from_values((2, 2, 2, 2, 2, 2))
    assert set(enumerate_pure_ne(params)) == set(all_pure_profiles())
