"""
Symmetric three-player, two-strategy game definition.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Any, Callable, List, NamedTuple, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from eprgame import rules, utils
from eprgame.rules import Outcome, OutcomeTriple, PureProfile, Strategy


class GameParams(BaseModel):
    """
    Payoff constants of the symmetric game.

    All cooperate pays alpha to everyone. A lone defector gets beta while the
    two cooperators get delta. Two defectors get theta while the lone
    cooperator gets epsilon. All defect pays omega to everyone.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    alpha: Fraction
    beta: Fraction
    delta: Fraction
    epsilon: Fraction
    theta: Fraction
    omega: Fraction

    @field_validator(*rules.GAME_FIELDS, mode="before")
    @classmethod
    def _coerce_rational(cls, value: Any) -> Fraction:
        """
        Coerce int, str and decimal values to Fraction.
        """
        return utils.as_fraction(value)

    @classmethod
    def from_values(cls, values: Sequence[Any]) -> GameParams:
        """
        Build from (alpha, beta, delta, epsilon, theta, omega).

        >>> GameParams.from_values((7, 9, 4, 1, 5, 3)).beta
        Fraction(9, 1)
        """
        if len(values) != len(rules.GAME_FIELDS):
            raise ValueError(
                f"Expected {len(rules.GAME_FIELDS)} payoff values, got {len(values)}."
            )
        return cls(**dict(zip(rules.GAME_FIELDS, values)))

    @classmethod
    def from_ratios(
        cls,
        beta: Any,
        alpha_beta: Any,
        theta_beta: Any,
        delta_theta: Any,
        omega_beta: Any,
        epsilon_omega: Any,
    ) -> GameParams:
        """
        Build from beta and the payoff ratios alpha/beta, theta/beta,
        delta/theta, omega/beta and epsilon/omega.

        >>> params = GameParams.from_ratios(100, "9/10", "1/100", "1/5", "1/100", "9/10")
        >>> [str(value) for value in params.values()]
        ['90', '100', '1/5', '9/10', '1', '1']
        """
        beta = utils.as_fraction(beta)
        theta = beta * utils.as_fraction(theta_beta)
        omega = beta * utils.as_fraction(omega_beta)
        return cls(
            alpha=beta * utils.as_fraction(alpha_beta),
            beta=beta,
            delta=theta * utils.as_fraction(delta_theta),
            epsilon=omega * utils.as_fraction(epsilon_omega),
            theta=theta,
            omega=omega,
        )

    def values(self) -> Tuple[Fraction, ...]:
        """
        Payoff constants in (alpha, beta, delta, epsilon, theta, omega) order.
        """
        return tuple(getattr(self, name) for name in rules.GAME_FIELDS)

    def scaled(self, factor: Any) -> GameParams:
        """
        Multiply every payoff constant by factor.
        """
        factor = utils.as_fraction(factor)
        return GameParams.from_values([value * factor for value in self.values()])


class PayoffTriple(NamedTuple):
    """
    Payoffs of Alice, Bob and Chris.
    """

    pi_a: Fraction
    pi_b: Fraction
    pi_c: Fraction


class PDCondition(NamedTuple):
    """
    Labelled strict inequality of the generalized Prisoner's Dilemma.
    """

    group: str
    description: str
    holds: Callable[[GameParams], bool]


class PDViolation(NamedTuple):
    """
    Violated generalized Prisoner's Dilemma condition.
    """

    group: str
    description: str


def pd_conditions() -> List[PDCondition]:
    """
    Get the generalized Prisoner's Dilemma conditions.

    Group a is dominance of the second strategy, group b is monotonicity in the
    number of cooperating opponents and group c makes every two-player
    sub-game a Prisoner's Dilemma.
    """
    half = Fraction(1, 2)
    return [
        PDCondition("a", "beta > alpha", lambda g: g.beta > g.alpha),
        PDCondition("a", "omega > epsilon", lambda g: g.omega > g.epsilon),
        PDCondition("a", "theta > delta", lambda g: g.theta > g.delta),
        PDCondition("b", "beta > theta", lambda g: g.beta > g.theta),
        PDCondition("b", "theta > omega", lambda g: g.theta > g.omega),
        PDCondition("b", "alpha > delta", lambda g: g.alpha > g.delta),
        PDCondition("b", "delta > epsilon", lambda g: g.delta > g.epsilon),
        PDCondition("c", "delta > omega", lambda g: g.delta > g.omega),
        PDCondition("c", "alpha > theta", lambda g: g.alpha > g.theta),
        PDCondition(
            "c",
            "delta > (epsilon + theta)/2",
            lambda g: g.delta > half * (g.epsilon + g.theta),
        ),
        PDCondition(
            "c",
            "alpha > (delta + beta)/2",
            lambda g: g.alpha > half * (g.delta + g.beta),
        ),
    ]


def payoff_table(params: GameParams, profile: PureProfile) -> PayoffTriple:
    """
    Get the payoffs of a pure strategy profile.

    >>> params = GameParams.from_values((7, 9, 4, 1, 5, 3))
    >>> [str(value) for value in payoff_table(params, rules.BLOCK_ORDER[1])]
    ['9', '4', '4']
    """
    defecting = [strategy is Strategy.SECOND for strategy in profile]
    defectors = sum(defecting)
    if defectors == 0:
        payoffs = [params.alpha] * 3
    elif defectors == 3:
        payoffs = [params.omega] * 3
    elif defectors == 1:
        payoffs = [params.beta if defects else params.delta for defects in defecting]
    else:
        payoffs = [params.theta if defects else params.epsilon for defects in defecting]
    return PayoffTriple(*payoffs)


def outcome_profile(outcome: OutcomeTriple) -> PureProfile:
    """
    Map +1 to the first and -1 to the second strategy per player.
    """
    alice, bob, chris = (value.strategy for value in outcome)
    return alice, bob, chris


def payoff_for_outcome(params: GameParams, outcome: OutcomeTriple) -> PayoffTriple:
    """
    Get the payoffs rewarded for an outcome triple.

    >>> params = GameParams.from_values((7, 9, 4, 1, 5, 3))
    >>> minus, plus = Outcome.MINUS, Outcome.PLUS
    >>> [str(value) for value in payoff_for_outcome(params, (minus, plus, plus))]
    ['9', '4', '4']
    """
    return payoff_table(params, outcome_profile(outcome))


def validate_pd(params: GameParams) -> List[PDViolation]:
    """
    Get the violated generalized Prisoner's Dilemma conditions.

    An empty list means params define a valid generalized Prisoner's Dilemma.
    Equality violates a condition.

    >>> validate_pd(GameParams.from_values((7, 9, 4, 1, 5, 3)))
    []
    """
    return [
        PDViolation(group=condition.group, description=condition.description)
        for condition in pd_conditions()
        if not condition.holds(params)
    ]


def permute_profile(
    profile: Sequence[Any], order: Tuple[int, int, int]
) -> Tuple[Any, Any, Any]:
    """
    Reorder the three player slots of a profile or payoff triple.

    >>> permute_profile(("a", "b", "c"), (2, 0, 1))
    ('c', 'a', 'b')
    """
    first, second, third = (profile[index] for index in order)
    return first, second, third


def player_orders() -> List[Tuple[int, int, int]]:
    """
    All six reorderings of the players.
    """
    return [(first, second, third) for first, second, third in permutations(range(3))]
