"""
Three-coin play of the symmetric game.

Every player holds one coin and plays the first strategy with probability
x, y or z respectively. Payoffs are trilinear in (x, y, z).
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, List, Tuple

from eprgame import rules, utils
from eprgame.errors import ProbabilityRangeError
from eprgame.game_model import GameParams, PayoffTriple, payoff_table
from eprgame.rules import PureProfile, Strategy

ZERO, ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class MixedProfile:
    """
    Probabilities of the first strategy for Alice, Bob and Chris.
    """

    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        """
        Coerce to Fraction and check the unit interval.
        """
        for name in ("x", "y", "z"):
            value = utils.as_fraction(getattr(self, name))
            if not ZERO <= value <= ONE:
                raise ProbabilityRangeError(
                    f"Expected {name} to be within [0, 1], got {value}."
                )
            object.__setattr__(self, name, value)

    @classmethod
    def of(cls, x: Any, y: Any, z: Any) -> "MixedProfile":
        """
        Build from any rational values.
        """
        return cls(x=x, y=y, z=z)

    @classmethod
    def pure(cls, profile: PureProfile) -> "MixedProfile":
        """
        Mixed profile placing all weight on a pure profile.

        >>> MixedProfile.pure(rules.BLOCK_ORDER[-1]).as_tuple()
        (Fraction(0, 1), Fraction(0, 1), Fraction(0, 1))
        """
        x, y, z = (ONE if strategy is Strategy.FIRST else ZERO for strategy in profile)
        return cls(x=x, y=y, z=z)

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        """
        Probabilities as a tuple.
        """
        return self.x, self.y, self.z

    def with_player(self, player: int, value: Fraction) -> "MixedProfile":
        """
        Replace the probability of one player.
        """
        return replace(self, **{("x", "y", "z")[player]: value})


@dataclass(frozen=True)
class NEReport:
    """
    Deviation margins of a profile.

    The margin of a player is the payoff of the profile minus the payoff of
    the player's best unilateral deviation. binding_deviations holds the
    probability the player deviates to in the binding case.
    """

    margins: Tuple[Fraction, Fraction, Fraction]
    binding_deviations: Tuple[Fraction, Fraction, Fraction]

    @property
    def is_nash(self) -> bool:
        """
        Nash iff no player gains by deviating.
        """
        return min(self.margins) >= 0


def profile_weights(profile: MixedProfile) -> Dict[PureProfile, Fraction]:
    """
    Trilinear weight of every pure profile.

    >>> weights = profile_weights(MixedProfile.of(1, 1, 1))
    >>> weights[rules.BLOCK_ORDER[0]]
    Fraction(1, 1)
    """
    weights: Dict[PureProfile, Fraction] = dict()
    for pure in rules.BLOCK_ORDER:
        weight = ONE
        for strategy, probability in zip(pure, profile.as_tuple()):
            weight *= probability if strategy is Strategy.FIRST else ONE - probability
        weights[pure] = weight
    return weights


def mixed_payoff(
    pure_payoff: Callable[[PureProfile], PayoffTriple], profile: MixedProfile
) -> PayoffTriple:
    """
    Mix pure profile payoffs with the trilinear weights of profile.
    """
    totals = [ZERO, ZERO, ZERO]
    for pure, weight in profile_weights(profile).items():
        if weight == 0:
            continue
        for player, payoff in enumerate(pure_payoff(pure)):
            totals[player] += weight * payoff
    return PayoffTriple(*totals)


def endpoint_margins(
    payoff: Callable[[MixedProfile], PayoffTriple], profile: MixedProfile
) -> NEReport:
    """
    Get deviation margins of profile for a payoff affine in each probability.

    A probability at 0 is only compared against 1 and vice versa, interior
    probabilities against both endpoints.
    """
    current = payoff(profile)
    margins: List[Fraction] = []
    deviations: List[Fraction] = []
    for player, value in enumerate(profile.as_tuple()):
        endpoints = [endpoint for endpoint in (ZERO, ONE) if endpoint != value]
        candidates = [
            (
                current[player] - payoff(profile.with_player(player, endpoint))[player],
                endpoint,
            )
            for endpoint in endpoints
        ]
        margin, deviation = min(candidates)
        margins.append(margin)
        deviations.append(deviation)
    return NEReport(
        margins=(margins[0], margins[1], margins[2]),
        binding_deviations=(deviations[0], deviations[1], deviations[2]),
    )


def mixed_payoff_classical(params: GameParams, profile: MixedProfile) -> PayoffTriple:
    """
    Get the mixed-strategy payoffs of the three-coin game.

    >>> params = GameParams.from_values((7, 9, 4, 1, 5, 3))
    >>> half = Fraction(1, 2)
    >>> [str(value) for value in mixed_payoff_classical(params, MixedProfile.of(half, half, half))]
    ['19/4', '19/4', '19/4']
    """
    return mixed_payoff(lambda pure: payoff_table(params, pure), profile)


def is_nash_classical(params: GameParams, profile: MixedProfile) -> NEReport:
    """
    Check the Nash conditions of a three-coin profile.
    """
    return endpoint_margins(
        lambda mixed: mixed_payoff_classical(params, mixed), profile
    )


def pure_deviation_margins(
    params: GameParams, profile: PureProfile
) -> Tuple[Fraction, Fraction, Fraction]:
    """
    Payoff loss of each player when switching strategy alone.
    """
    base = payoff_table(params, profile)
    margins = []
    for player in range(3):
        deviated = list(profile)
        deviated[player] = (
            Strategy.SECOND if profile[player] is Strategy.FIRST else Strategy.FIRST
        )
        alice, bob, chris = deviated
        margins.append(base[player] - payoff_table(params, (alice, bob, chris))[player])
    return margins[0], margins[1], margins[2]


def enumerate_pure_ne(params: GameParams) -> List[PureProfile]:
    """
    Get all pure-strategy Nash equilibria of the game.

    >>> params = GameParams.from_values((7, 9, 4, 1, 5, 3))
    >>> [[strategy.pd_name for strategy in pure] for pure in enumerate_pure_ne(params)]
    [['D', 'D', 'D']]
    """
    return [
        pure
        for pure in rules.BLOCK_ORDER
        if min(pure_deviation_margins(params, pure)) >= 0
    ]


def all_pure_profiles() -> List[PureProfile]:
    """
    All eight pure profiles in lexicographic strategy order.
    """
    return [
        (alice, bob, chris)
        for alice, bob, chris in product((Strategy.FIRST, Strategy.SECOND), repeat=3)
    ]
