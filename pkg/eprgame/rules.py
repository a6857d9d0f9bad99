"""
Game, index and reporting rules.
"""

from __future__ import annotations

from enum import Enum, unique
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Tuple

from typer import colors

GAME_FIELDS = ("alpha", "beta", "delta", "epsilon", "theta", "omega")
DISTRIBUTION_SIZE = 64
BLOCK_SIZE = 8
DECIMAL_DIGITS = 6
FLOAT_TOLERANCE = Fraction(1, 10**9)


@unique
class Player(Enum):
    """
    Players in seating order.
    """

    ALICE = 0
    BOB = 1
    CHRIS = 2


@unique
class Strategy(Enum):
    """
    Pure strategies of a player.

    In the Prisoner's Dilemma the first strategy is cooperation and the
    second is defection.
    """

    FIRST = "S1"
    SECOND = "S2"

    def label(self, player: Player) -> str:
        """
        Label of the strategy for player.

        >>> Strategy.SECOND.label(Player.CHRIS)
        'S2″'
        """
        primes = {0: "", 1: "′", 2: "″"}[player.value]
        return f"{self.value}{primes}"

    @property
    def pd_name(self) -> str:
        """
        Cooperate/defect reading of the strategy.
        """
        return "C" if self is Strategy.FIRST else "D"


@unique
class Outcome(Enum):
    """
    Measurement or coin outcome of a player.
    """

    PLUS = 1
    MINUS = -1

    @property
    def strategy(self) -> Strategy:
        """
        Strategy row whose payoff the outcome selects.
        """
        return Strategy.FIRST if self is Outcome.PLUS else Strategy.SECOND

    @property
    def sign(self) -> str:
        """
        Sign character.
        """
        return "+" if self is Outcome.PLUS else "−"


PureProfile = Tuple[Strategy, Strategy, Strategy]
OutcomeTriple = Tuple[Outcome, Outcome, Outcome]

_F, _S = Strategy.FIRST, Strategy.SECOND
_P, _M = Outcome.PLUS, Outcome.MINUS

# Blocks 1..8 occupy p-indices 1-8, 9-16, ..., 57-64.
BLOCK_ORDER: Tuple[PureProfile, ...] = (
    (_F, _F, _F),
    (_S, _F, _F),
    (_F, _S, _F),
    (_F, _F, _S),
    (_F, _S, _S),
    (_S, _F, _S),
    (_S, _S, _F),
    (_S, _S, _S),
)

# Alice's sign splits the block in halves, Chris's sign alternates in pairs
# and Bob's sign alternates singly.
OUTCOME_ORDER: Tuple[OutcomeTriple, ...] = tuple(
    (alice, bob, chris)
    for alice, chris, bob in product((_P, _M), (_P, _M), (_P, _M))
)

# Entries forced to zero when every second coin shows -1.
EMBEDDING_ZEROS: FrozenSet[int] = frozenset(
    (9, 10, 11, 12, 17, 19, 21, 23, 25, 26, 29, 30, 33, 34, 35, 37, 38, 39)
    + tuple(range(41, 47))
    + tuple(range(49, 54))
    + (55,)
    + tuple(range(57, 64))
)

PERMITTED_INDICES: Tuple[int, ...] = tuple(
    index
    for index in range(1, DISTRIBUTION_SIZE + 1)
    if index not in EMBEDDING_ZEROS
)

INDEPENDENT_INDICES: Tuple[int, ...] = (1, 3, 5, 6, 13, 15, 18, 20, 22, 27)

DEPENDENT_INDICES: Tuple[int, ...] = tuple(
    index for index in PERMITTED_INDICES if index not in INDEPENDENT_INDICES
)

INDEPENDENT_NAMES: Tuple[str, ...] = tuple(f"p{index}" for index in INDEPENDENT_INDICES)


@unique
class ExitCode(Enum):
    """
    Command line exit statuses.
    """

    SUCCESS = 0
    CHECK_FAILURE = 1
    MALFORMED_INPUT = 2


@unique
class Verdicts(Enum):
    """
    Check verdict descriptions.
    """

    PASS = "pass"
    FAIL = "fail"

    @classmethod
    def of(cls, passed: bool) -> Verdicts:
        """
        Get verdict from a boolean.

        >>> Verdicts.of(False)
        <Verdicts.FAIL: 'fail'>
        """
        return cls.PASS if passed else cls.FAIL

    @classmethod
    def color_dict(cls) -> Dict[str, str]:
        """
        Assign colors to each enum value for cli reporting.
        """
        return {
            cls.PASS.value: colors.GREEN,
            cls.FAIL.value: colors.RED,
        }


@unique
class SearchMethod(Enum):
    """
    Search methods of ne_search.
    """

    LP = "lp"
    RANDOM = "random"


@unique
class Formulation(Enum):
    """
    Linear program formulations.
    """

    REDUCED = "reduced"
    FULL = "full"


@unique
class Objective(Enum):
    """
    Search objectives.
    """

    MAX_MIN_CCC_MARGIN = "max-min-ccc-margin"


@unique
class LPStatus(Enum):
    """
    Termination statuses of the simplex solver.
    """

    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
