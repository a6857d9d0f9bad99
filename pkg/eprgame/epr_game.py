"""
Payoffs and Nash conditions of the game played over joint probabilities.
"""

import logging
from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Mapping, NamedTuple, Sequence, Tuple

from eprgame import rules, utils
from eprgame.classical_play import (
    MixedProfile,
    NEReport,
    endpoint_margins,
    mixed_payoff,
)
from eprgame.errors import (
    InfeasibleInputError,
    InvalidInputError,
    ProbabilityRangeError,
)
from eprgame.game_model import GameParams, PayoffTriple, payoff_for_outcome
from eprgame.joint_dist import (
    CoinMarginals,
    JointDistribution,
    block_indices,
    check_embedding_zeros,
    check_normalization,
    from_marginals,
)
from eprgame.rules import Outcome, PureProfile, Strategy

__all__ = [
    "NEReport",
    "ReducedCoefficients",
    "ReducedBrackets",
    "CompletionInput",
    "reduced_coefficients",
    "epr_pure_payoffs",
    "epr_mixed_payoff",
    "epr_is_nash",
    "factorizable_pure_payoffs",
    "ccc_coefficients",
    "ccc_margins",
    "ddd_margins",
    "reduced_factorizable_ne",
    "complete_distribution",
    "completion_forms",
]

ZERO, ONE = Fraction(0), Fraction(1)
CCC_DEVIATIONS: Tuple[PureProfile, ...] = (
    (Strategy.SECOND, Strategy.FIRST, Strategy.FIRST),
    (Strategy.FIRST, Strategy.SECOND, Strategy.FIRST),
    (Strategy.FIRST, Strategy.FIRST, Strategy.SECOND),
)
ALL_FIRST: PureProfile = (Strategy.FIRST,) * 3
ALL_SECOND: PureProfile = (Strategy.SECOND,) * 3


class ReducedCoefficients(NamedTuple):
    """
    Coefficients of the reduced six-coin Nash conditions.
    """

    delta1: Fraction
    delta2: Fraction
    delta3: Fraction


class ReducedBrackets(NamedTuple):
    """
    Slope of each player's payoff in their own probability.
    """

    alice: Fraction
    bob: Fraction
    chris: Fraction


@dataclass(frozen=True)
class CompletionInput:
    """
    The ten independent probabilities of an embedded distribution.
    """

    p1: Fraction
    p3: Fraction
    p5: Fraction
    p6: Fraction
    p13: Fraction
    p15: Fraction
    p18: Fraction
    p20: Fraction
    p22: Fraction
    p27: Fraction

    def __post_init__(self):
        for name in rules.INDEPENDENT_NAMES:
            value = utils.as_fraction(getattr(self, name))
            if not ZERO <= value <= ONE:
                raise ProbabilityRangeError(
                    f"Expected {name} to be within [0, 1], got {value}."
                )
            object.__setattr__(self, name, value)

    @classmethod
    def from_values(cls, values: Sequence[Any]) -> "CompletionInput":
        """
        Build from values in p1, p3, p5, p6, p13, p15, p18, p20, p22, p27 order.
        """
        if len(values) != len(rules.INDEPENDENT_NAMES):
            raise ValueError(
                f"Expected {len(rules.INDEPENDENT_NAMES)} values, got {len(values)}."
            )
        return cls(**dict(zip(rules.INDEPENDENT_NAMES, values)))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]) -> "CompletionInput":
        """
        Build from {"p1": value, ...}.
        """
        return cls(**{name: mapping[name] for name in rules.INDEPENDENT_NAMES})

    @classmethod
    def from_distribution(cls, d: JointDistribution) -> "CompletionInput":
        """
        Read the independents back from a distribution.
        """
        return cls.from_values([d[index] for index in rules.INDEPENDENT_INDICES])

    def values(self) -> Tuple[Fraction, ...]:
        """
        Independents in index order.
        """
        return tuple(getattr(self, item.name) for item in fields(self))


REFERENCE_INDEPENDENTS = CompletionInput.from_values(
    [
        Fraction(1, 10),
        Fraction(13, 100),
        Fraction(16, 100),
        Fraction(1, 10),
        Fraction(14, 100),
        Fraction(2, 5),
        Fraction(13, 100),
        Fraction(1, 4),
        Fraction(37, 100),
        Fraction(1, 5),
    ]
)


def reference_params() -> GameParams:
    """
    Reference ratio parameters scaled by beta = 100.
    """
    return GameParams.from_ratios(
        beta=100,
        alpha_beta=Fraction(9, 10),
        theta_beta=Fraction(1, 100),
        delta_theta=Fraction(1, 5),
        omega_beta=Fraction(1, 100),
        epsilon_omega=Fraction(9, 10),
    )


def reduced_coefficients(params: GameParams) -> ReducedCoefficients:
    """
    Get the coefficients of the reduced six-coin Nash conditions.

    >>> reduced_coefficients(GameParams.from_values((7, 9, 4, 1, 5, 3)))
    ReducedCoefficients(delta1=Fraction(-2, 1), delta2=Fraction(1, 1), delta3=Fraction(-2, 1))
    """
    g = params
    return ReducedCoefficients(
        delta1=g.alpha - g.beta - 2 * g.delta + 2 * g.theta + g.epsilon - g.omega,
        delta2=g.delta - g.epsilon - g.theta + g.omega,
        delta3=g.epsilon - g.omega,
    )


def _require_normalized(d: JointDistribution):
    verdict = check_normalization(d)
    if not verdict.passed:
        raise InvalidInputError(
            "Expected a normalized distribution, "
            f"blocks {verdict.failed_blocks} and "
            f"negative entries {verdict.negative_indices} fail."
        )


def _require_embedded(d: JointDistribution):
    _require_normalized(d)
    verdict = check_embedding_zeros(d)
    if not verdict.passed:
        raise InvalidInputError(
            f"Expected vanishing entries at {verdict.nonzero_indices}."
        )


def _block_payoffs(
    params: GameParams, d: JointDistribution, block: PureProfile
) -> PayoffTriple:
    totals = [ZERO, ZERO, ZERO]
    for index, outcome in zip(block_indices(block), rules.OUTCOME_ORDER):
        weight = d[index]
        if weight == 0:
            continue
        for player, payoff in enumerate(payoff_for_outcome(params, outcome)):
            totals[player] += weight * payoff
    return PayoffTriple(*totals)


def epr_pure_payoffs(
    params: GameParams, d: JointDistribution, block: PureProfile
) -> PayoffTriple:
    """
    Get the expected payoffs when the players pick the strategies of block.
    """
    _require_normalized(d)
    return _block_payoffs(params, d, block)


def epr_mixed_payoff(
    params: GameParams, d: JointDistribution, profile: MixedProfile
) -> PayoffTriple:
    """
    Get the trilinear mixture of block payoffs.

    x, y and z are the probabilities of choosing the first coin or direction.
    """
    _require_normalized(d)
    return mixed_payoff(lambda block: _block_payoffs(params, d, block), profile)


def epr_is_nash(
    params: GameParams, d: JointDistribution, profile: MixedProfile
) -> NEReport:
    """
    Check the Nash conditions of a profile over joint probabilities.
    """
    _require_normalized(d)
    return endpoint_margins(
        lambda mixed: mixed_payoff(
            lambda block: _block_payoffs(params, d, block), mixed
        ),
        profile,
    )


def factorizable_pure_payoffs(
    params: GameParams, m: CoinMarginals, block: PureProfile
) -> PayoffTriple:
    """
    Get block payoffs as the coin-product expansion of six independent coins.
    """
    if not m.in_range:
        raise ProbabilityRangeError(
            f"Expected all coin marginals within [0, 1], got {m.values()}."
        )
    totals = [ZERO, ZERO, ZERO]
    for outcome in rules.OUTCOME_ORDER:
        weight = ONE
        for player, (strategy, value) in enumerate(zip(block, outcome)):
            heads = m.coin(player, strategy)
            weight *= heads if value is Outcome.PLUS else ONE - heads
        for player, payoff in enumerate(payoff_for_outcome(params, outcome)):
            totals[player] += weight * payoff
    return PayoffTriple(*totals)


def ccc_coefficients(params: GameParams) -> Tuple[Tuple[Fraction, ...], ...]:
    """
    Get the (C,C,C) margins divided by beta as linear forms over p1..p64.

    Row i holds the coefficients of player i's payoff at (C,C,C) minus their
    payoff after defecting alone.
    """
    if params.beta == 0:
        raise InvalidInputError("Expected nonzero beta for beta-normalized margins.")
    rows = []
    for player, deviation in enumerate(CCC_DEVIATIONS):
        row = [ZERO] * rules.DISTRIBUTION_SIZE
        for sign, block in ((ONE, ALL_FIRST), (-ONE, deviation)):
            for index, outcome in zip(block_indices(block), rules.OUTCOME_ORDER):
                payoff = payoff_for_outcome(params, outcome)[player]
                row[index - 1] += sign * payoff / params.beta
        rows.append(tuple(row))
    return tuple(rows)


def _ratio_margins(params: GameParams, d: JointDistribution) -> Tuple[Fraction, ...]:
    g = params
    alpha_beta = g.alpha / g.beta
    theta_beta = g.theta / g.beta
    omega_beta = g.omega / g.beta
    # delta/theta and epsilon/omega only appear scaled by theta/beta and omega/beta
    delta_beta = theta_beta * (g.delta / g.theta) if g.theta else g.delta / g.beta
    epsilon_beta = omega_beta * (g.epsilon / g.omega) if g.omega else g.epsilon / g.beta
    p = d.__getitem__
    return (
        (p(5) + alpha_beta * p(1) - p(13))
        + theta_beta * (p(6) + p(7) - p(14) - p(15))
        + delta_beta * (p(2) + p(3))
        + omega_beta * (p(8) - p(16))
        + epsilon_beta * p(4),
        (p(2) + alpha_beta * p(1) - p(18))
        + theta_beta * (p(4) + p(6) - p(20) - p(22))
        + delta_beta * (p(3) + p(5))
        + omega_beta * (p(8) - p(24))
        + epsilon_beta * p(7),
        (p(3) + alpha_beta * p(1) - p(27))
        + theta_beta * (p(4) + p(7) - p(28) - p(31))
        + delta_beta * (p(2) + p(5))
        + omega_beta * (p(8) - p(32))
        + epsilon_beta * p(6),
    )


def ccc_margins(
    params: GameParams, d: JointDistribution
) -> Tuple[Fraction, Fraction, Fraction]:
    """
    Get the beta-normalized (C,C,C) deviation margins of an embedded distribution.

    >>> from eprgame.joint_dist import from_marginals
    >>> params = GameParams.from_values((7, 9, 4, 1, 5, 3))
    >>> d = from_marginals(CoinMarginals.of(1, 1, 1, 0, 0, 0))
    >>> ccc_margins(params, d)[0]
    Fraction(-2, 9)
    """
    _require_embedded(d)
    if params.beta == 0:
        raise InvalidInputError("Expected nonzero beta for beta-normalized margins.")
    alice, bob, chris = _ratio_margins(params, d)
    generic = epr_is_nash(params, d, MixedProfile.pure(ALL_FIRST))
    if tuple(margin / params.beta for margin in generic.margins) != (alice, bob, chris):
        raise InvalidInputError(
            "Ratio form of the (C,C,C) margins disagrees with the payoff differences."
        )
    return alice, bob, chris


def ddd_margins(
    params: GameParams, d: JointDistribution
) -> Tuple[Fraction, Fraction, Fraction]:
    """
    Get the (D,D,D) deviation margins of an embedded distribution.

    Each margin reduces to a single entry times omega - epsilon.
    """
    _require_embedded(d)
    gap = params.omega - params.epsilon
    alice, bob, chris = (d[36] * gap, d[47] * gap, d[54] * gap)
    generic = epr_is_nash(params, d, MixedProfile.pure(ALL_SECOND))
    if generic.margins != (alice, bob, chris):
        raise InvalidInputError(
            "Closed form of the (D,D,D) margins disagrees with the payoff differences."
        )
    return alice, bob, chris


def reduced_factorizable_ne(
    params: GameParams, m: CoinMarginals, profile: MixedProfile
) -> ReducedBrackets:
    """
    Get the slope of each player's payoff in their own probability.

    Valid when every second coin shows -1. The margin of deviating from x* to
    x is (x* - x) times the slope, so a negative slope makes the first
    strategy unprofitable.
    """
    if m.second_coins() != (ZERO, ZERO, ZERO):
        raise InvalidInputError(
            f"Expected second coin marginals to be zero, got {m.second_coins()}."
        )
    if not m.in_range:
        raise ProbabilityRangeError(
            f"Expected first coin marginals within [0, 1], got {m.first_coins()}."
        )
    delta1, delta2, delta3 = reduced_coefficients(params)
    r, rp, rpp = m.first_coins()
    x, y, z = profile.as_tuple()
    product = r * rp * rpp
    brackets = ReducedBrackets(
        alice=y * z * product * delta1 + r * (z * rpp + y * rp) * delta2 + r * delta3,
        bob=x * z * product * delta1 + rp * (z * rpp + x * r) * delta2 + rp * delta3,
        chris=x * y * product * delta1 + rpp * (y * rp + x * r) * delta2 + rpp * delta3,
    )
    report = epr_is_nash(params, from_marginals(m), profile)
    for star, deviation, margin, bracket in zip(
        profile.as_tuple(), report.binding_deviations, report.margins, brackets
    ):
        if margin != (star - deviation) * bracket:
            raise InvalidInputError(
                "Reduced brackets disagree with the payoff differences."
            )
    return brackets


def _complete_entries(values: Sequence[Any]) -> Dict[int, Any]:
    """
    Solve the normalization and marginal chains for the dependent entries.

    Works on any values supporting ring arithmetic with integers.
    """
    p = dict(zip(rules.INDEPENDENT_INDICES, values))
    p[2] = p[18] + p[22] - p[1] - p[5] - p[6]
    p[7] = p[13] + p[15] - p[1] - p[3] - p[5]
    p[4] = p[18] + p[20] - p[1] - p[2] - p[3]
    p[8] = 1 - (p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7])
    p[14] = p[1] + p[2] + p[5] + p[6] - p[13]
    p[16] = 1 - p[13] - p[14] - p[15]
    p[24] = 1 - p[18] - p[20] - p[22]
    p[28] = p[1] + p[2] + p[3] + p[4] - p[27]
    p[31] = p[1] + p[3] + p[5] + p[7] - p[27]
    p[32] = 1 - p[27] - p[28] - p[31]
    p[36] = p[1] + p[2] + p[3] + p[4]
    p[40] = 1 - p[36]
    p[47] = p[1] + p[3] + p[5] + p[7]
    p[48] = 1 - p[47]
    p[54] = p[1] + p[2] + p[5] + p[6]
    p[56] = 1 - p[54]
    p[64] = ONE
    return p


@lru_cache(maxsize=None)
def completion_forms() -> Dict[int, Tuple[Fraction, Tuple[Fraction, ...]]]:
    """
    Get every entry of a completed distribution as an affine form.

    Maps index to (constant, coefficients over the ten independents).
    Forbidden entries map to the zero form.
    """
    size = len(rules.INDEPENDENT_INDICES)
    constants = _complete_entries([ZERO] * size)
    forms: Dict[int, Tuple[Fraction, Tuple[Fraction, ...]]] = dict()
    units = [
        _complete_entries([ONE if column == row else ZERO for column in range(size)])
        for row in range(size)
    ]
    for index in range(1, rules.DISTRIBUTION_SIZE + 1):
        if index in rules.EMBEDDING_ZEROS:
            forms[index] = (ZERO, (ZERO,) * size)
            continue
        constant = constants[index]
        forms[index] = (
            constant,
            tuple(unit[index] - constant for unit in units),
        )
    return forms


def complete_distribution(completion: CompletionInput) -> JointDistribution:
    """
    Complete an embedded no-signaling distribution from its ten independents.

    >>> d = complete_distribution(REFERENCE_INDEPENDENTS)
    >>> d[2], d[36], d[64]
    (Fraction(7, 50), Fraction(19, 50), Fraction(1, 1))
    """
    entries = _complete_entries(completion.values())
    for index in rules.DEPENDENT_INDICES:
        value = entries[index]
        if not ZERO <= value <= ONE:
            logging.info(
                "Completion infeasible.",
                extra=dict(index=index, value=str(value)),
            )
            raise InfeasibleInputError(index=index, value=value)
    return JointDistribution.from_mapping(entries)


def margin_forms(
    params: GameParams,
) -> List[Tuple[Fraction, Tuple[Fraction, ...]]]:
    """
    Get the beta-normalized (C,C,C) margins as affine forms of the independents.
    """
    forms = completion_forms()
    size = len(rules.INDEPENDENT_INDICES)
    margins = []
    for row in ccc_coefficients(params):
        constant = ZERO
        coefficients = [ZERO] * size
        for index, weight in enumerate(row, start=1):
            if weight == 0:
                continue
            form_constant, form_coefficients = forms[index]
            constant += weight * form_constant
            for column, value in enumerate(form_coefficients):
                coefficients[column] += weight * value
        margins.append((constant, tuple(coefficients)))
    return margins


def evaluate_form(
    form: Tuple[Fraction, Tuple[Fraction, ...]], values: Sequence[Fraction]
) -> Fraction:
    """
    Evaluate an affine form at values.
    """
    constant, coefficients = form
    return constant + sum(
        (coefficient * value for coefficient, value in zip(coefficients, values)), ZERO
    )

