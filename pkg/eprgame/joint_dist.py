"""
Joint outcome probabilities of the six-coin and EPR settings.

A distribution holds 64 entries p1..p64. Entries 8(b-1)+1 .. 8b belong to
block b of ``rules.BLOCK_ORDER`` and, inside a block, follow
``rules.OUTCOME_ORDER``.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from eprgame import rules, utils
from eprgame.errors import InvalidInputError, ProbabilityRangeError
from eprgame.rules import OutcomeTriple, Player, PureProfile, Strategy

ZERO, ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class CoinMarginals:
    """
    Probabilities of outcome +1 for the first (r) and second (s) coins.

    Values are not range checked since marginals read off a non-factorizable
    distribution may leave the unit interval.
    """

    r: Fraction
    rp: Fraction
    rpp: Fraction
    s: Fraction
    sp: Fraction
    spp: Fraction

    def __post_init__(self):
        for name in ("r", "rp", "rpp", "s", "sp", "spp"):
            object.__setattr__(self, name, utils.as_fraction(getattr(self, name)))

    @classmethod
    def of(cls, *values: Any) -> "CoinMarginals":
        """
        Build from (r, r', r'', s, s', s'').

        >>> CoinMarginals.of(1, 1, 1, 0, 0, 0).first_coins()
        (Fraction(1, 1), Fraction(1, 1), Fraction(1, 1))
        """
        r, rp, rpp, s, sp, spp = utils.as_fractions(values)
        return cls(r=r, rp=rp, rpp=rpp, s=s, sp=sp, spp=spp)

    def values(self) -> Tuple[Fraction, ...]:
        """
        Marginals in (r, r', r'', s, s', s'') order.
        """
        return self.r, self.rp, self.rpp, self.s, self.sp, self.spp

    def first_coins(self) -> Tuple[Fraction, Fraction, Fraction]:
        """
        First coin marginals of Alice, Bob and Chris.
        """
        return self.r, self.rp, self.rpp

    def second_coins(self) -> Tuple[Fraction, Fraction, Fraction]:
        """
        Second coin marginals of Alice, Bob and Chris.
        """
        return self.s, self.sp, self.spp

    def coin(self, player: int, strategy: Strategy) -> Fraction:
        """
        Marginal of the coin a player holds for strategy.
        """
        if strategy is Strategy.FIRST:
            return self.first_coins()[player]
        return self.second_coins()[player]

    @property
    def in_range(self) -> bool:
        """
        Whether all marginals are genuine probabilities.
        """
        return all(ZERO <= value <= ONE for value in self.values())


@dataclass(frozen=True)
class JointDistribution:
    """
    Sequence of 64 exact rationals indexed from 1.
    """

    p: Tuple[Fraction, ...]

    def __post_init__(self):
        entries = utils.as_fractions(self.p)
        if len(entries) != rules.DISTRIBUTION_SIZE:
            raise InvalidInputError(
                f"Expected {rules.DISTRIBUTION_SIZE} entries, got {len(entries)}."
            )
        object.__setattr__(self, "p", entries)

    def __getitem__(self, index: int) -> Fraction:
        if not 1 <= index <= rules.DISTRIBUTION_SIZE:
            raise IndexError(f"Index {index} outside 1..{rules.DISTRIBUTION_SIZE}.")
        return self.p[index - 1]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.p)

    def __len__(self) -> int:
        return len(self.p)

    @classmethod
    def zeros(cls) -> "JointDistribution":
        """
        All-zero vector.
        """
        return cls(p=(ZERO,) * rules.DISTRIBUTION_SIZE)

    @classmethod
    def uniform(cls) -> "JointDistribution":
        """
        Every entry 1/8.

        >>> JointDistribution.uniform()[64]
        Fraction(1, 8)
        """
        return cls(p=(Fraction(1, rules.BLOCK_SIZE),) * rules.DISTRIBUTION_SIZE)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Any]) -> "JointDistribution":
        """
        Build from {index: value}; omitted indices are 0.

        >>> JointDistribution.from_mapping({64: 1})[64]
        Fraction(1, 1)
        """
        entries = [ZERO] * rules.DISTRIBUTION_SIZE
        for index, value in mapping.items():
            if not 1 <= int(index) <= rules.DISTRIBUTION_SIZE:
                raise InvalidInputError(
                    f"Index {index} outside 1..{rules.DISTRIBUTION_SIZE}."
                )
            entries[int(index) - 1] = utils.as_fraction(value)
        return cls(p=tuple(entries))

    def as_mapping(self) -> Dict[int, Fraction]:
        """
        All entries keyed by 1-based index.
        """
        return {index: value for index, value in enumerate(self.p, start=1)}

    def block(self, profile: PureProfile) -> Tuple[Fraction, ...]:
        """
        The eight entries of a block in within-block order.
        """
        start = (block_number(profile) - 1) * rules.BLOCK_SIZE
        return self.p[start : start + rules.BLOCK_SIZE]

    def total(self, indices: Sequence[int]) -> Fraction:
        """
        Sum of entries at indices.
        """
        return sum((self[index] for index in indices), ZERO)

    def mix(self, other: "JointDistribution", weight: Fraction) -> "JointDistribution":
        """
        Convex combination weight * self + (1 - weight) * other.
        """
        weight = utils.as_fraction(weight)
        return JointDistribution(
            p=tuple(
                weight * mine + (ONE - weight) * theirs
                for mine, theirs in zip(self.p, other.p)
            )
        )


@dataclass(frozen=True)
class BlockSum:
    """
    Sum of one block.
    """

    block: int
    total: Fraction

    @property
    def passed(self) -> bool:
        """
        Block sums to exactly one.
        """
        return self.total == ONE


@dataclass(frozen=True)
class NormalizationVerdict:
    """
    Normalization check result.
    """

    block_sums: Tuple[BlockSum, ...]
    negative_indices: Tuple[int, ...]

    @property
    def passed(self) -> bool:
        """
        All blocks sum to one and no entry is negative.
        """
        return (
            all(block_sum.passed for block_sum in self.block_sums)
            and not self.negative_indices
        )

    @property
    def failed_blocks(self) -> Tuple[int, ...]:
        """
        Blocks whose sum differs from one.
        """
        return tuple(
            block_sum.block for block_sum in self.block_sums if not block_sum.passed
        )


@dataclass(frozen=True)
class MarginalChain:
    """
    Chain of index groups whose sums must all agree.
    """

    party: Player
    number: int
    groups: Tuple[Tuple[int, ...], ...]

    @property
    def name(self) -> str:
        """
        Identifier such as ``bob-1``.
        """
        return f"{self.party.name.lower()}-{self.number}"


@dataclass(frozen=True)
class ChainViolation:
    """
    Chain with disagreeing group sums.
    """

    chain: MarginalChain
    sums: Tuple[Fraction, ...]


@dataclass(frozen=True)
class NoSignalingVerdict:
    """
    Result of a marginal-equality check.
    """

    checked: int
    violations: Tuple[ChainViolation, ...]

    @property
    def passed(self) -> bool:
        """
        No chain is violated.
        """
        return not self.violations


@dataclass(frozen=True)
class EmbeddingVerdict:
    """
    Forbidden indices holding nonzero mass.
    """

    nonzero_indices: Tuple[int, ...]

    @property
    def passed(self) -> bool:
        """
        Every forbidden entry vanishes.
        """
        return not self.nonzero_indices


@dataclass(frozen=True)
class MarginalExtraction:
    """
    Coin marginals read off a distribution and the factorizability verdict.
    """

    marginals: CoinMarginals
    factorizable: bool
    mismatched_indices: Tuple[int, ...] = field(default=())

    @property
    def in_range(self) -> bool:
        """
        Whether the extracted marginals are genuine probabilities.
        """
        return self.marginals.in_range


def block_number(profile: PureProfile) -> int:
    """
    Get 1-based block of a strategy triple.

    >>> block_number((Strategy.SECOND, Strategy.FIRST, Strategy.SECOND))
    6
    """
    return rules.BLOCK_ORDER.index(tuple(profile)) + 1


def outcome_position(outcome: OutcomeTriple) -> int:
    """
    Get 1-based position of an outcome triple inside a block.
    """
    return rules.OUTCOME_ORDER.index(tuple(outcome)) + 1


def index_of(block: PureProfile, outcome: OutcomeTriple) -> int:
    """
    Get the p-index of an outcome triple in a block.

    >>> from eprgame.rules import Outcome
    >>> plus = (Outcome.PLUS,) * 3
    >>> index_of((Strategy.SECOND, Strategy.FIRST, Strategy.SECOND), plus)
    41
    """
    return rules.BLOCK_SIZE * (block_number(block) - 1) + outcome_position(outcome)


def block_indices(profile: PureProfile) -> Tuple[int, ...]:
    """
    The eight p-indices of a block.
    """
    return tuple(index_of(profile, outcome) for outcome in rules.OUTCOME_ORDER)


def from_marginals(m: CoinMarginals) -> JointDistribution:
    """
    Build the factorizable distribution of six independent coins.

    >>> half = Fraction(1, 2)
    >>> from_marginals(CoinMarginals.of(*[half] * 6))[1]
    Fraction(1, 8)
    """
    if not m.in_range:
        raise ProbabilityRangeError(
            f"Expected all coin marginals within [0, 1], got {m.values()}."
        )
    entries = []
    for profile in rules.BLOCK_ORDER:
        for outcome in rules.OUTCOME_ORDER:
            entry = ONE
            for player, (strategy, value) in enumerate(zip(profile, outcome)):
                heads = m.coin(player, strategy)
                entry *= heads if value is rules.Outcome.PLUS else ONE - heads
            entries.append(entry)
    return JointDistribution(p=tuple(entries))


def check_normalization(
    d: JointDistribution, tolerance: Fraction = ZERO
) -> NormalizationVerdict:
    """
    Check that every block sums to one and no entry is negative.
    """
    block_sums = []
    for number, profile in enumerate(rules.BLOCK_ORDER, start=1):
        total = sum(d.block(profile), ZERO)
        if tolerance and abs(total - ONE) <= tolerance:
            total = ONE
        block_sums.append(BlockSum(block=number, total=total))
    negative = tuple(
        index for index, value in d.as_mapping().items() if value < -tolerance
    )
    return NormalizationVerdict(block_sums=tuple(block_sums), negative_indices=negative)


def _ranges(*bounds: Tuple[int, int]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(range(start, stop + 1)) for start, stop in bounds)


def _odd_even(first: int, last: int, offset: int) -> Tuple[int, ...]:
    # p_{2i-1} (offset 1) or p_{2i} (offset 0) for i in first..last
    return tuple(2 * i - offset for i in range(first, last + 1))


def no_signaling_chains() -> List[MarginalChain]:
    """
    Get the twelve single-party marginal equality chains.

    Alice's chains compare the halves of blocks differing only in the
    settings of Bob and Chris. Bob's chains compare odd and even positions,
    Chris's chains compare pairs of positions.
    """
    alice = [
        _ranges((1, 4), (17, 20), (25, 28), (33, 36)),
        _ranges((5, 8), (21, 24), (29, 32), (37, 40)),
        _ranges((9, 12), (41, 44), (49, 52), (57, 60)),
        _ranges((13, 16), (45, 48), (53, 56), (61, 64)),
    ]
    bob_first = ((1, 4), (5, 8), (13, 16), (21, 24))
    bob_second = ((9, 12), (17, 20), (25, 28), (29, 32))
    bob = [
        tuple(_odd_even(first, last, offset) for first, last in bounds)
        for bounds in (bob_first, bob_second)
        for offset in (1, 0)
    ]
    chris = [
        ((1, 2, 5, 6), (17, 18, 21, 22), (9, 10, 13, 14), (49, 50, 53, 54)),
        ((3, 4, 7, 8), (19, 20, 23, 24), (11, 12, 15, 16), (51, 52, 55, 56)),
        ((25, 26, 29, 30), (33, 34, 37, 38), (41, 42, 45, 46), (57, 58, 61, 62)),
        ((27, 28, 31, 32), (35, 36, 39, 40), (43, 44, 47, 48), (59, 60, 63, 64)),
    ]
    parties = ((Player.ALICE, alice), (Player.BOB, bob), (Player.CHRIS, chris))
    return [
        MarginalChain(party=party, number=number, groups=groups)
        for party, chains in parties
        for number, groups in enumerate(chains, start=1)
    ]


def _check_chains(
    d: JointDistribution, chains: Sequence[MarginalChain], tolerance: Fraction
) -> NoSignalingVerdict:
    violations = []
    for chain in chains:
        sums = tuple(d.total(group) for group in chain.groups)
        if max(sums) - min(sums) > tolerance:
            logging.debug(f"Marginal chain {chain.name} violated: {sums}.")
            violations.append(ChainViolation(chain=chain, sums=sums))
    return NoSignalingVerdict(checked=len(chains), violations=tuple(violations))


def check_no_signaling(
    d: JointDistribution, tolerance: Fraction = ZERO
) -> NoSignalingVerdict:
    """
    Check the single-party marginal equality chains.
    """
    return _check_chains(d, no_signaling_chains(), tolerance=tolerance)


def two_party_chains() -> List[MarginalChain]:
    """
    Get the two-party marginal equalities.

    For every pair of players, pair setting and pair outcome, the marginal
    must not depend on the setting of the third player.
    """
    chains = []
    number = 0
    for third in Player:
        pair = [player.value for player in Player if player is not third]
        for settings in product((Strategy.FIRST, Strategy.SECOND), repeat=2):
            blocks = []
            for third_setting in (Strategy.FIRST, Strategy.SECOND):
                profile = [Strategy.FIRST] * 3
                profile[pair[0]], profile[pair[1]] = settings
                profile[third.value] = third_setting
                blocks.append((profile[0], profile[1], profile[2]))
            for values in product((rules.Outcome.PLUS, rules.Outcome.MINUS), repeat=2):
                groups = tuple(
                    tuple(
                        index_of(block, outcome)
                        for outcome in rules.OUTCOME_ORDER
                        if (outcome[pair[0]], outcome[pair[1]]) == values
                    )
                    for block in blocks
                )
                number += 1
                chains.append(MarginalChain(party=third, number=number, groups=groups))
    return chains


def check_full_no_signaling(
    d: JointDistribution, tolerance: Fraction = ZERO
) -> NoSignalingVerdict:
    """
    Check the two-party marginal equalities.

    The named party of each reported chain is the player whose setting
    change must leave the other two unaffected.
    """
    return _check_chains(d, two_party_chains(), tolerance=tolerance)


def check_embedding_zeros(
    d: JointDistribution, tolerance: Fraction = ZERO
) -> EmbeddingVerdict:
    """
    Check that the 37 forbidden entries vanish.

    >>> len(check_embedding_zeros(JointDistribution.uniform()).nonzero_indices)
    37
    """
    return EmbeddingVerdict(
        nonzero_indices=tuple(
            index
            for index in sorted(rules.EMBEDDING_ZEROS)
            if abs(d[index]) > tolerance
        )
    )


def read_marginals(d: JointDistribution) -> CoinMarginals:
    """
    Read the six single-party marginals off the chain representatives.
    """
    return CoinMarginals(
        r=d.total((1, 2, 3, 4)),
        rp=d.total((1, 3, 5, 7)),
        rpp=d.total((1, 2, 5, 6)),
        s=d.total((9, 10, 11, 12)),
        sp=d.total((17, 19, 21, 23)),
        spp=d.total((25, 26, 29, 30)),
    )


def extract_marginals(
    d: JointDistribution, tolerance: Optional[Fraction] = None
) -> MarginalExtraction:
    """
    Get coin marginals and whether their product reproduces d.

    With a tolerance the reproduction is compared entry-wise within it.
    """
    allowed = ZERO if tolerance is None else tolerance
    normalization = check_normalization(d, tolerance=allowed)
    if not normalization.passed:
        raise InvalidInputError(
            "Expected a normalized distribution, "
            f"blocks {normalization.failed_blocks} and "
            f"negative entries {normalization.negative_indices} fail."
        )
    marginals = read_marginals(d)
    if not marginals.in_range:
        return MarginalExtraction(
            marginals=marginals,
            factorizable=False,
            mismatched_indices=tuple(range(1, rules.DISTRIBUTION_SIZE + 1)),
        )
    product_form = from_marginals(marginals)
    mismatched = tuple(
        index
        for index, (actual, expected) in enumerate(zip(d, product_form), start=1)
        if abs(actual - expected) > allowed
    )
    return MarginalExtraction(
        marginals=marginals,
        factorizable=not mismatched,
        mismatched_indices=mismatched,
    )
