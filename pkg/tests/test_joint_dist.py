"""
Tests for joint_dist.py.
"""

from fractions import Fraction

import pytest
from hypothesis import assume, given

import tests
from eprgame import rules
from eprgame.epr_game import REFERENCE_INDEPENDENTS, complete_distribution
from eprgame.errors import InvalidInputError, ProbabilityRangeError
from eprgame.joint_dist import (
    CoinMarginals,
    JointDistribution,
    block_indices,
    check_embedding_zeros,
    check_full_no_signaling,
    check_no_signaling,
    check_normalization,
    extract_marginals,
    from_marginals,
    no_signaling_chains,
    two_party_chains,
)


def test_joint_distribution_length():
    """
    Test that exactly 64 entries are required.
    """
    with pytest.raises(InvalidInputError):
        JointDistribution(p=(Fraction(1),) * 63)
    with pytest.raises(InvalidInputError):
        JointDistribution.from_mapping({65: 1})
    with pytest.raises(IndexError):
        JointDistribution.zeros()[0]


def test_block_indices_contiguous():
    """
    Test that block b covers p-indices 8(b-1)+1 .. 8b.
    """
    for number, profile in enumerate(rules.BLOCK_ORDER, start=1):
        start = rules.BLOCK_SIZE * (number - 1) + 1
        assert block_indices(profile) == tuple(range(start, start + 8))


def test_from_marginals_deterministic_coins():
    """
    Test the point masses of coins that always show one side.
    """
    d = from_marginals(CoinMarginals.of(1, 1, 1, 0, 0, 0))
    ones = {1, 13, 18, 27, 36, 47, 54, 64}
    for index, value in d.as_mapping().items():
        assert value == (1 if index in ones else 0)


def test_from_marginals_out_of_range():
    """
    Test that invalid coin marginals are rejected.
    """
    with pytest.raises(ProbabilityRangeError):
        from_marginals(CoinMarginals.of(2, 0, 0, 0, 0, 0))


@given(tests.marginals_strategy())
def test_factorizable_passes_checks(m: CoinMarginals):
    """
    Test that products of independent coins satisfy every constraint.
    """
    d = from_marginals(m)
    assert check_normalization(d).passed
    assert check_no_signaling(d).passed
    assert check_full_no_signaling(d).passed
    extraction = extract_marginals(d)
    assert extraction.factorizable
    assert extraction.marginals == m


@given(tests.marginals_strategy(embedded=True))
def test_embedded_marginals_vanish(m: CoinMarginals):
    """
    Test that zero second coins leave every forbidden entry at zero.
    """
    assert check_embedding_zeros(from_marginals(m)).passed


@given(
    tests.fractions(low=1, high=99),
    tests.fractions(low=1, high=99),
    tests.fractions(low=1, high=99),
    tests.fractions(),
    tests.fractions(),
    tests.fractions(),
)
def test_nonzero_second_coins_break_embedding(
    r: Fraction, rp: Fraction, rpp: Fraction, s: Fraction, sp: Fraction, spp: Fraction
):
    """
    Test that any second coin showing +1 puts mass on a forbidden entry.
    """
    assume(max(s, sp, spp) > 0)
    m = CoinMarginals.of(r, rp, rpp, s, sp, spp)
    verdict = check_embedding_zeros(from_marginals(m))
    assert not verdict.passed
    assert set(verdict.nonzero_indices) <= rules.EMBEDDING_ZEROS


def test_uniform():
    """
    Test checks of the uniform distribution.
    """
    d = JointDistribution.uniform()
    assert check_normalization(d).passed
    assert check_no_signaling(d).passed
    assert len(check_embedding_zeros(d).nonzero_indices) == 37


def test_normalization_failures():
    """
    Test that block sums and negative entries are reported.
    """
    mapping = JointDistribution.uniform().as_mapping()
    mapping[9] = Fraction(-1, 8)
    mapping[17] = Fraction(1, 4)
    verdict = check_normalization(JointDistribution.from_mapping(mapping))
    assert not verdict.passed
    assert verdict.failed_blocks == (2, 3)
    assert verdict.negative_indices == (9,)


def test_no_signaling_violation_names_chain():
    """
    Test that shifting mass inside block 1 breaks Bob's chains only.
    """
    d = tests.perturbed_uniform()
    assert check_normalization(d).passed
    verdict = check_no_signaling(d)
    assert not verdict.passed
    assert verdict.checked == 12
    assert {violation.chain.name for violation in verdict.violations} == {
        "bob-1",
        "bob-2",
    }


def test_chain_counts():
    """
    Test the number of marginal equality chains.
    """
    chains = no_signaling_chains()
    assert len(chains) == 12
    assert all(len(chain.groups) == 4 for chain in chains)
    assert len(two_party_chains()) == 48


def test_reference_distribution_checks():
    """
    Test the constraints of the reference completion.
    """
    d = complete_distribution(REFERENCE_INDEPENDENTS)
    normalization = check_normalization(d)
    assert normalization.passed
    assert all(block_sum.total == 1 for block_sum in normalization.block_sums)
    assert check_no_signaling(d).passed
    assert check_embedding_zeros(d).passed


def test_extract_marginals_reference():
    """
    Test that the reference completion is not factorizable.
    """
    d = complete_distribution(REFERENCE_INDEPENDENTS)
    extraction = extract_marginals(d)
    assert extraction.marginals.values() == (
        Fraction(38, 100),
        Fraction(54, 100),
        Fraction(1, 2),
        0,
        0,
        0,
    )
    assert not extraction.factorizable
    assert 1 in extraction.mismatched_indices
    assert from_marginals(extraction.marginals)[1] == Fraction(513, 5000)
    assert d[1] == Fraction(1, 10)


def test_extract_marginals_requires_normalization():
    """
    Test that an unnormalized distribution is rejected.
    """
    with pytest.raises(InvalidInputError):
        extract_marginals(JointDistribution.zeros())


def test_extract_marginals_tolerance():
    """
    Test that a tolerance absorbs small deviations from a product.
    """
    d = from_marginals(CoinMarginals.of(*[Fraction(1, 2)] * 6))
    mapping = d.as_mapping()
    epsilon = Fraction(1, 10**12)
    mapping[1] += epsilon
    mapping[2] -= epsilon
    shifted = JointDistribution.from_mapping(mapping)
    assert not extract_marginals(shifted).factorizable
    assert extract_marginals(shifted, tolerance=Fraction(1, 10**9)).factorizable


def test_mix():
    """
    Test convex combination of distributions.
    """
    d = complete_distribution(REFERENCE_INDEPENDENTS)
    mixed = d.mix(JointDistribution.uniform(), Fraction(1, 2))
    assert check_normalization(mixed).passed
    assert check_no_signaling(mixed).passed
    assert mixed[64] == Fraction(9, 16)
