"""
Tests for utils.py.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis.strategies import integers
from rich.console import Console
from rich.table import Table
from rich.text import Text

import tests
from eprgame import utils


@pytest.mark.parametrize("value,expected", tests.test_as_fraction_params())
def test_as_fraction(value, expected: Fraction):
    """
    Test as_fraction.
    """
    assert utils.as_fraction(value) == expected


@pytest.mark.parametrize("value", [True, None, [1], "1/0", "one"])
def test_as_fraction_invalid(value):
    """
    Test that non-rational values raise.
    """
    with pytest.raises((TypeError, ValueError)):
        utils.as_fraction(value)


@pytest.mark.parametrize(
    "value,places,expected", tests.test_truncated_string_params()
)
def test_truncated_string(value: Fraction, places: int, expected: str):
    """
    Test truncated_string.
    """
    assert utils.truncated_string(value, places=places) == expected


@pytest.mark.parametrize(
    "value,expected",
    [
        (Fraction(0), "0.00000"),
        (Fraction(43, 2500), "0.0172000"),
        (Fraction(-1, 8), "-0.125000"),
        (Fraction(7), "7.00000"),
    ],
)
def test_decimal_string(value: Fraction, expected: str):
    """
    Test that decimal_string keeps six significant digits.
    """
    assert utils.decimal_string(value) == expected


def test_parse_triple_invalid():
    """
    Test that parse_triple requires three values.
    """
    with pytest.raises(ValueError):
        utils.parse_triple("1,0")


@given(integers(min_value=0, max_value=10**6), integers(min_value=1, max_value=64))
def test_partition_counts(total: int, workers: int):
    """
    Test that partitions cover the total and differ by at most one.
    """
    counts = utils.partition_counts(total, workers)
    assert len(counts) == workers
    assert sum(counts) == total
    assert max(counts) - min(counts) <= 1


def test_worker_generator():
    """
    Test that streams depend on seed and worker.
    """
    first = utils.worker_generator(1, 0).integers(0, 2**32, size=4)
    again = utils.worker_generator(1, 0).integers(0, 2**32, size=4)
    other_worker = utils.worker_generator(1, 1).integers(0, 2**32, size=4)
    assert list(first) == list(again)
    assert list(first) != list(other_worker)


def test_create_check_table():
    """
    Test create_check_table.
    """
    result = utils.create_check_table(
        "Checks", [("normalization", True, ""), ("no-signaling", False, "bob-1")]
    )
    Console().print(result)
    assert isinstance(result, Table)
    assert result.row_count == 2


def test_create_value_table():
    """
    Test create_value_table.
    """
    result = utils.create_value_table("Values", ["Index", "Value"], [["1", "1/10"]])
    Console().print(result)
    assert isinstance(result, Table)
    assert len(result.columns) == 2


@pytest.mark.parametrize("passed,expected", [(True, "pass"), (False, "fail")])
def test_enrich_color_verdict(passed: bool, expected: str):
    """
    Test enrich_color_verdict.
    """
    result = utils.enrich_color_verdict(passed)
    assert isinstance(result, Text)
    assert result.plain == expected
