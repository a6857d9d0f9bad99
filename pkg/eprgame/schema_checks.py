"""
Value checks used in input file validation.
"""

import re
from fractions import Fraction
from typing import Any

RATIONAL_PATTERN = r"^[+-]?(\d+(/\d+)?|\d*\.\d+)$"
INDEX_PATTERN = r"^\d+$"


def pattern_matcher(value: str, pattern_str: str) -> bool:
    """
    Check if string matches regex pattern.

    >>> pattern_matcher("1/5", RATIONAL_PATTERN)
    True

    >>> pattern_matcher(None, RATIONAL_PATTERN)
    False
    """
    pattern = re.compile(pattern_str)
    try:
        pattern_match = pattern.match(value)
    except TypeError:
        return False
    return pattern_match is not None


def rational_check(raw_value: Any) -> bool:
    """
    Check that value is an exact rational literal with nonzero denominator.

    >>> rational_check("13/100")
    True

    >>> rational_check("0.38")
    True

    >>> rational_check("1/0")
    False

    >>> rational_check("1e-3")
    False
    """
    if not isinstance(raw_value, str) or not pattern_matcher(
        raw_value, RATIONAL_PATTERN
    ):
        return False
    try:
        Fraction(raw_value)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def index_check(raw_value: Any, size: int) -> bool:
    """
    Check that value is a 1-based index literal up to size.

    >>> index_check("64", 64)
    True

    >>> index_check("0", 64)
    False

    >>> index_check("p1", 64)
    False
    """
    if not isinstance(raw_value, str) or not pattern_matcher(raw_value, INDEX_PATTERN):
        return False
    return 1 <= int(raw_value) <= size
