"""
General utilities.
"""

import logging
from decimal import Decimal
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np
from rich.table import Table
from rich.text import Text

from eprgame import rules


def as_fraction(value: Any) -> Fraction:
    """
    Coerce a value to an exact Fraction.

    Floats are read through their shortest decimal representation.

    >>> as_fraction("1/5")
    Fraction(1, 5)

    >>> as_fraction(0.1)
    Fraction(1, 10)

    >>> as_fraction(7)
    Fraction(7, 1)
    """
    if isinstance(value, bool):
        raise TypeError(f"Expected a rational value, got bool {value}.")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, (str, Decimal)):
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Expected an exact rational, got {value!r}.") from exc
    raise TypeError(f"Expected a rational value, got {type(value)}.")


def as_fractions(values: Iterable[Any]) -> Tuple[Fraction, ...]:
    """
    Coerce values to a tuple of Fractions.
    """
    return tuple(as_fraction(value) for value in values)


def decimal_string(value: Fraction, digits: int = rules.DECIMAL_DIGITS) -> str:
    """
    Render value with a fixed number of significant digits.

    >>> decimal_string(Fraction(10663, 100000))
    '0.106630'

    >>> decimal_string(Fraction(43, 2500))
    '0.0172000'

    >>> decimal_string(Fraction(2, 3))
    '0.666667'
    """
    # Alternate form keeps trailing zeros.
    return f"{float(value):#.{digits}g}"


def truncated_string(value: Fraction, places: int = 3) -> str:
    """
    Render value truncated toward zero to a number of decimal places.

    >>> truncated_string(Fraction(10663, 100000))
    '0.106'

    >>> truncated_string(Fraction(-43, 2500))
    '-0.017'
    """
    scale = 10**places
    magnitude = abs(value) * scale
    truncated = magnitude.numerator // magnitude.denominator
    sign = "-" if value < 0 and truncated != 0 else ""
    whole, part = divmod(truncated, scale)
    return f"{sign}{whole}.{part:0{places}d}"


def format_rational(value: Fraction, decimal: bool = False) -> str:
    """
    Render a rational exactly or as a decimal.

    >>> format_rational(Fraction(43, 2500))
    '43/2500'

    >>> format_rational(Fraction(43, 2500), decimal=True)
    '0.0172'
    """
    if decimal:
        return decimal_string(value)
    return str(value)


def format_rationals(values: Sequence[Fraction], decimal: bool = False) -> str:
    """
    Render a sequence of rationals separated by commas.
    """
    return ", ".join(format_rational(value, decimal=decimal) for value in values)


def parse_triple(raw: str) -> Tuple[Fraction, Fraction, Fraction]:
    """
    Parse a comma separated rational triple.

    >>> parse_triple("1/2, 1, 0")
    (Fraction(1, 2), Fraction(1, 1), Fraction(0, 1))
    """
    parts = raw.split(",")
    if len(parts) != 3:
        raise ValueError(f"Expected three comma separated values, got {raw!r}.")
    first, second, third = as_fractions(parts)
    return first, second, third


def enrich_color_verdict(passed: bool) -> Text:
    """
    Wrap verdict value with approppriate color.
    """
    verdict = rules.Verdicts.of(passed).value
    try:
        color = rules.Verdicts.color_dict()[verdict]
    except KeyError:
        logging.error(
            "verdict was not found in rules.Verdicts.color_dict()",
            extra=dict(verdict=verdict),
            exc_info=True,
        )
        color = "blue"
    return Text(text=verdict, style=color)


def create_check_table(
    title: str, rows: Sequence[Tuple[str, bool, str]]
) -> Table:
    """
    Generate a rich Table of named checks with verdicts and details.
    """
    table = Table(title=title)
    table.add_column("Check", header_style="bold")
    table.add_column("Verdict")
    table.add_column("Detail", header_style="bold", style="bold blue")
    for name, passed, detail in rows:
        table.add_row(name, enrich_color_verdict(passed), detail)
    return table


def create_value_table(
    title: str, header: Sequence[str], rows: Sequence[Sequence[str]]
) -> Table:
    """
    Generate a rich Table of plain string values.
    """
    table = Table(title=title)
    for column in header:
        table.add_column(column, header_style="bold")
    for row in rows:
        table.add_row(*row)
    return table


def worker_generator(seed: int, worker: int) -> np.random.Generator:
    """
    Get an independent PCG64 stream derived from (seed, worker).
    """
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(worker,)))
    )


def partition_counts(total: int, workers: int) -> List[int]:
    """
    Split total into nearly equal parts, one per worker.

    >>> partition_counts(10, 3)
    [4, 3, 3]
    """
    base, extra = divmod(total, workers)
    return [base + (1 if worker < extra else 0) for worker in range(workers)]
