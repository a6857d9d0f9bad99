"""
Pandera schemas of the key-value input files.
"""

from functools import lru_cache
from typing import Sequence, Tuple

import pandera as pa

from eprgame import rules, schema_checks

KEY_COLUMN = "key"
VALUE_COLUMN = "value"
KEY_POSITION_COLUMN = "key_position"
VALUE_POSITION_COLUMN = "value_position"

FIELD_POSITION_COLUMNS = {
    KEY_COLUMN: KEY_POSITION_COLUMN,
    VALUE_COLUMN: VALUE_POSITION_COLUMN,
}


def rational_value_check() -> pa.Check:
    """
    Element-wise exact rational literal check.
    """
    return pa.Check(
        schema_checks.rational_check,
        element_wise=True,
        name="Exact rational value check.",
    )


def position_columns() -> dict:
    """
    Columns holding the 1-based text position of each field.
    """
    return {
        KEY_POSITION_COLUMN: pa.Column(int, checks=[pa.Check.ge(1)]),
        VALUE_POSITION_COLUMN: pa.Column(int, checks=[pa.Check.ge(1)]),
    }


def named_keys_schema(names: Sequence[str]) -> pa.DataFrameSchema:
    """
    Get schema for a file with a fixed set of named keys.
    """
    return _named_keys_schema(tuple(names))


@lru_cache(maxsize=None)
def _named_keys_schema(names: Tuple[str, ...]) -> pa.DataFrameSchema:
    return pa.DataFrameSchema(
        index=pa.Index(int),
        columns={
            KEY_COLUMN: pa.Column(
                str,
                checks=[pa.Check.isin(list(names))],
                unique=True,
                report_duplicates="exclude_first",
            ),
            VALUE_COLUMN: pa.Column(str, checks=[rational_value_check()]),
            **position_columns(),
        },
    )


def game_schema() -> pa.DataFrameSchema:
    """
    Get schema for game files.
    """
    return named_keys_schema(rules.GAME_FIELDS)


def completion_schema() -> pa.DataFrameSchema:
    """
    Get schema for completion input files.
    """
    return named_keys_schema(rules.INDEPENDENT_NAMES)


@lru_cache(maxsize=None)
def distribution_schema() -> pa.DataFrameSchema:
    """
    Get schema for distribution files.
    """
    return pa.DataFrameSchema(
        index=pa.Index(int),
        columns={
            KEY_COLUMN: pa.Column(
                str,
                checks=[
                    pa.Check(
                        lambda raw_value: schema_checks.index_check(
                            raw_value, size=rules.DISTRIBUTION_SIZE
                        ),
                        element_wise=True,
                        name="Distribution index check.",
                    )
                ],
                unique=True,
                report_duplicates="exclude_first",
            ),
            VALUE_COLUMN: pa.Column(str, checks=[rational_value_check()]),
            **position_columns(),
        },
    )
