"""
Reading and writing of game, distribution and completion files.

All three text formats hold one "key value" pair per line. Blank lines and
lines starting with ``#`` are ignored.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
import pandera as pa
from json5 import loads

from eprgame import file_schema, rules, utils
from eprgame.epr_game import CompletionInput
from eprgame.errors import InputFormatError
from eprgame.game_model import GameParams
from eprgame.joint_dist import JointDistribution

COMMENT_PREFIX = "#"
DISTRIBUTION_KEY = "distribution"


def _field_positions(line: str) -> List[int]:
    """
    Get 1-based columns where whitespace separated fields start.

    >>> _field_positions("  p1   1/10")
    [3, 8]
    """
    positions = []
    previous_blank = True
    for column, character in enumerate(line, start=1):
        blank = character.isspace()
        if previous_blank and not blank:
            positions.append(column)
        previous_blank = blank
    return positions


def parse_key_values(text: str, path: Optional[Path] = None) -> pd.DataFrame:
    """
    Parse key-value text into a DataFrame indexed by line number.
    """
    records: List[Dict[str, Any]] = []
    line_numbers: List[int] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(COMMENT_PREFIX):
            continue
        fields = line.split()
        positions = _field_positions(line)
        if len(fields) != 2:
            if len(fields) > 2:
                column = positions[2]
            else:
                column = positions[-1] + len(fields[-1])
            raise InputFormatError(
                f"Expected a key and a value, got {len(fields)} fields.",
                line=number,
                column=column,
                path=path,
            )
        records.append(
            {
                file_schema.KEY_COLUMN: fields[0],
                file_schema.VALUE_COLUMN: fields[1],
                file_schema.KEY_POSITION_COLUMN: positions[0],
                file_schema.VALUE_POSITION_COLUMN: positions[1],
            }
        )
        line_numbers.append(number)
    columns = [
        file_schema.KEY_COLUMN,
        file_schema.VALUE_COLUMN,
        file_schema.KEY_POSITION_COLUMN,
        file_schema.VALUE_POSITION_COLUMN,
    ]
    frame = pd.DataFrame.from_records(
        records, index=pd.Index(line_numbers, dtype=int), columns=columns
    )
    # Empty inputs would leave the position columns as object dtype
    return frame.astype(
        {
            file_schema.KEY_POSITION_COLUMN: int,
            file_schema.VALUE_POSITION_COLUMN: int,
        }
    )


def _line_count(text: str) -> int:
    return len(text.splitlines())


def validate_key_values(
    frame: pd.DataFrame, schema: pa.DataFrameSchema, path: Optional[Path] = None
) -> pd.DataFrame:
    """
    Validate parsed key values and raise on the first failing line.
    """
    try:
        return schema.validate(frame, lazy=True)
    except pa.errors.SchemaErrors as exc:
        failure_cases = exc.failure_cases
        assert isinstance(failure_cases, pd.DataFrame)
        located = failure_cases.dropna(subset=["index"])
        if located.empty:
            logging.error(
                "Schema failure without a line.",
                extra=dict(failure_cases=failure_cases.to_dict()),
            )
            raise InputFormatError(
                "Input does not match the expected layout.", line=1, column=1, path=path
            ) from exc
        located = located.assign(index=located["index"].astype(int)).sort_values(
            "index", kind="stable"
        )
        first = located.iloc[0]
        line = int(first["index"])
        column_name = str(first["column"])
        position_column = file_schema.FIELD_POSITION_COLUMNS.get(
            column_name, file_schema.KEY_POSITION_COLUMN
        )
        raise InputFormatError(
            f"Invalid {column_name} {first['failure_case']!r} ({first['check']}).",
            line=line,
            column=int(frame.loc[line, position_column]),
            path=path,
        ) from exc


def _named_values(
    text: str,
    names: Sequence[str],
    schema: pa.DataFrameSchema,
    path: Optional[Path],
) -> Dict[str, Fraction]:
    frame = validate_key_values(parse_key_values(text, path=path), schema, path=path)
    values = dict(zip(frame[file_schema.KEY_COLUMN], frame[file_schema.VALUE_COLUMN]))
    for name in names:
        if name not in values:
            raise InputFormatError(
                f"Missing key {name}.",
                line=_line_count(text) + 1,
                column=1,
                path=path,
            )
    return {name: utils.as_fraction(values[name]) for name in names}


def parse_game(text: str, path: Optional[Path] = None) -> GameParams:
    """
    Parse game file text.

    >>> parse_game("alpha 7\\nbeta 9\\ndelta 4\\nepsilon 1\\ntheta 5\\nomega 3").omega
    Fraction(3, 1)
    """
    values = _named_values(text, rules.GAME_FIELDS, file_schema.game_schema(), path)
    return GameParams(**values)


def parse_completion(text: str, path: Optional[Path] = None) -> CompletionInput:
    """
    Parse completion input text.
    """
    values = _named_values(
        text, rules.INDEPENDENT_NAMES, file_schema.completion_schema(), path
    )
    return CompletionInput.from_mapping(values)


def parse_distribution(text: str, path: Optional[Path] = None) -> JointDistribution:
    """
    Parse distribution text or a JSON distribution document.

    >>> parse_distribution("# point mass\\n64 1")[64]
    Fraction(1, 1)
    """
    if text.lstrip().startswith("{"):
        return parse_distribution_document(text, path=path)
    frame = validate_key_values(
        parse_key_values(text, path=path), file_schema.distribution_schema(), path=path
    )
    return JointDistribution.from_mapping(
        {
            int(key): value
            for key, value in zip(
                frame[file_schema.KEY_COLUMN], frame[file_schema.VALUE_COLUMN]
            )
        }
    )


def parse_distribution_document(
    text: str, path: Optional[Path] = None
) -> JointDistribution:
    """
    Parse a JSON document with a "distribution" mapping of index to value.
    """
    try:
        loaded = loads(text)
    except ValueError as exc:
        raise InputFormatError(
            f"Invalid JSON: {exc}", line=1, column=1, path=path
        ) from exc
    entries = loaded.get(DISTRIBUTION_KEY) if isinstance(loaded, dict) else None
    if not isinstance(entries, dict):
        raise InputFormatError(
            f"Expected a JSON object with a {DISTRIBUTION_KEY!r} mapping.",
            line=1,
            column=1,
            path=path,
        )
    lines = [f"{key} {value}" for key, value in entries.items()]
    frame = parse_key_values("\n".join(lines), path=path)
    try:
        frame = file_schema.distribution_schema().validate(frame, lazy=True)
    except pa.errors.SchemaErrors as exc:
        raise InputFormatError(
            "Invalid distribution entries in JSON document.",
            line=1,
            column=1,
            path=path,
        ) from exc
    return JointDistribution.from_mapping(
        {
            int(key): value
            for key, value in zip(
                frame[file_schema.KEY_COLUMN], frame[file_schema.VALUE_COLUMN]
            )
        }
    )


def read_game(path: Path) -> GameParams:
    """
    Read a game file.
    """
    return parse_game(path.read_text(), path=path)


def read_completion(path: Path) -> CompletionInput:
    """
    Read a completion input file.
    """
    return parse_completion(path.read_text(), path=path)


def read_distribution(path: Path) -> JointDistribution:
    """
    Read a distribution file.
    """
    return parse_distribution(path.read_text(), path=path)


def format_distribution(d: JointDistribution) -> str:
    """
    Render all 64 entries as "index value" lines.
    """
    return "".join(f"{index} {value}\n" for index, value in d.as_mapping().items())


def format_game(params: GameParams) -> str:
    """
    Render a game file.
    """
    return "".join(
        f"{name} {value}\n" for name, value in zip(rules.GAME_FIELDS, params.values())
    )


def format_completion(completion: CompletionInput) -> str:
    """
    Render a completion input file.
    """
    return "".join(
        f"{name} {value}\n"
        for name, value in zip(rules.INDEPENDENT_NAMES, completion.values())
    )


def write_distribution(d: JointDistribution, path: Path):
    """
    Write a distribution file.
    """
    path.write_text(format_distribution(d))
    logging.info(f"Wrote distribution to {path}.")


def distribution_document(d: JointDistribution) -> Dict[str, Dict[str, str]]:
    """
    Machine-readable mapping of every entry as exact rational strings.
    """
    return {
        DISTRIBUTION_KEY: {
            str(index): str(value) for index, value in d.as_mapping().items()
        }
    }
