"""
Exact rational linear programming.

Two-phase tableau simplex over Fractions with Bland's rule:

    maximize c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from eprgame import rules, utils

ZERO, ONE = Fraction(0), Fraction(1)

Matrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class LinearProgram:
    """
    Maximization program in inequality and equality form.
    """

    objective: Tuple[Fraction, ...]
    a_ub: Matrix = field(default=())
    b_ub: Tuple[Fraction, ...] = field(default=())
    a_eq: Matrix = field(default=())
    b_eq: Tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        size = len(self.objective)
        object.__setattr__(self, "objective", utils.as_fractions(self.objective))
        for matrix_name, vector_name in (("a_ub", "b_ub"), ("a_eq", "b_eq")):
            matrix = tuple(
                utils.as_fractions(row) for row in getattr(self, matrix_name)
            )
            vector = utils.as_fractions(getattr(self, vector_name))
            if len(matrix) != len(vector):
                raise ValueError(
                    f"Expected {matrix_name} and {vector_name} to have equal length."
                )
            if any(len(row) != size for row in matrix):
                raise ValueError(
                    f"Expected every {matrix_name} row to have {size} columns."
                )
            object.__setattr__(self, matrix_name, matrix)
            object.__setattr__(self, vector_name, vector)

    @property
    def size(self) -> int:
        """
        Number of decision variables.
        """
        return len(self.objective)


@dataclass(frozen=True)
class LPSolution:
    """
    Outcome of solving a LinearProgram.
    """

    status: rules.LPStatus
    x: Tuple[Fraction, ...] = field(default=())
    value: Optional[Fraction] = None
    pivots: int = 0


class _Tableau:
    """
    Dense tableau with an explicit basis.
    """

    def __init__(
        self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]
    ):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, row: int, column: int):
        """
        Make column basic in row.
        """
        pivot_row = self.rows[row]
        element = pivot_row[column]
        self.rows[row] = [value / element for value in pivot_row]
        self.rhs[row] /= element
        pivot_row = self.rows[row]
        for other, current in enumerate(self.rows):
            if other == row:
                continue
            factor = current[column]
            if factor == 0:
                continue
            self.rows[other] = [
                value - factor * pivot_value
                for value, pivot_value in zip(current, pivot_row)
            ]
            self.rhs[other] -= factor * self.rhs[row]
        logging.debug(f"Pivot {self.basis[row]} -> {column} in row {row}.")
        self.basis[row] = column
        self.pivots += 1

    def reduced_costs(self, costs: Sequence[Fraction]) -> List[Fraction]:
        """
        Get c_j - c_B B^-1 A_j for every column.
        """
        reduced = list(costs)
        for row, basic in zip(self.rows, self.basis):
            weight = costs[basic]
            if weight == 0:
                continue
            for column, value in enumerate(row):
                if value:
                    reduced[column] -= weight * value
        return reduced

    def optimize(self, costs: Sequence[Fraction], allowed: int) -> rules.LPStatus:
        """
        Maximize costs over the first allowed columns with Bland's rule.
        """
        while True:
            reduced = self.reduced_costs(costs)
            entering = next(
                (column for column in range(allowed) if reduced[column] > 0), None
            )
            if entering is None:
                return rules.LPStatus.OPTIMAL
            candidates = [
                (self.rhs[row] / self.rows[row][entering], self.basis[row], row)
                for row in range(len(self.rows))
                if self.rows[row][entering] > 0
            ]
            if not candidates:
                return rules.LPStatus.UNBOUNDED
            _, _, leaving = min(candidates)
            self.pivot(leaving, entering)

    def value(self, costs: Sequence[Fraction]) -> Fraction:
        """
        Objective value of the current basic solution.
        """
        return sum(
            (costs[basic] * rhs for basic, rhs in zip(self.basis, self.rhs)), ZERO
        )

    def drop_row(self, row: int):
        """
        Remove a redundant row.
        """
        del self.rows[row]
        del self.rhs[row]
        del self.basis[row]


def solve(program: LinearProgram) -> LPSolution:
    """
    Solve a linear program exactly.

    >>> program = LinearProgram(
    ...     objective=(1, 1), a_ub=((1, 2), (3, 1)), b_ub=(4, 6)
    ... )
    >>> solution = solve(program)
    >>> solution.status.value, solution.x, solution.value
    ('optimal', (Fraction(8, 5), Fraction(6, 5)), Fraction(14, 5))
    """
    size = program.size
    ub_count = len(program.b_ub)
    slack_count = ub_count
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    needs_artificial: List[bool] = []
    for number, (coefficients, bound) in enumerate(zip(program.a_ub, program.b_ub)):
        slack = [ZERO] * slack_count
        slack[number] = ONE
        row = list(coefficients) + slack
        if bound < 0:
            row = [-value for value in row]
            bound = -bound
        rows.append(row)
        rhs.append(bound)
        needs_artificial.append(row[size + number] != ONE)
    for coefficients, bound in zip(program.a_eq, program.b_eq):
        row = list(coefficients) + [ZERO] * slack_count
        if bound < 0:
            row = [-value for value in row]
            bound = -bound
        rows.append(row)
        rhs.append(bound)
        needs_artificial.append(True)

    structural = size + slack_count
    artificial_rows = [number for number, needs in enumerate(needs_artificial) if needs]
    basis: List[int] = []
    for number, row in enumerate(rows):
        artificial = [ZERO] * len(artificial_rows)
        if needs_artificial[number]:
            artificial[artificial_rows.index(number)] = ONE
            basis.append(structural + artificial_rows.index(number))
        else:
            basis.append(size + number)
        row.extend(artificial)
    tableau = _Tableau(rows=rows, rhs=rhs, basis=basis)
    width = structural + len(artificial_rows)

    if artificial_rows:
        logging.info(
            f"Phase one with {len(artificial_rows)} artificial variables "
            f"over {len(rows)} rows."
        )
        phase_one_costs = [ZERO] * structural + [-ONE] * len(artificial_rows)
        tableau.optimize(phase_one_costs, allowed=width)
        if tableau.value(phase_one_costs) != 0:
            logging.info("Program is infeasible.")
            return LPSolution(status=rules.LPStatus.INFEASIBLE, pivots=tableau.pivots)
        _drive_out_artificials(tableau, structural)

    costs = list(program.objective) + [ZERO] * (width - size)
    logging.info(f"Phase two over {len(tableau.rows)} rows.")
    status = tableau.optimize(costs, allowed=structural)
    if status is rules.LPStatus.UNBOUNDED:
        return LPSolution(status=status, pivots=tableau.pivots)
    x = [ZERO] * size
    for basic, value in zip(tableau.basis, tableau.rhs):
        if basic < size:
            x[basic] = value
    return LPSolution(
        status=status,
        x=tuple(x),
        value=tableau.value(costs),
        pivots=tableau.pivots,
    )


def _drive_out_artificials(tableau: _Tableau, structural: int):
    """
    Pivot zero-valued artificial variables out of the basis.

    Rows without any nonzero structural entry are linearly dependent on the
    others and get dropped.
    """
    row = 0
    while row < len(tableau.rows):
        if tableau.basis[row] < structural:
            row += 1
            continue
        column = next(
            (
                column
                for column in range(structural)
                if tableau.rows[row][column] != 0
            ),
            None,
        )
        if column is None:
            logging.debug(f"Dropping redundant row {row}.")
            tableau.drop_row(row)
            continue
        tableau.pivot(row, column)
        row += 1
