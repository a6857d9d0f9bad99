"""
Parameters for tests.
"""

from fractions import Fraction
from pathlib import Path
from traceback import print_tb
from typing import List

from click.testing import Result
from hypothesis.strategies import composite, integers

from eprgame import rules, utils
from eprgame.classical_play import MixedProfile
from eprgame.epr_game import CompletionInput
from eprgame.game_model import GameParams
from eprgame.joint_dist import CoinMarginals, JointDistribution
from eprgame.ne_search import draw_independents

SAMPLE_DATA_PATH = Path("tests/sample_data/")
PD_GAME_PATH = SAMPLE_DATA_PATH / "pd_game.txt"
REFERENCE_GAME_PATH = SAMPLE_DATA_PATH / "reference_game.txt"
REFERENCE_COMPLETION_PATH = SAMPLE_DATA_PATH / "reference_completion.txt"
INFEASIBLE_COMPLETION_PATH = SAMPLE_DATA_PATH / "infeasible_completion.txt"

PD_PARAMS = GameParams.from_values((7, 9, 4, 1, 5, 3))

# Derived entries of the reference completion in index order
REFERENCE_DEPENDENTS = {
    2: Fraction(7, 50),
    4: Fraction(1, 100),
    7: Fraction(3, 20),
    8: Fraction(21, 100),
    14: Fraction(9, 25),
    16: Fraction(1, 10),
    24: Fraction(1, 4),
    28: Fraction(9, 50),
    31: Fraction(17, 50),
    32: Fraction(7, 25),
    36: Fraction(19, 50),
    40: Fraction(31, 50),
    47: Fraction(27, 50),
    48: Fraction(23, 50),
    54: Fraction(1, 2),
    56: Fraction(1, 2),
    64: Fraction(1),
}
REFERENCE_CCC_MARGINS = (
    Fraction(10663, 100000),
    Fraction(9643, 100000),
    Fraction(43, 2500),
)
REFERENCE_DDD_MARGINS = (Fraction(19, 500), Fraction(27, 500), Fraction(1, 20))


def lines_in_file(path_str: str) -> List[str]:
    """
    Get lines in file.
    """
    path = Path(path_str)
    assert path.exists()
    return path.read_text().splitlines(keepends=False)


rational_good_examples = lines_in_file("tests/sample_data/rational_good_examples.txt")
rational_bad_examples = lines_in_file("tests/sample_data/rational_bad_examples.txt")


def click_error_print(result: Result):
    """
    Print click result traceback.
    """
    if result.exit_code == 0:
        return
    assert result.exc_info is not None
    _, _, tb = result.exc_info
    print_tb(tb)
    print(result.output)
    raise Exception(result.exception)


@composite
def fractions(draw, denominator: int = 100, low: int = 0, high: int = 100):
    """
    Draw a Fraction on the grid of spacing 1/denominator.
    """
    return Fraction(draw(integers(min_value=low, max_value=high)), denominator)


@composite
def pd_params_strategy(draw):
    """
    Draw parameters satisfying every generalized Prisoner's Dilemma condition.

    The construction orders beta > alpha > theta > delta > omega > epsilon
    and keeps delta above (epsilon + theta)/2 and alpha above
    (delta + beta)/2.
    """
    epsilon = draw(fractions(low=-500, high=500))
    omega = epsilon + draw(fractions(low=1, high=500))
    delta = omega + draw(fractions(low=1, high=500))
    theta = delta + (delta - epsilon) * draw(fractions(low=1, high=99))
    alpha = theta + draw(fractions(low=1, high=500))
    beta = alpha + (alpha - delta) * draw(fractions(low=1, high=99))
    return GameParams(
        alpha=alpha, beta=beta, delta=delta, epsilon=epsilon, theta=theta, omega=omega
    )


@composite
def params_strategy(draw):
    """
    Draw arbitrary rational parameters with nonzero beta.
    """
    values = [draw(fractions(low=-1000, high=1000)) for _ in rules.GAME_FIELDS]
    if values[1] == 0:
        values[1] = Fraction(1)
    return GameParams.from_values(values)


@composite
def marginals_strategy(draw, embedded: bool = False):
    """
    Draw in-range coin marginals.

    Embedded marginals keep every second coin at zero and every first coin
    positive.
    """
    if embedded:
        first = [draw(fractions(low=1)) for _ in range(3)]
        return CoinMarginals.of(*first, 0, 0, 0)
    return CoinMarginals.of(*[draw(fractions()) for _ in range(6)])


@composite
def profile_strategy(draw, denominator: int = 16):
    """
    Draw a mixed profile on a grid.
    """
    x, y, z = (
        draw(fractions(denominator=denominator, high=denominator)) for _ in range(3)
    )
    return MixedProfile.of(x, y, z)


@composite
def completion_strategy(draw, denominator: int = 100):
    """
    Draw feasible independents with the default polytope draw.
    """
    seed = draw(integers(min_value=0, max_value=2**32))
    return draw_independents(utils.worker_generator(seed, 0), denominator=denominator)


def pinned_draw(values: List[Fraction]):
    """
    Make a draw function that always returns the same independents.
    """

    def draw(_, __) -> CompletionInput:
        return CompletionInput.from_values(values)

    return draw


def game_text(params: GameParams) -> str:
    """
    Game file text of params.
    """
    return "".join(
        f"{name} {value}\n" for name, value in zip(rules.GAME_FIELDS, params.values())
    )


def perturbed_uniform() -> JointDistribution:
    """
    Uniform distribution with block 1 shifted from p2 onto p1.
    """
    mapping = JointDistribution.uniform().as_mapping()
    mapping[1] = Fraction(1, 4)
    mapping[2] = Fraction(0)
    return JointDistribution.from_mapping(mapping)


def test_rational_check_params():
    """
    Params for test_rational_check.
    """
    return [(value, False) for value in rational_good_examples] + [
        (value, True) for value in rational_bad_examples
    ]


def test_index_check_params():
    """
    Params for test_index_check.
    """
    return [
        ("1", 64, False),
        ("64", 64, False),
        ("65", 64, True),
        ("0", 64, True),
        ("-1", 64, True),
        ("p1", 64, True),
        ("1.0", 64, True),
        (1, 64, True),
    ]


def test_as_fraction_params():
    """
    Params for test_as_fraction.
    """
    return [
        ("1/5", Fraction(1, 5)),
        (" 13/100 ", Fraction(13, 100)),
        ("0.38", Fraction(19, 50)),
        (0.1, Fraction(1, 10)),
        (-3, Fraction(-3)),
        (Fraction(2, 4), Fraction(1, 2)),
    ]


def test_truncated_string_params():
    """
    Params for test_truncated_string.
    """
    return [
        (Fraction(10663, 100000), 3, "0.106"),
        (Fraction(9643, 100000), 3, "0.096"),
        (Fraction(43, 2500), 3, "0.017"),
        (Fraction(-43, 2500), 3, "-0.017"),
        (Fraction(-1, 10000), 3, "0.000"),
        (Fraction(5, 2), 1, "2.5"),
    ]


def test_parse_game_errors_params():
    """
    Params for test_parse_game_errors.

    Each case holds the text and the expected line and column.
    """
    return [
        (
            "alpha 7\nbeta 9\ndelta x\nepsilon 1\ntheta 5\nomega 3\n",
            3,
            7,
        ),
        (
            "alpha 7\nbeta 9\ndelta 4\nepsilon 1\ntheta 5\n",
            6,
            1,
        ),
        (
            "alpha 7\nbeta 9\nbeta 8\ndelta 4\nepsilon 1\ntheta 5\nomega 3\n",
            3,
            1,
        ),
        (
            "alpha 7\n# comment\ngamma 9\ndelta 4\nepsilon 1\ntheta 5\nomega 3\n",
            3,
            1,
        ),
        (
            "alpha 7 8\nbeta 9\ndelta 4\nepsilon 1\ntheta 5\nomega 3\n",
            1,
            9,
        ),
        (
            "alpha\n",
            1,
            6,
        ),
        (
            "alpha 7\nbeta 9\ndelta 4\nepsilon 1\ntheta 5\n  omega  1/0\n",
            6,
            10,
        ),
    ]


def test_parse_distribution_errors_params():
    """
    Params for test_parse_distribution_errors.
    """
    return [
        ("1 1/2\n65 1/2\n", 2, 1),
        ("1 1/2\n0 1/2\n", 2, 1),
        ("1 1/2\n1 1/2\n", 2, 1),
        ("1 1/2\np2 1/2\n", 2, 1),
        ("\n\n1 half\n", 3, 3),
    ]


def test_search_config_invalid_params():
    """
    Params for test_search_config_invalid.
    """
    return [
        dict(iterations=0),
        dict(seed=-1),
        dict(seed=2**64),
        dict(tolerance="-1/10"),
        dict(workers=0),
        dict(max_attempts=0),
        dict(denominator=0),
    ]

