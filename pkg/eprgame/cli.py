"""
Command line api for eprgame.
"""

import json
import logging
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence

import typer
from rich.console import Console
from rich.text import Text

from eprgame import formats, rules, utils
from eprgame.classical_play import (
    MixedProfile,
    enumerate_pure_ne,
    is_nash_classical,
    pure_deviation_margins,
)
from eprgame.epr_game import (
    REFERENCE_INDEPENDENTS,
    ccc_margins,
    complete_distribution,
    ddd_margins,
    epr_mixed_payoff,
    reference_params,
)
from eprgame.errors import (
    InfeasibleProgramError,
    InputFormatError,
    InvalidInputError,
    ProbabilityRangeError,
    SamplingError,
)
from eprgame.game_model import GameParams, pd_conditions, validate_pd
from eprgame.joint_dist import (
    JointDistribution,
    check_embedding_zeros,
    check_full_no_signaling,
    check_no_signaling,
    check_normalization,
    extract_marginals,
)
from eprgame.ne_search import SearchConfig, maximize_min_ccc_margin
from eprgame.simulate import SimulationConfig, simulate_runs

app = typer.Typer()
console = Console()
error_console = Console(stderr=True)

PLAYERS = ("Alice", "Bob", "Chris")
MARGINAL_NAMES = ("r", "r′", "r″", "s", "s′", "s″")

GAME_ARGUMENT = typer.Argument(..., exists=True, dir_okay=False)
DISTRIBUTION_ARGUMENT = typer.Argument(..., exists=True, dir_okay=False)
JSON_OPTION = typer.Option(False, "--json", help="Print a machine-readable report.")
DECIMAL_OPTION = typer.Option(
    False, help=f"Print numbers with {rules.DECIMAL_DIGITS} significant digits."
)
SEED_OPTION = typer.Option(0, min=0, max=2**64 - 1)
WORKERS_OPTION = typer.Option(1, min=1)


def logging_level(level: str):
    """
    Make logging level string.
    """
    return f"Set logging level to {level}."


@app.callback()
def app_callback(
    verbose: bool = typer.Option(False, help=logging_level("INFO")),
    debug: bool = typer.Option(False, help=logging_level("DEBUG")),
):
    """
    Use eprgame to analyze three-player games over joint probabilities.
    """
    logging_level_int = logging.WARNING
    if verbose:
        logging_level_int = logging.INFO
    if debug:
        logging_level_int = logging.DEBUG
    logging.basicConfig(level=logging_level_int, force=True)
    logging.info("Logging verbosity set.", extra=dict(level=logging_level_int))


@contextmanager
def exit_on_errors() -> Iterator[None]:
    """
    Map eprgame exceptions to exit codes with a diagnostic on stderr.
    """
    try:
        yield
    except (InvalidInputError, InfeasibleProgramError, SamplingError) as exc:
        error_console.print(Text(str(exc), style="red"))
        raise typer.Exit(code=rules.ExitCode.CHECK_FAILURE.value)
    except (InputFormatError, ProbabilityRangeError, ValueError) as exc:
        # pydantic ValidationError is a ValueError
        error_console.print(Text(str(exc), style="red"))
        raise typer.Exit(code=rules.ExitCode.MALFORMED_INPUT.value)


def exit_with(passed: bool):
    """
    Exit with the check failure code unless passed.
    """
    if not passed:
        raise typer.Exit(code=rules.ExitCode.CHECK_FAILURE.value)


def print_document(document: Dict[str, Any]):
    """
    Print a machine-readable report.
    """
    typer.echo(json.dumps(document, indent=2))


def rationals_document(values: Sequence[Fraction]) -> List[str]:
    """
    Exact rational strings of values.
    """
    return [str(value) for value in values]


def parse_profile(raw: str) -> MixedProfile:
    """
    Parse a "x,y,z" profile option.
    """
    x, y, z = utils.parse_triple(raw)
    return MixedProfile.of(x, y, z)


def profile_label(profile: Sequence[rules.Strategy]) -> str:
    """
    Render a pure profile like (C, D, D).
    """
    return "(" + ", ".join(strategy.pd_name for strategy in profile) + ")"


def player_rows(
    values: Sequence[Fraction], decimal: bool, truncated: bool = False
) -> List[List[str]]:
    """
    One table row per player.
    """
    rows = []
    for player, value in zip(PLAYERS, values):
        row = [player, utils.format_rational(value, decimal=decimal)]
        if truncated:
            row.append(utils.truncated_string(value))
        rows.append(row)
    return rows


@app.command()
def validate_game(
    game: Path = GAME_ARGUMENT,
    as_json: bool = JSON_OPTION,
):
    """
    Check the generalized Prisoner's Dilemma conditions of a game file.
    """
    with exit_on_errors():
        params = formats.read_game(game)
    violations = validate_pd(params)
    violated = {violation.description for violation in violations}
    if as_json:
        print_document(
            dict(
                game=dict(zip(rules.GAME_FIELDS, rationals_document(params.values()))),
                valid=not violations,
                violations=sorted(violated),
            )
        )
    else:
        console.print(
            utils.create_check_table(
                title=f"Prisoner's Dilemma conditions of {game.name}",
                rows=[
                    (
                        f"{condition.group}: {condition.description}",
                        condition.description not in violated,
                        "",
                    )
                    for condition in pd_conditions()
                ],
            )
        )
        verdict = "valid generalized PD" if not violations else "not a generalized PD"
        console.print(Text(verdict, style="green" if not violations else "red"))
    exit_with(not violations)


@app.command()
def classical_ne(
    game: Path = GAME_ARGUMENT,
    profile: Optional[str] = typer.Option(
        None, help="Also check a mixed profile given as x,y,z."
    ),
    as_json: bool = JSON_OPTION,
    decimal: bool = DECIMAL_OPTION,
):
    """
    Enumerate pure Nash equilibria of the three-coin game.
    """
    with exit_on_errors():
        params = formats.read_game(game)
        mixed = parse_profile(profile) if profile is not None else None
    equilibria = enumerate_pure_ne(params)
    report = is_nash_classical(params, mixed) if mixed is not None else None
    if as_json:
        document: Dict[str, Any] = dict(
            pure_equilibria=[
                [strategy.pd_name for strategy in pure] for pure in equilibria
            ],
            margins={
                profile_label(pure): rationals_document(
                    pure_deviation_margins(params, pure)
                )
                for pure in rules.BLOCK_ORDER
            },
        )
        if report is not None:
            document["profile"] = dict(
                margins=rationals_document(report.margins), is_nash=report.is_nash
            )
        print_document(document)
    else:
        console.print(
            utils.create_check_table(
                title="Pure profiles",
                rows=[
                    (
                        profile_label(pure),
                        pure in equilibria,
                        utils.format_rationals(
                            pure_deviation_margins(params, pure), decimal=decimal
                        ),
                    )
                    for pure in rules.BLOCK_ORDER
                ],
            )
        )
        if report is not None:
            console.print(
                utils.create_check_table(
                    title=f"Mixed profile {profile}",
                    rows=[
                        (
                            player,
                            margin >= 0,
                            utils.format_rational(margin, decimal=decimal),
                        )
                        for player, margin in zip(PLAYERS, report.margins)
                    ],
                )
            )
    exit_with(report is None or report.is_nash)


def analysis_document(
    params: GameParams, d: JointDistribution, full_no_signaling: bool
) -> Dict[str, Any]:
    """
    Verdicts and margins of a distribution.
    """
    normalization = check_normalization(d)
    no_signaling = check_no_signaling(d)
    embedding = check_embedding_zeros(d)
    document: Dict[str, Any] = dict(
        normalization=dict(
            passed=normalization.passed,
            failed_blocks=list(normalization.failed_blocks),
            negative_indices=list(normalization.negative_indices),
        ),
        no_signaling=dict(
            passed=no_signaling.passed,
            violated_chains=[
                violation.chain.name for violation in no_signaling.violations
            ],
        ),
        embedding_zeros=dict(
            passed=embedding.passed,
            nonzero_indices=list(embedding.nonzero_indices),
        ),
    )
    if full_no_signaling:
        full = check_full_no_signaling(d)
        document["full_no_signaling"] = dict(
            passed=full.passed,
            violated_chains=[violation.chain.name for violation in full.violations],
        )
    if normalization.passed:
        extraction = extract_marginals(d)
        document["factorizability"] = dict(
            factorizable=extraction.factorizable,
            marginals=rationals_document(extraction.marginals.values()),
            mismatched_indices=list(extraction.mismatched_indices),
        )
    if normalization.passed and embedding.passed:
        document["ccc_margins"] = rationals_document(ccc_margins(params, d))
        document["ddd_margins"] = rationals_document(ddd_margins(params, d))
    return document


@app.command()
def analyze_dist(
    game: Path = GAME_ARGUMENT,
    distribution: Path = DISTRIBUTION_ARGUMENT,
    full_no_signaling: bool = typer.Option(
        False, help="Also check the two-party marginal equalities."
    ),
    as_json: bool = JSON_OPTION,
    decimal: bool = DECIMAL_OPTION,
):
    """
    Check the constraints of a distribution and report its equilibrium margins.
    """
    with exit_on_errors():
        params = formats.read_game(game)
        d = formats.read_distribution(distribution)
        document = analysis_document(params, d, full_no_signaling=full_no_signaling)
    checks = ["normalization", "no_signaling", "embedding_zeros"]
    if full_no_signaling:
        checks.append("full_no_signaling")
    passed = all(document[check]["passed"] for check in checks)
    if as_json:
        print_document(document)
        exit_with(passed)
        return
    rows = []
    for check in checks:
        detail = {
            key: value for key, value in document[check].items() if key != "passed"
        }
        rows.append(
            (
                check.replace("_", "-"),
                document[check]["passed"],
                ", ".join(f"{key}={value}" for key, value in detail.items() if value),
            )
        )
    if "factorizability" in document:
        factorizable = document["factorizability"]["factorizable"]
        rows.append(
            (
                "factorizability",
                True,
                "factorizable" if factorizable else "non-factorizable",
            )
        )
    console.print(
        utils.create_check_table(title=f"Analysis of {distribution.name}", rows=rows)
    )
    if "ccc_margins" in document:
        for title, key in (
            ("(C,C,C) margins / beta", "ccc_margins"),
            ("(D,D,D) margins", "ddd_margins"),
        ):
            values = [Fraction(value) for value in document[key]]
            console.print(
                utils.create_value_table(
                    title=title,
                    header=("Player", "Margin"),
                    rows=player_rows(values, decimal=decimal),
                )
            )
    exit_with(passed)


@app.command()
def complete(
    completion: Path = typer.Argument(..., exists=True, dir_okay=False),
    output: Optional[Path] = typer.Option(None, dir_okay=False),
    as_json: bool = JSON_OPTION,
):
    """
    Complete a distribution from its ten independent probabilities.
    """
    with exit_on_errors():
        independents = formats.read_completion(completion)
        d = complete_distribution(independents)
    if output is not None:
        formats.write_distribution(d, output)
    if as_json:
        print_document(formats.distribution_document(d))
    elif output is None:
        typer.echo(formats.format_distribution(d), nl=False)


@app.command()
def factor_check(
    distribution: Path = DISTRIBUTION_ARGUMENT,
    as_json: bool = JSON_OPTION,
    decimal: bool = DECIMAL_OPTION,
):
    """
    Extract coin marginals and check whether their product reproduces a distribution.
    """
    with exit_on_errors():
        d = formats.read_distribution(distribution)
        extraction = extract_marginals(d)
    verdict = "factorizable" if extraction.factorizable else "non-factorizable"
    if as_json:
        print_document(
            dict(
                marginals=dict(
                    zip(
                        ("r", "rp", "rpp", "s", "sp", "spp"),
                        rationals_document(extraction.marginals.values()),
                    )
                ),
                factorizable=extraction.factorizable,
                mismatched_indices=list(extraction.mismatched_indices),
            )
        )
        return
    console.print(
        utils.create_value_table(
            title=f"Coin marginals of {distribution.name}",
            header=("Marginal", "Value"),
            rows=[
                [name, utils.format_rational(value, decimal=decimal)]
                for name, value in zip(MARGINAL_NAMES, extraction.marginals.values())
            ],
        )
    )
    if extraction.mismatched_indices:
        first = extraction.mismatched_indices[0]
        console.print(
            f"Product of marginals differs at {len(extraction.mismatched_indices)} "
            f"entries, first at p{first}."
        )
    console.print(Text(verdict, style="bold"))


@app.command()
def search(
    game: Path = GAME_ARGUMENT,
    method: rules.SearchMethod = typer.Option(rules.SearchMethod.LP),
    seed: int = SEED_OPTION,
    iterations: int = typer.Option(1000, min=1),
    workers: int = WORKERS_OPTION,
    formulation: rules.Formulation = typer.Option(rules.Formulation.REDUCED),
    warm_start: Optional[Path] = typer.Option(
        None, exists=True, dir_okay=False, help="Completion file of a starting point."
    ),
    output: Optional[Path] = typer.Option(None, dir_okay=False),
    as_json: bool = JSON_OPTION,
    decimal: bool = DECIMAL_OPTION,
):
    """
    Maximize the minimum (C,C,C) margin over the embedded no-signaling polytope.
    """
    with exit_on_errors():
        params = formats.read_game(game)
        start = formats.read_completion(warm_start) if warm_start is not None else None
        config = SearchConfig(
            params=params,
            method=method,
            seed=seed,
            iterations=iterations,
            workers=workers,
            formulation=formulation,
            warm_start=start,
        )
        result = maximize_min_ccc_margin(config)
    if output is not None:
        formats.write_distribution(result.distribution, output)
    if as_json:
        document = dict(
            method=result.method.value,
            seed=seed,
            iterations=iterations,
            samples=result.samples,
            objective_value=str(result.objective_value),
            margins=rationals_document(result.margins),
            certificate=result.certificate,
            notes=list(result.notes),
            **formats.distribution_document(result.distribution),
        )
        print_document(document)
        exit_with(result.certified)
        return
    console.print(
        utils.create_value_table(
            title=f"Best (C,C,C) margins / beta with {result.method.value}",
            header=("Player", "Margin"),
            rows=player_rows(result.margins, decimal=decimal),
        )
    )
    console.print(
        "Objective value: "
        f"{utils.format_rational(result.objective_value, decimal=decimal)}"
    )
    if result.independents is not None:
        typer.echo(formats.format_completion(result.independents), nl=False)
    console.print(
        utils.create_check_table(
            title="Certificate",
            rows=[(name, passed, "") for name, passed in result.certificate.items()],
        )
    )
    exit_with(result.certified)


@app.command()
def simulate(
    game: Path = GAME_ARGUMENT,
    distribution: Path = DISTRIBUTION_ARGUMENT,
    profile: str = typer.Option("1,1,1", help="First strategy probabilities x,y,z."),
    runs: int = typer.Option(100_000, min=1),
    seed: int = SEED_OPTION,
    workers: int = WORKERS_OPTION,
    as_json: bool = JSON_OPTION,
    decimal: bool = DECIMAL_OPTION,
):
    """
    Simulate a referee rewarding sampled outcomes.
    """
    with exit_on_errors():
        params = formats.read_game(game)
        d = formats.read_distribution(distribution)
        config = SimulationConfig(
            distribution=d,
            profile=parse_profile(profile),
            runs=runs,
            seed=seed,
            workers=workers,
        )
        result = simulate_runs(params, config)
        analytic = epr_mixed_payoff(params, d, config.profile)
    if as_json:
        print_document(
            dict(
                runs=result.runs,
                seed=result.seed,
                means=list(result.means),
                standard_errors=list(result.standard_errors),
                exact_means=rationals_document(result.exact_means),
                analytic_means=rationals_document(analytic),
                block_counts=list(result.block_counts),
            )
        )
        return
    console.print(
        utils.create_value_table(
            title=f"Simulated payoffs over {result.runs} runs (seed {result.seed})",
            header=("Player", "Mean", "Standard error", "Analytic"),
            rows=[
                [
                    player,
                    f"{mean:.6g}",
                    f"{error:.3g}",
                    utils.format_rational(expected, decimal=decimal),
                ]
                for player, mean, error, expected in zip(
                    PLAYERS, result.means, result.standard_errors, analytic
                )
            ],
        )
    )


def reference_document() -> Dict[str, Any]:
    """
    Complete and certify the reference distribution and report its margins.
    """
    params = reference_params()
    d = complete_distribution(REFERENCE_INDEPENDENTS)
    extraction = extract_marginals(d)
    margins = ccc_margins(params, d)
    return dict(
        game=dict(zip(rules.GAME_FIELDS, rationals_document(params.values()))),
        independents=dict(
            zip(
                rules.INDEPENDENT_NAMES,
                rationals_document(REFERENCE_INDEPENDENTS.values()),
            )
        ),
        dependents={
            f"p{index}": str(d[index]) for index in rules.DEPENDENT_INDICES
        },
        certificate={
            "normalization": check_normalization(d).passed,
            "no-signaling": check_no_signaling(d).passed,
            "embedding-zeros": check_embedding_zeros(d).passed,
        },
        marginals=rationals_document(extraction.marginals.values()),
        factorizable=extraction.factorizable,
        ccc_margins=rationals_document(margins),
        ccc_margins_truncated=[utils.truncated_string(margin) for margin in margins],
        ddd_margins=rationals_document(ddd_margins(params, d)),
        pd_violations=[violation.description for violation in validate_pd(params)],
    )


@app.command(name="reproduce-paper")
def reproduce_reference(
    as_json: bool = JSON_OPTION,
    decimal: bool = DECIMAL_OPTION,
):
    """
    Complete the reference example and print its (C,C,C) margins.
    """
    document = reference_document()
    certified = all(document["certificate"].values())
    if as_json:
        print_document(document)
        exit_with(certified)
        return
    console.print(
        utils.create_value_table(
            title="Completed entries",
            header=("Entry", "Value"),
            rows=[
                [name, utils.format_rational(Fraction(value), decimal=decimal)]
                for name, value in document["dependents"].items()
            ],
        )
    )
    console.print(
        utils.create_check_table(
            title="Constraints",
            rows=[
                (name, passed, "") for name, passed in document["certificate"].items()
            ],
        )
    )
    console.print(
        utils.create_value_table(
            title="Coin marginals",
            header=("Marginal", "Value"),
            rows=[
                [name, value]
                for name, value in zip(MARGINAL_NAMES, document["marginals"])
            ],
        )
    )
    console.print(
        "factorizable" if document["factorizable"] else "non-factorizable"
    )
    console.print(
        utils.create_value_table(
            title="(C,C,C) margins / beta",
            header=("Player", "Margin", "Three decimals"),
            rows=player_rows(
                [Fraction(value) for value in document["ccc_margins"]],
                decimal=decimal,
                truncated=True,
            ),
        )
    )
    console.print(
        utils.create_value_table(
            title="(D,D,D) margins",
            header=("Player", "Margin"),
            rows=player_rows(
                [Fraction(value) for value in document["ddd_margins"]], decimal=decimal
            ),
        )
    )
    violations = document["pd_violations"]
    console.print(
        "Generalized PD: "
        + ("valid" if not violations else f"violates {', '.join(violations)}")
    )
    exit_with(certified)
