#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Entry point for the spectral-index cli."""
import functools
import json
import logging
import pathlib

from fractions import Fraction
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import click

from dotenv import load_dotenv

from spectral_index._internal.reports import render_csv, render_json, render_table, write_output
from spectral_index.closed_form import ProductSphereModel
from spectral_index.exceptions import (
    CertifierInputError,
    FalsificationError,
    GridMismatchError,
    InvalidConfigError,
    InvalidModelError,
    NoRadiusSolutionError,
    NonPositiveWeightError,
    NotEllipticError,
    NotMinimalError,
    NotRMinimalError,
    SolverCapacityError,
    SpectralIndexError,
    ToleranceOverlapError,
    UncertifiedCountError,
)
from spectral_index.spectral_index import (
    Operator,
    grid_spectrum,
    index_report,
    load_model,
    model_spectrum,
    parse_periods,
    r_index_report,
    run_comparison_suite,
    run_convergence,
)

logger = logging.getLogger(__name__)

EXIT_INVALID_CONFIG = 2
EXIT_UNCERTIFIED = 3
EXIT_NO_SOLUTION = 4
EXIT_FALSIFIED = 5

EXIT_CODES: Tuple[Tuple[Tuple[type, ...], int], ...] = (
    ((UncertifiedCountError, ToleranceOverlapError), EXIT_UNCERTIFIED),
    ((NoRadiusSolutionError,), EXIT_NO_SOLUTION),
    ((FalsificationError,), EXIT_FALSIFIED),
    (
        (
            InvalidConfigError,
            InvalidModelError,
            GridMismatchError,
            NonPositiveWeightError,
            NotMinimalError,
            NotRMinimalError,
            NotEllipticError,
            CertifierInputError,
            SolverCapacityError,
        ),
        EXIT_INVALID_CONFIG,
    ),
)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


class RationalParamType(click.ParamType):
    """A real number kept exact: "9", "7/2" and "10.5" all become Fractions."""

    name = "rational"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> Fraction:
        """Parse the value."""
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            self.fail(f"'{value}' is not a number or a fraction p/q.", param, ctx)


class ResolutionListParamType(click.ParamType):
    """Comma separated grid resolutions, e.g. 16,32,64."""

    name = "resolutions"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> Tuple[int, ...]:
        """Parse the value."""
        if isinstance(value, (list, tuple)):
            parts: Sequence[Any] = value
        else:
            parts = [part for part in str(value).split(",") if part.strip()]
        try:
            resolutions = tuple(int(part) for part in parts)
        except ValueError:
            self.fail(f"'{value}' is not a comma separated list of integers.", param, ctx)
        if not resolutions or any(n <= 0 for n in resolutions):
            self.fail(f"Resolutions must be positive, got '{value}'.", param, ctx)
        return resolutions


RATIONAL = RationalParamType()
RESOLUTIONS = ResolutionListParamType()


def handle_errors(func: Callable) -> Callable:
    """Report package errors on stderr and exit with the code of their class."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except SpectralIndexError as err:
            code = next((code for classes, code in EXIT_CODES if isinstance(err, classes)), 1)
            logger.debug(f"{type(err).__name__} mapped to exit code {code}.")
            click.echo(f"Error: {err}", err=True)
            click.get_current_context().exit(code)

    return wrapper


def load_config(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[str]:
    """Turn a JSON config file into default values for every command.

    Top-level keys apply to all commands; a key naming a command holds values for that command only.
    """
    if not value:
        return value
    try:
        data = json.loads(pathlib.Path(value).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise click.BadParameter(f"Could not load config file '{value}': {err}", ctx=ctx, param=param)
    if not isinstance(data, dict):
        raise click.BadParameter("The config file must hold a JSON object.", ctx=ctx, param=param)
    commands = getattr(ctx.command, "commands", {})
    shared = {key: item for key, item in data.items() if key not in commands}
    ctx.default_map = {name: {**shared, **data.get(name, {})} for name in commands}
    return value


@click.group()
@click.option("-v", "--verbose", count=True, help="Increase logging verbosity, can be repeated.")
@click.option(
    "--config",
    type=click.Path(dir_okay=False),
    callback=load_config,
    is_eager=True,
    expose_value=False,
    help="JSON file providing default option values.",
)
def cli(verbose: int) -> None:
    """Spectral counting experiments for minimal and r-minimal hypersurfaces of spheres."""
    load_dotenv()
    logging.basicConfig(level=LOG_LEVELS[min(verbose, len(LOG_LEVELS) - 1)], format="%(levelname)s: %(message)s")


def model_options(func: Callable) -> Callable:
    """--great-sphere / --clifford / --model selection of a closed-form model."""
    func = click.option("--model", "model_file", type=click.Path(dir_okay=False), help="Model JSON file.")(func)
    func = click.option(
        "--clifford", type=click.INT, nargs=2, default=None, help="Clifford hypersurface S^M x S^(N-M): M N."
    )(func)
    func = click.option("--great-sphere", type=click.INT, default=None, help="Totally geodesic S^N.")(func)
    return func


def output_options(func: Callable) -> Callable:
    """--json / --csv / --output."""
    func = click.option("--output", "-o", default=None, help="Write the report to this file.")(func)
    func = click.option("--csv", "as_csv", is_flag=True, help="Write CSV instead of a table.")(func)
    func = click.option("--json", "as_json", is_flag=True, help="Write JSON instead of a table.")(func)
    return func


@click.command()
@model_options
@click.option("--grid", type=click.INT, default=None, help="N x N grid torus instead of a closed-form model.")
@click.option("--periods", default="clifford", show_default=True, help="Grid periods: 'clifford' or 'l1,l2'.")
@click.option("--potential", "potential_file", default=None, help="CSV grid with the potential q (grid only).")
@click.option("--weight", "weight_file", default=None, help="CSV grid with the weight p (grid only).")
@click.option("--cutoff", type=RATIONAL, required=True, help="Report every eigenvalue strictly below this value.")
@click.option(
    "--operator",
    type=click.Choice([operator.value for operator in Operator]),
    default=Operator.LAPLACE.value,
    show_default=True,
    help="Operator of a closed-form model.",
)
@click.option("--r", "order", type=click.INT, default=0, show_default=True, help="Order r of L_r.")
@output_options
@handle_errors
def spectrum(
    great_sphere: Optional[int],
    clifford: Optional[Tuple[int, int]],
    model_file: Optional[str],
    grid: Optional[int],
    periods: str,
    potential_file: Optional[str],
    weight_file: Optional[str],
    cutoff: Fraction,
    operator: str,
    order: int,
    as_json: bool,
    as_csv: bool,
    output: Optional[str],
) -> None:
    """Print the spectrum of a model (or of a grid torus) below a cutoff."""
    if grid is not None:
        result = grid_spectrum(grid, parse_periods(periods), cutoff, potential_file, weight_file)
    else:
        chosen = Operator(operator)
        model = _select_model(great_sphere, clifford, model_file, order if chosen is Operator.LR else 0)
        result = model_spectrum(model, cutoff, chosen, order)

    rows = [[value, mult] for value, mult in result.entries]
    _emit("spectrum", result.to_dict(), ("eigenvalue", "multiplicity"), rows, as_json, as_csv, output)


@click.command()
@model_options
@output_options
@handle_errors
def index(
    great_sphere: Optional[int],
    clifford: Optional[Tuple[int, int]],
    model_file: Optional[str],
    as_json: bool,
    as_csv: bool,
    output: Optional[str],
) -> None:
    """Print the Morse index, lambda_1 and the Laplacian index bound of a minimal model."""
    report = index_report(_select_model(great_sphere, clifford, model_file))
    _emit("index", report.to_dict(), ("quantity", "value"), report.summary_rows(), as_json, as_csv, output)


@click.command(name="r-index")
@click.argument("m", type=click.INT)
@click.argument("n", type=click.INT)
@click.argument("r", type=click.INT)
@click.option("--weighted", is_flag=True, help="Also report the count the weighted comparison bounds.")
@output_options
@handle_errors
def r_index(m: int, n: int, r: int, weighted: bool, as_json: bool, as_csv: bool, output: Optional[str]) -> None:
    """Solve the r-minimal torus S^M x S^(N-M) and print its r-index.

    M: Dimension of the first factor.

    N: Hypersurface dimension.

    R: Order r, with H_{r+1} = 0.
    """
    _check_triple(m, n, r)
    report = r_index_report(m, n, r, weighted=weighted)
    _emit("r-index", report.to_dict(), ("quantity", "value"), report.summary_rows(), as_json, as_csv, output)


@click.command()
@click.option("--grid", "resolution", type=click.INT, default=16, show_default=True, help="N x N grid.")
@click.option("--seeds", type=click.INT, default=100, show_default=True, help="Number of seeded instances.")
@click.option("--seed-base", type=click.INT, default=0, show_default=True, help="Seed of the first instance.")
@click.option("--constant-ratio", is_flag=True, help="Use q = c p, where the counts must agree exactly.")
@click.option("--weighted", is_flag=True, help="Draw a random weight p instead of p = 1.")
@click.option("--periods", default="clifford", show_default=True, help="Grid periods: 'clifford' or 'l1,l2'.")
@click.option("--progress/--no-progress", default=True, help="Show a progress bar on stderr.")
@output_options
@handle_errors
def compare(
    resolution: int,
    seeds: int,
    seed_base: int,
    constant_ratio: bool,
    weighted: bool,
    periods: str,
    progress: bool,
    as_json: bool,
    as_csv: bool,
    output: Optional[str],
) -> None:
    """Run seeded random instances of the weighted comparison theorem."""
    if seeds < 1:
        raise InvalidConfigError(f"--seeds must be positive, got {seeds}.")
    summary = run_comparison_suite(
        resolution=resolution,
        seeds=seeds,
        constant_ratio=constant_ratio,
        weighted=weighted,
        seed_base=seed_base,
        periods=parse_periods(periods),
        progress=progress,
    )
    header = ("seed", "branch", "a", "a0", "lhs", "rhs", "shift error", "passed")
    rows = [
        [
            instance.seed,
            instance.report.branch,
            instance.report.a,
            instance.report.a0,
            instance.report.lhs_count,
            instance.report.rhs_count,
            "" if instance.shift_error is None else instance.shift_error,
            instance.passed,
        ]
        for instance in summary.instances
    ]
    _emit("compare", summary.to_dict(), header, rows, as_json, as_csv, output)
    if not (as_json or as_csv):
        click.echo(f"\n{summary.passed}/{len(summary.instances)} passed, worst margin {summary.worst_margin}.")
    summary.raise_for_falsification()


@click.command()
@click.option("--periods", default="clifford", show_default=True, help="Torus periods: 'clifford' or 'l1,l2'.")
@click.option("--res", "resolutions", type=RESOLUTIONS, default="16,32,64", show_default=True, help="Resolutions.")
@output_options
@handle_errors
def converge(periods: str, resolutions: Tuple[int, ...], as_json: bool, as_csv: bool, output: Optional[str]) -> None:
    """Tabulate discretisation errors of the grid Laplacian and their observed order."""
    table = run_convergence(parse_periods(periods), resolutions)
    _emit("converge", table.to_dict(), table.header(), table.to_rows(), as_json, as_csv, output)


cli.add_command(spectrum)
cli.add_command(index)
cli.add_command(r_index)
cli.add_command(compare)
cli.add_command(converge)


def _select_model(
    great_sphere: Optional[int], clifford: Optional[Tuple[int, int]], model_file: Optional[str], r: int = 0
) -> ProductSphereModel:
    chosen = [option for option in (great_sphere, clifford, model_file) if option]
    if len(chosen) != 1:
        raise InvalidConfigError("Choose exactly one of --great-sphere, --clifford and --model.")
    if great_sphere:
        if great_sphere < 1:
            raise InvalidConfigError(f"--great-sphere must be positive, got {great_sphere}.")
        return ProductSphereModel.great_sphere(great_sphere)
    if clifford:
        m, n = clifford
        _check_triple(m, n, r)
        return ProductSphereModel.generalized_clifford(m, n, r)
    return load_model(model_file)  # type: ignore


def _check_triple(m: int, n: int, r: int) -> None:
    if not 1 <= m <= n - 1:
        raise InvalidConfigError(f"Need 1 <= M <= N - 1, got M={m}, N={n}.")
    if not 0 <= r <= n - 1:
        raise InvalidConfigError(f"Need 0 <= R <= N - 1, got R={r}, N={n}.")


def _emit(
    command: str,
    result: Dict[str, Any],
    header: Sequence[str],
    rows: Sequence[Sequence[Any]],
    as_json: bool,
    as_csv: bool,
    output: Optional[str],
) -> None:
    if as_json:
        text = render_json(command, _resolved_config(), result)
    elif as_csv:
        text = render_csv(header, rows)
    else:
        text = render_table(header, rows) + "\n"

    path = write_output(text, output)
    if path is None:
        click.echo(text, nl=False)
    else:
        click.echo(f"Report written to '{path}'.")


def _resolved_config() -> Dict[str, Any]:
    params = dict(click.get_current_context().params)
    params.pop("output", None)
    return params
