"""
Command line interface.

JSON payloads go to stdout, logs to stderr. Exit status is 2 for usage and
configuration errors, 1 when a check finds a counterexample and 0 otherwise.
"""

import json
import os
import sys
from pathlib import Path
from typing import Any

import click
import numpy as np
from pydantic import ValidationError

from .config import get_settings
from .epigraph import oracle
from .epigraph.bti import certified_envelope, separate
from .epigraph.cost_model import TimeGrid, cost_from_spec
from .epigraph.ranktree import catalan, enumerate_trees, find_cartesian_tree
from .epigraph.schedule import FracPoint
from .errors import BtiepiError, CapExceededError, ConfigurationError, DomainError, LPFormatError
from .experiment import DeskExperiment
from .log import configure_logging, get_component_logger
from .solver.branch_bound import solve_mip
from .solver.gap import integrality_gap
from .solver.program import LinearProgram
from .solver.simplex import solve_lp
from .uc.formulations import FORMULATIONS, add_static_btis, build_model
from .uc.instance import load_instance
from .uc.lpformat import emit_lp, parse_lp

logger = get_component_logger("btiepi.cli")

DEFAULT_COST = "exp:V=25,f=8,lambda=0.3"
USAGE_ERRORS = (ConfigurationError, DomainError, CapExceededError, LPFormatError, ValidationError)


class _Group(click.Group):
    """Maps btiepi errors onto click's exit codes."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except USAGE_ERRORS as e:
            raise click.UsageError(str(e), ctx) from e
        except BtiepiError as e:
            raise click.ClickException(str(e)) from e


def _emit(payload: Any) -> None:
    pretty = click.get_current_context().find_root().obj.get("pretty", False)
    click.echo(json.dumps(payload, indent=2 if pretty else None, default=str))


def _read_json(source: str) -> Any:
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            text = Path(source).read_text()
        except OSError as e:
            raise ConfigurationError(f"cannot read {source}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"invalid JSON input: {e}") from e


def _vector(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace("[", "").replace("]", "").split(",") if v.strip()]
    except ValueError as e:
        raise ConfigurationError(f"invalid vector {text!r}") from e


def _grid(periods: int, pre_offline: float, delta: str | None) -> TimeGrid:
    if delta is None:
        return TimeGrid.uniform(periods, pre_offline)
    return TimeGrid(T=periods, delta=_vector(delta), pre_offline=pre_offline)


def _epigraph_options(func: Any) -> Any:
    func = click.option("--delta", help="Comma-separated period lengths (default all 1).")(func)
    func = click.option("--pre-offline", type=float, default=0.0, show_default=True,
                        help="Offline time before the horizon.")(func)
    func = click.option("--cost", "cost_spec", default=DEFAULT_COST, show_default=True,
                        help="exp:V=..,f=..,lambda=.. or table:L:C,... or a JSON fragment.")(func)
    return func


def _finish(report: oracle.OracleReport) -> None:
    _emit({**report.model_dump(), "ok": report.ok})
    if not report.ok:
        sys.exit(1)


@click.group(cls=_Group)
@click.option("--log-level", default=None, help="Log level (default from BTIEPI_LOG).")
@click.option("--jobs", type=int, default=None, help="Worker processes for oracle enumeration.")
@click.option("--pretty", is_flag=True, help="Indent JSON output.")
@click.pass_context
def main(ctx: click.Context, log_level: str | None, jobs: int | None, pretty: bool) -> None:
    """Binary tree inequalities for start-up cost epigraphs."""
    if jobs is not None:
        os.environ["BTIEPI_JOBS"] = str(jobs)
        get_settings.cache_clear()
    configure_logging(log_level or get_settings().log_level)
    ctx.ensure_object(dict)
    ctx.obj["pretty"] = pretty


@main.command("separate")
@click.option("--point", default="-", show_default=True,
              help='JSON {"u": [...], "c": ...}, a file path, or - for stdin.')
@click.option("--tolerance", type=float, default=None, help="Violation threshold.")
@click.option("--relative", is_flag=True, help="Scale the threshold by max(1, |rhs|).")
@_epigraph_options
def separate_command(
    point: str, tolerance: float | None, relative: bool, cost_spec: str, pre_offline: float,
    delta: str | None,
) -> None:
    """Separate a point (u, c) from the epigraph hull."""
    data = _read_json(point)
    if not isinstance(data, dict) or "u" not in data or "c" not in data:
        raise ConfigurationError('the point must be a JSON object {"u": [...], "c": ...}')
    frac = FracPoint.of(data["u"], data["c"])
    grid = _grid(len(frac.u), pre_offline, delta)
    result = separate(frac, cost_from_spec(cost_spec), grid, tolerance, relative)
    _emit(result.to_dict())


@main.command("envelope")
@click.option("--u", "u_text", required=True, help="Comma-separated point in [0,1]^T.")
@click.option("--certify", is_flag=True, help="Include the certifying tree and coefficients.")
@_epigraph_options
def envelope_command(
    u_text: str, certify: bool, cost_spec: str, pre_offline: float, delta: str | None
) -> None:
    """Convex envelope of the summed start-up costs at u."""
    u = _vector(u_text)
    result = certified_envelope(u, cost_from_spec(cost_spec), _grid(len(u), pre_offline, delta))
    payload: dict[str, Any] = {"value": result.value}
    if certify:
        payload["tree"] = result.cut.source_tree.to_text()
        payload["a"] = list(result.cut.coefficients)
    _emit(payload)


@main.command("tree")
@click.option("--u", "u_text", required=True, help="Comma-separated values.")
def tree_command(u_text: str) -> None:
    """Cartesian tree of a vector, in parenthesized form."""
    _emit({"tree": find_cartesian_tree(_vector(u_text)).to_text()})


@main.command("trees")
@click.option("--n", "n", type=int, required=True, help="Number of nodes.")
@click.option("--count", is_flag=True, help="Only count the trees.")
def trees_command(n: int, count: bool) -> None:
    """Enumerate every rank tree with n nodes."""
    trees = enumerate_trees(n)
    if count:
        enumerated = sum(1 for _ in trees)
        _emit({"n": n, "count": enumerated, "catalan": catalan(n)})
    else:
        _emit({"n": n, "trees": [tree.to_text() for tree in trees]})


@main.command("facets")
@click.option("--T", "periods", type=int, required=True, help="Number of periods.")
@_epigraph_options
def facets_command(periods: int, cost_spec: str, pre_offline: float, delta: str | None) -> None:
    """Count the distinct BTIs and confirm them as facets."""
    census = oracle.facet_census(cost_from_spec(cost_spec), _grid(periods, pre_offline, delta))
    _emit(census.model_dump())


@main.group("oracle")
def oracle_group() -> None:
    """Brute-force checks; exit status 1 on any counterexample."""


@oracle_group.command("validity")
@click.option("--T", "periods", type=int, required=True)
@_epigraph_options
def oracle_validity(periods: int, cost_spec: str, pre_offline: float, delta: str | None) -> None:
    """Every BTI holds at every binary schedule."""
    _finish(oracle.verify_validity(cost_from_spec(cost_spec), _grid(periods, pre_offline, delta)))


@oracle_group.command("equality")
@click.option("--T", "periods", type=int, required=True)
@_epigraph_options
def oracle_equality(periods: int, cost_spec: str, pre_offline: float, delta: str | None) -> None:
    """Tight schedules are exactly the rooted subtrees."""
    cost = cost_from_spec(cost_spec)
    _finish(oracle.verify_equality_characterization(cost, _grid(periods, pre_offline, delta)))


@oracle_group.command("irredundancy")
@click.option("--T", "periods", type=int, required=True)
@_epigraph_options
def oracle_irredundancy(periods: int, cost_spec: str, pre_offline: float, delta: str | None) -> None:
    """Every ordered pair of trees is separated by a vertex."""
    cost = cost_from_spec(cost_spec)
    _finish(oracle.verify_irredundancy(cost, _grid(periods, pre_offline, delta)))


@oracle_group.command("separation")
@click.option("--T", "periods", type=int, required=True)
@click.option("--points", "count", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_epigraph_options
def oracle_separation(
    periods: int, count: int, seed: int, cost_spec: str, pre_offline: float, delta: str | None
) -> None:
    """Fast separation agrees with the maximum over all trees."""
    cost, grid = cost_from_spec(cost_spec), _grid(periods, pre_offline, delta)
    points = oracle.random_points(np.random.default_rng(seed), cost, grid, count)
    _finish(oracle.verify_separation(cost, grid, points))


@oracle_group.command("homogeneity")
@click.option("--T", "periods", type=int, required=True)
@click.option("--samples", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trees", "use_trees", is_flag=True, help="Use the maximum over all trees.")
@_epigraph_options
def oracle_homogeneity(
    periods: int, samples: int, seed: int, use_trees: bool, cost_spec: str, pre_offline: float,
    delta: str | None,
) -> None:
    """The envelope is positively homogeneous."""
    report = oracle.verify_homogeneity(
        cost_from_spec(cost_spec),
        _grid(periods, pre_offline, delta),
        np.random.default_rng(seed),
        samples=samples,
        use_trees=use_trees,
    )
    _finish(report)


@oracle_group.command("monotonicity")
@click.option("--T", "periods", type=int, required=True)
@_epigraph_options
def oracle_monotonicity(periods: int, cost_spec: str, pre_offline: float, delta: str | None) -> None:
    """The cost differences grow with the offline counts on both sides."""
    report = oracle.verify_monotonicity(cost_from_spec(cost_spec), _grid(periods, pre_offline, delta))
    _emit({**report.model_dump(), "ok": report.ok, "strict": report.strict})
    if not report.ok:
        sys.exit(1)


@oracle_group.command("top-nodes")
@click.option("--n", "n", type=int, required=True)
def oracle_top_nodes(n: int) -> None:
    """Rank identities of top-left and top-right nodes."""
    _finish(oracle.verify_top_nodes(n))


@oracle_group.command("hull")
@click.option("--u", "u_text", required=True)
@click.option("--c", "c_sigma", type=float, default=None, help="Also test membership of (u, c).")
@_epigraph_options
def oracle_hull(
    u_text: str, c_sigma: float | None, cost_spec: str, pre_offline: float, delta: str | None
) -> None:
    """Cheapest convex combination of vertices representing u."""
    u = _vector(u_text)
    cost, grid = cost_from_spec(cost_spec), _grid(len(u), pre_offline, delta)
    value = oracle.hull_value(u, cost, grid)
    payload: dict[str, Any] = {"hull_value": value, "envelope": certified_envelope(u, cost, grid).value}
    if c_sigma is not None:
        payload["in_epigraph_hull"] = oracle.in_epigraph_hull(u, c_sigma, cost, grid)
    _emit(payload)


def _instance_options(func: Any) -> Any:
    func = click.option("--demand-csv", type=click.Path(exists=True, dir_okay=False),
                        default=None, help="CSV file replacing the instance demand.")(func)
    func = click.option("--instance", "instance_path", required=True,
                        type=click.Path(exists=True, dir_okay=False), help="Instance JSON file.")(func)
    return func


@main.command("build")
@_instance_options
@click.option("--formulation", type=click.Choice(list(FORMULATIONS)), required=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="LP file to write (default stdout).")
@click.option("--startup-only", is_flag=True, help="Only u and csum per unit, no demand rows.")
@click.option("--static-btis", is_flag=True, help="Add every BTI as a row (small T only).")
def build_command(
    instance_path: str, demand_csv: str | None, formulation: str, output: str | None,
    startup_only: bool, static_btis: bool,
) -> None:
    """Write the Unit Commitment model in LP format."""
    instance = load_instance(instance_path, demand_csv)
    model = build_model(instance, formulation, startup_only=startup_only)
    if static_btis:
        add_static_btis(model, instance)
    if output is None:
        emit_lp(model, sys.stdout)
    else:
        emit_lp(model, output)


@main.command("solve")
@click.option("--lp", "lp_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--relax", is_flag=True, help="Drop integrality.")
def solve_command(lp_path: str, relax: bool) -> None:
    """Solve an LP file with the bundled simplex (and branch-and-bound)."""
    lp: LinearProgram = parse_lp(Path(lp_path).read_text())
    result = solve_lp(lp.relaxation()) if relax or not lp.integer_columns() else solve_mip(lp)
    _emit({"status": result.status.value, "objective": result.objective, "nodes": result.nodes,
           "values": result.as_dict()})


@main.command("gap")
@_instance_options
@click.option("--formulation", type=click.Choice(list(FORMULATIONS)), required=True)
@click.option("--max-rounds", type=int, default=None, help="Cutting-plane round cap.")
def gap_command(instance_path: str, demand_csv: str | None, formulation: str, max_rounds: int | None) -> None:
    """Integrality gap of one formulation."""
    instance = load_instance(instance_path, demand_csv)
    _emit(integrality_gap(instance, formulation, max_rounds=max_rounds).to_dict())


@main.command("experiment")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--instances", "count", type=int, default=20, show_default=True)
@click.option("--units", type=int, default=2, show_default=True)
@click.option("--periods", type=int, default=12, show_default=True)
@click.option("--formulation", "formulations", multiple=True, type=click.Choice(list(FORMULATIONS)),
              help="Restrict to these formulations (repeatable).")
def experiment_command(
    seed: int, count: int, units: int, periods: int, formulations: tuple[str, ...]
) -> None:
    """Desk-scale integrality-gap comparison on random instances."""
    experiment = DeskExperiment.random(
        seed, count, units=units, periods=periods, formulations=formulations or tuple(FORMULATIONS)
    )
    experiment.run()
    summary = experiment.summary()
    _emit(summary)
    if summary["dominance_violations"]:
        logger.warning("Dominance violated", count=len(summary["dominance_violations"]))
        sys.exit(1)


if __name__ == "__main__":
    main()
