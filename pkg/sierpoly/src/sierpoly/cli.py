"""sierpoly: build Sierpinski polygon graphs, measure them, and probe their limits.

Commands: build, dist, ball, gh, iso, equivariance, census, cache-clear.
Structured output is JSON on stdout; logs go to stderr.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

import click

from . import conventions
from .errors import SierpolyError

if TYPE_CHECKING:
    from .cache import ResultCache
    from .config import SierpolySettings
    from .core import PolygonSpec
    from .params import RunConfig


@dataclass
class _State:
    settings: SierpolySettings
    cache: ResultCache | None


def _fails_cleanly(func: Callable[..., Any]) -> Callable[..., Any]:
    """Turn expected failures into one ``Error:`` line and exit status 1."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (SierpolyError, ValueError) as exc:
            click.echo(f"Error: {exc}", err=True)
            raise SystemExit(1) from None

    return wrapper


def _spec(r: int) -> PolygonSpec:
    from .core import make_spec

    return make_spec(r)


def _cached(state: _State, config: RunConfig, compute: Callable[[], dict[str, Any]]) -> dict[str, Any]:
    if state.cache is not None:
        hit = state.cache.get(config)
        if hit is not None:
            return hit
    result = compute()
    if state.cache is not None:
        state.cache.put(config, result)
    return result


def _emit(document: dict[str, Any]) -> None:
    click.echo(json.dumps(document, indent=2))


def _inclusive_range(text: str) -> tuple[int, int]:
    """``"2:7"`` -> (2, 7); a single number is a one-element range."""
    low, _, high = text.partition(":")
    try:
        start = int(low)
        stop = int(high) if high else start
    except ValueError:
        raise click.BadParameter(f"expected START:STOP, got {text!r}") from None
    return start, stop


@click.group(help="sierpoly - Sierpinski polygon graphs, their limit graphs and horofunction boundaries.")
@click.option("--log-level", default=None, help="Log level: debug|info|warning|error.")
@click.option(
    "--cache-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Result cache directory (default: $SIERPOLY_CACHE or ~/.cache/sierpoly).",
)
@click.option("--no-cache", is_flag=True, default=False, help="Neither read nor write cached results.")
@click.pass_context
def main(ctx: click.Context, log_level: str | None, cache_dir: Path | None, no_cache: bool) -> None:
    from .cache import ResultCache
    from .config import SierpolySettings

    settings = SierpolySettings()
    if cache_dir is not None:
        settings.cache_dir = cache_dir
    logging.basicConfig(
        level=(log_level or settings.log_level).upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = _State(settings, None if no_cache else ResultCache(settings.cache_dir))


# -- Construction and distances ---------------------------------------------


@main.command("build", help="Write the level-k graph as an edge list, DOT, GraphML or JSON.")
@click.option("--r", "r", type=int, required=True, help="Number of polygon sides.")
@click.option("--k", "k", type=int, required=True, help="Level.")
@click.option("--format", "fmt", type=click.Choice(conventions.EXPORT_FORMATS), default="edgelist")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--mode", type=click.Choice(["auto", "materialized", "implicit"]), default="auto")
@click.option("--json", "as_json", is_flag=True, help="Print a build summary as JSON.")
@click.pass_obj
@_fails_cleanly
def build_cmd(state: _State, r: int, k: int, fmt: str, out: Path | None, mode: str, as_json: bool) -> None:
    from .construction import build_level_graph
    from .exports import export_graph
    from .reports import BuildSummary

    graph = build_level_graph(_spec(r), k, mode, limit=state.settings.materialize_limit)
    path = export_graph(graph, fmt, out)
    if as_json:
        summary = BuildSummary(
            r=r,
            k=k,
            mode=str(graph.mode),
            format=fmt,
            path=str(path),
            vertices=graph.vertex_count,
            edges=graph.edge_count,
            degrees=graph.degree_histogram(),
        )
        click.echo(summary.to_json())
    else:
        click.echo(f"wrote {path} ({graph.vertex_count} vertices, {graph.edge_count} edges)")


@main.command("dist", help="Exact distance between two level-k addresses.")
@click.option("--r", "r", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--engine", type=click.Choice(["bfs", "hier"]), default="hier")
@click.argument("u")
@click.argument("v")
@click.pass_obj
@_fails_cleanly
def dist_cmd(state: _State, r: int, k: int, engine: str, u: str, v: str) -> None:
    from .construction import BuildMode, build_level_graph
    from .core import parse_address
    from .metric import distance

    spec = _spec(r)
    mode = BuildMode.auto if engine == "bfs" else BuildMode.implicit
    graph = build_level_graph(spec, k, mode, limit=state.settings.materialize_limit)
    a = graph.vertex(parse_address(spec, u, k))
    b = graph.vertex(parse_address(spec, v, k))
    click.echo(distance(graph, a, b, engine))


@main.command("ball", help="Distance matrix of a ball, at level k or in the limit graph of xi.")
@click.option("--r", "r", type=int, required=True)
@click.option("--radius", type=int, required=True)
@click.option("--k", "k", type=int, default=None, help="Level (with --center).")
@click.option("--center", default=None, help="Center address of length k.")
@click.option("--xi", default=None, help="Basepoint sequence, e.g. '1(54)*'; uses the stable ball.")
@click.option("--stability", type=click.Choice(["heuristic", "certified"]), default="heuristic")
@click.pass_obj
@_fails_cleanly
def ball_cmd(
    state: _State, r: int, radius: int, k: int | None, center: str | None, xi: str | None, stability: str
) -> None:
    from .construction import BuildMode, build_level_graph
    from .core import parse_address, parse_sequence
    from .limit import stabilization_level, stable_ball
    from .metric import ball
    from .reports import BallReport, CertificateReport

    spec = _spec(r)
    if (xi is None) == (k is None or center is None):
        raise click.UsageError("give either --xi, or both --k and --center")
    if xi is not None:
        seq = parse_sequence(spec, xi)
        search = _search_budget(state)
        cert = stabilization_level(spec, seq, radius, stability, **search)
        found = stable_ball(spec, seq, radius, stability, **search)
        report = BallReport(
            **found.to_dict(spec),
            xi=seq.text(r),
            certificate=CertificateReport(
                r=r, xi=seq.text(r), radius=radius, level=cert.level, window=cert.window, mode=str(cert.mode)
            ),
        )
    else:
        assert k is not None and center is not None
        graph = build_level_graph(spec, k, BuildMode.auto, limit=state.settings.materialize_limit)
        found = ball(graph, graph.vertex(parse_address(spec, center, k)), radius)
        report = BallReport(**found.to_dict(spec))
    click.echo(report.to_json())


def _search_budget(state: _State) -> dict[str, int]:
    return {
        "window": state.settings.probe_window,
        "max_level": state.settings.max_level,
        "step_budget": state.settings.isometry_step_budget,
    }


# -- Limit graphs ------------------------------------------------------------


@main.command("gh", help="Level from which balls around xi stop changing (strong GH convergence).")
@click.option("--r", "r", type=int, required=True)
@click.option("--xi", required=True, help="Basepoint sequence, e.g. '1(54)*'.")
@click.option("--radius", type=int, required=True)
@click.option("--stability", "--mode", "stability", type=click.Choice(["heuristic", "certified"]), default="heuristic")
@click.pass_obj
@_fails_cleanly
def gh_cmd(state: _State, r: int, xi: str, radius: int, stability: str) -> None:
    from .core import parse_sequence
    from .limit import stabilization_level
    from .params import RunConfig
    from .reports import CertificateReport

    spec = _spec(r)
    seq = parse_sequence(spec, xi).normalized()
    config = RunConfig(
        command="gh", r=r, xi=seq.text(r), radius=radius, stability=stability, **_search_budget(state)
    )

    def compute() -> dict[str, Any]:
        cert = stabilization_level(spec, seq, radius, stability, **_search_budget(state))
        return CertificateReport(
            r=r, xi=seq.text(r), radius=radius, level=cert.level, window=cert.window, mode=str(cert.mode)
        ).dump()

    _emit(_cached(state, config, compute))


@main.command("iso", help="Test whether the limit graphs of xi and eta are isomorphic.")
@click.option("--r", "r", type=int, required=True)
@click.option("--xi", required=True)
@click.option("--eta", required=True)
@click.option("--max-radius", type=int, default=4, show_default=True)
@click.pass_obj
@_fails_cleanly
def iso_cmd(state: _State, r: int, xi: str, eta: str, max_radius: int) -> None:
    from .core import parse_sequence
    from .limit import iso_check_theorem
    from .params import RunConfig

    spec = _spec(r)
    left = parse_sequence(spec, xi).normalized()
    right = parse_sequence(spec, eta).normalized()
    config = RunConfig(
        command="iso",
        r=r,
        xi=left.text(r),
        eta=right.text(r),
        radius=max_radius,
        max_level=state.settings.max_level,
        step_budget=state.settings.isometry_step_budget,
    )

    def compute() -> dict[str, Any]:
        verdict = iso_check_theorem(
            spec,
            left,
            right,
            max_radius,
            max_level=state.settings.max_level,
            step_budget=state.settings.isometry_step_budget,
        )
        return verdict.dump()

    _emit(_cached(state, config, compute))


@main.command("equivariance", help="Check every letterwise rotation and reflection at level k.")
@click.option("--r", "r", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@click.pass_obj
@_fails_cleanly
def equivariance_cmd(state: _State, r: int, k: int) -> None:
    from .limit import dihedral_equivariance_check

    report = dihedral_equivariance_check(_spec(r), k, max_counterexamples=state.settings.max_counterexamples)
    click.echo(report.to_json())


# -- Boundary ----------------------------------------------------------------


@main.command("census", help="Busemann, antipodal and shifted horofunctions at xi = w.j^inf.")
@click.option("--r", "r", type=int, required=True)
@click.option("--xi", required=True, help="Eventually constant basepoint, e.g. '4*' or '13(4)*'.")
@click.option("--params", "params_file", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--levels", default=None, help="Hole levels START:STOP (inclusive).")
@click.option("--radius", type=int, default=None)
@click.option("--shifts", default=None, help="Shift range LOW:HIGH (inclusive).")
@click.option("--n-budget", type=int, default=None)
@click.option("--ray-depth", type=int, default=None)
@click.option("--stability", type=click.Choice(["heuristic", "certified"]), default="heuristic")
@click.option(
    "--plots",
    "plots_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Write profile and defect tables, a heatmap and the run parameters here.",
)
@click.pass_obj
@_fails_cleanly
def census_cmd(
    state: _State,
    r: int,
    xi: str,
    params_file: Path | None,
    levels: str | None,
    radius: int | None,
    shifts: str | None,
    n_budget: int | None,
    ray_depth: int | None,
    stability: str,
    plots_dir: Path | None,
) -> None:
    from .boundary import boundary_census
    from .core import parse_sequence
    from .params import CensusParams, LevelRange, RunConfig, ShiftRange, load_census
    from .reports import CensusReport

    spec = _spec(r)
    seq = parse_sequence(spec, xi).normalized()
    params = load_census(params_file) if params_file else CensusParams()
    if levels is not None:
        params.levels = LevelRange(*_inclusive_range(levels))
    if shifts is not None:
        params.shifts = ShiftRange(*_inclusive_range(shifts))
    if radius is not None:
        params.radius = radius
    if n_budget is not None:
        params.n_budget = n_budget
    if ray_depth is not None:
        params.ray_depth = ray_depth
    params.validate()
    config = RunConfig(
        command="census",
        r=r,
        xi=seq.text(r),
        stability=stability,
        profile_window=state.settings.profile_window,
        census=params,
        **_search_budget(state),
    )

    def compute() -> dict[str, Any]:
        report = boundary_census(
            spec,
            seq,
            params,
            mode=stability,
            profile_window=state.settings.profile_window,
            **_search_budget(state),
        )
        return report.dump()

    document = _cached(state, config, compute)
    if plots_dir is not None:
        from .params import params_path, save
        from .plots import write_census_plots

        written = write_census_plots(CensusReport.model_validate(document), plots_dir)
        written.append(save(params_path(plots_dir), config))
        for path in written:
            click.echo(f"wrote {path}", err=True)
    _emit(document)


@main.command("cache-clear", help="Remove every cached result.")
@click.option("--json", "as_json", is_flag=True, help="Output machine-readable JSON.")
@click.pass_obj
def cache_clear_cmd(state: _State, as_json: bool) -> None:
    from .cache import ResultCache
    from .reports import CacheClearSummary

    cache = state.cache or ResultCache(state.settings.cache_dir)
    removed = cache.clear()
    if as_json:
        click.echo(CacheClearSummary(cache_dir=str(cache.directory), removed=removed).to_json())
    else:
        click.echo(f"Removed {removed} cached result(s) from {cache.directory}")
