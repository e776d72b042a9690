"""Command-line front end.

Exit codes: 0 analysis completed (whatever the verdict), 1 malformed input,
2 not series-parallel (or wrong terminals), 3 infeasible request.
JSON output is byte-stable for a fixed input and seed: keys are emitted in a
fixed order, rationals print as p/q, floats with 12 significant digits.
"""

from __future__ import annotations

import json
import sys

import click

from .analysis import linkage_range, range_with_steps
from .connectedness import decide_connected
from .core import (
    InfeasibleDistanceError,
    InvalidLinkageError,
    InvalidTerminalsError,
    Linkage,
    LinkageError,
    NotSeriesParallelError,
    format_float,
    parse_linkage,
)
from .core import to_fraction
from .decompose import PathSpec, as_path_spec, build_sp_tree, tree_to_dot
from .intervals import nabla
from .oracle import FiberProbe, fiber_components, sample_moduli
from .realize import synthesize, verify

_EXIT_MALFORMED = 1
_EXIT_NOT_SP = 2
_EXIT_INFEASIBLE = 3


def _fail(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


def _read_linkage(path: str) -> Linkage:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
    except OSError as exc:
        _fail(_EXIT_MALFORMED, f"cannot read input: {exc}")
    try:
        return parse_linkage(text)
    except InvalidLinkageError as exc:
        _fail(_EXIT_MALFORMED, f"malformed input: {exc}")


def _terminals_option(linkage: Linkage, spec: str | None):
    if spec is None:
        return linkage.terminals
    parts = spec.split(",")
    if len(parts) != 2 or not all(parts):
        _fail(_EXIT_MALFORMED, f"bad --terminals {spec!r}; expected u,v")
    return (parts[0], parts[1])


def _tree_or_exit(linkage: Linkage, terminals):
    try:
        return build_sp_tree(linkage, terminals)
    except (NotSeriesParallelError, InvalidTerminalsError) as exc:
        _fail(_EXIT_NOT_SP, str(exc))
    except LinkageError as exc:
        _fail(_EXIT_MALFORMED, str(exc))


def _emit(doc: dict):
    click.echo(json.dumps(doc))


@click.group()
def main():
    """Analyse planar moduli spaces of series-parallel linkages."""


@main.command()
@click.option("--input", "input_path", default="-", help="linkage JSON file or -")
def check(input_path):
    """Decide empty / connected / disconnected; print a JSON verdict."""
    linkage = _read_linkage(input_path)
    try:
        verdict = decide_connected(linkage)
    except (NotSeriesParallelError, InvalidTerminalsError) as exc:
        _fail(_EXIT_NOT_SP, str(exc))
    except LinkageError as exc:
        _fail(_EXIT_MALFORMED, str(exc))
    _emit(verdict.to_json())


@main.command("range")
@click.option("--input", "input_path", default="-", help="linkage JSON file or -")
@click.option("--terminals", default=None, help="terminal pair u,v")
@click.option("--json", "as_json", is_flag=True, help="emit JSON with the step trace")
def range_cmd(input_path, terminals, as_json):
    """Print the achievable terminal-distance interval."""
    linkage = _read_linkage(input_path)
    tree = _tree_or_exit(linkage, _terminals_option(linkage, terminals))
    interval, steps = range_with_steps(tree)
    if as_json:
        _emit(
            {
                "terminals": [tree.source, tree.sink],
                "range": str(interval),
                "steps": steps,
            }
        )
    else:
        click.echo(str(interval))


@main.command("nabla")
@click.argument("lengths", nargs=-1, required=True)
@click.option("--json", "as_json", is_flag=True)
def nabla_cmd(lengths, as_json):
    """Print the connected-fibre distance set of a path of bars."""
    try:
        path = PathSpec(tuple(to_fraction(l) for l in lengths))
        result = nabla(path)
    except (ValueError, InvalidLinkageError) as exc:
        _fail(_EXIT_MALFORMED, str(exc))
    if as_json:
        _emit({"lengths": list(lengths), "nabla": str(result)})
    else:
        click.echo(str(result))


@main.command("tree")
@click.option("--input", "input_path", default="-", help="linkage JSON file or -")
@click.option("--terminals", default=None, help="terminal pair u,v")
def tree_cmd(input_path, terminals):
    """Print the series-parallel decomposition tree as DOT."""
    linkage = _read_linkage(input_path)
    tree = _tree_or_exit(linkage, _terminals_option(linkage, terminals))
    click.echo(tree_to_dot(tree))


@main.command("realize")
@click.option("--input", "input_path", default="-", help="linkage JSON file or -")
@click.option("--terminals", default=None, help="terminal pair u,v")
@click.option("--distance", required=True, help="target terminal distance")
def realize_cmd(input_path, terminals, distance):
    """Print explicit plane coordinates achieving the given distance."""
    linkage = _read_linkage(input_path)
    tree = _tree_or_exit(linkage, _terminals_option(linkage, terminals))
    try:
        realisation = synthesize(tree, distance)
    except InfeasibleDistanceError as exc:
        _fail(_EXIT_INFEASIBLE, str(exc))
    except InvalidLinkageError as exc:
        _fail(_EXIT_MALFORMED, str(exc))
    verify(linkage, realisation)
    placement = {
        v: [float(format_float(x)), float(format_float(y))]
        for v, (x, y) in sorted(realisation.placement.items())
    }
    _emit({"distance": float(format_float(float(realisation.placement[tree.sink][0]))), "placement": placement})


@main.command("oracle")
@click.option("--input", "input_path", default="-", help="linkage JSON file or -")
@click.option("--mode", type=click.Choice(["fiber", "moduli"]), required=True)
@click.option("--distance", default=None, help="fibre distance (fiber mode)")
@click.option("--resolution", default=200, type=int, help="grid steps per angle (fiber mode)")
@click.option("--samples", default=20000, type=int, help="sample count (moduli mode)")
@click.option("--seed", default=0, type=int)
@click.option("--epsilon", default=None, type=float, help="clustering/adjacency radius")
@click.option("--terminals", default=None, help="terminal pair u,v (moduli mode)")
def oracle_cmd(input_path, mode, distance, resolution, samples, seed, epsilon, terminals):
    """Run the brute-force numerical oracle; print a JSON report."""
    linkage = _read_linkage(input_path)
    if mode == "fiber":
        if distance is None:
            _fail(_EXIT_MALFORMED, "fiber mode needs --distance")
        try:
            path = as_path_spec(linkage)
            probe = FiberProbe(path, float(distance), resolution, epsilon)
            components = fiber_components(probe)
        except InfeasibleDistanceError as exc:
            _fail(_EXIT_INFEASIBLE, str(exc))
        except (ValueError, LinkageError) as exc:
            _fail(_EXIT_MALFORMED, str(exc))
        _emit(
            {
                "components": components,
                "range": None,
                "n": None,
                "seed": None,
                "epsilon": probe.epsilon,
                "resolution": resolution,
            }
        )
    else:
        try:
            result = sample_moduli(
                linkage,
                samples,
                seed,
                epsilon,
                _terminals_option(linkage, terminals),
            )
        except (NotSeriesParallelError, InvalidTerminalsError) as exc:
            _fail(_EXIT_NOT_SP, str(exc))
        except LinkageError as exc:
            _fail(_EXIT_MALFORMED, str(exc))
        _emit(
            {
                "components": result.components,
                "range": [
                    float(format_float(result.distance_min)),
                    float(format_float(result.distance_max)),
                ],
                "n": result.n,
                "seed": result.seed,
                "epsilon": float(format_float(result.epsilon)),
                "resolution": None,
            }
        )


if __name__ == "__main__":
    main()
