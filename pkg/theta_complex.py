#!/usr/bin/env python3
"""
Theta Complex - Lovasz-type theta numbers of pure simplicial complexes.

This tool computes theta numbers of simplicial complexes by semidefinite
programming, together with Laplacian spectra, eigenvalue bounds on the
independence number, chromatic invariants and random-complex experiments.
"""

import json
import logging
import os
import sys

import click
from rich.console import Console

# Add the src directory to the path
sys.path.append(os.path.join(os.path.dirname(__file__), "src"))

# Import project modules
from src.cli.commands import (
    alpha_command,
    bounds_command,
    chi_command,
    chik_command,
    experiment_command,
    gen_command,
    info_command,
    laplacian_command,
    link_check_command,
    theta_command,
)
from src.cli.utils import apply_overrides, check_environment, get_components, load_config, setup_logging
from src.errors import ThetaComplexError

# Initialize console for rich output
console = Console(stderr=True)
logger = logging.getLogger("theta_complex")


def _fail(ctx: click.Context, error: Exception):
    """Report an error as JSON on stderr and exit with its code."""
    code = getattr(error, "exit_code", 1)
    payload = {"error": type(error).__name__, "message": str(error)}
    click.echo(json.dumps(payload, sort_keys=True), err=True)
    if _output_format(ctx) == "table":
        console.print(f"[bold red]{type(error).__name__}:[/bold red] {str(error)}")
    logger.error(f"{type(error).__name__}: {error}")
    sys.exit(code)


def _output_format(ctx: click.Context) -> str:
    obj = ctx.find_root().obj or {}
    return obj.get("config", {}).get("output", {}).get("format", "json")


def _run(ctx: click.Context, command, *args, **kwargs):
    try:
        components = get_components(ctx.find_root().obj["config"])
        return command(components, *args, **kwargs)
    except ThetaComplexError as e:
        _fail(ctx, e)
    except Exception as e:
        logger.exception("Unexpected failure")
        _fail(ctx, e)


def _seeds(raw):
    if raw is None:
        return None
    try:
        return [int(s) for s in raw.split(",") if s.strip()]
    except ValueError:
        raise click.BadParameter(f"seeds must be integers separated by commas, got '{raw}'")


@click.group()
@click.version_option(version="0.1.0")
@click.option("--tol-feas", type=float, help="Feasibility tolerance of the SDP solver")
@click.option("--tol-psd", type=float, help="PSD tolerance of the SDP solver")
@click.option("--max-iter", type=int, help="Iteration limit of the SDP solver")
@click.option("--rho", type=float, help="Initial ADMM penalty")
@click.option("--format", "output_format", type=click.Choice(["json", "csv", "table"]), help="Output format")
@click.option("--seed", type=int, help="Random seed for generators and experiments")
@click.option("-v", "--verbose", count=True, help="Increase log verbosity")
@click.pass_context
def cli(ctx, tol_feas, tol_psd, max_iter, rho, output_format, seed, verbose):
    """Theta Complex - theta numbers of pure simplicial complexes."""
    ctx.ensure_object(dict)
    try:
        check_environment()
        config = load_config()
        config = apply_overrides(config, tol_feas=tol_feas, tol_psd=tol_psd, max_iter=max_iter,
                                 rho=rho, output_format=output_format, seed=seed)
        verbosity = "debug" if verbose else config.get("output", {}).get("verbosity", "info")
        setup_logging(verbosity)
    except ThetaComplexError as e:
        _fail(ctx, e)
    except Exception as e:
        console.print(f"[bold red]Error during initialization:[/bold red] {str(e)}")
        sys.exit(1)
    ctx.obj["config"] = config
    ctx.obj["seed"] = seed


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def info(ctx, path):
    """Show face counts, skeleton completeness and components."""
    _run(ctx, lambda c: info_command(c["storage_manager"], path, _output_format(ctx)))


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--dim", type=int, required=True, help="Cochain dimension i")
@click.option("--which", type=click.Choice(["up", "down", "adjacency"]), default="up", help="Operator")
@click.option("--spectrum", "show_spectrum", is_flag=True, help="Print eigenvalues instead of the matrix")
@click.pass_context
def laplacian(ctx, path, dim, which, show_spectrum):
    """Print a combinatorial Laplacian or the adjacency matrix."""
    fmt = ctx.find_root().params.get("output_format") or ("json" if show_spectrum else "csv")
    _run(ctx, lambda c: laplacian_command(c["storage_manager"], path, dim=dim, which=which,
                                          show_spectrum=show_spectrum, output_format=fmt))


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--level", type=int, help="Hierarchy level l (defaults to k)")
@click.option("--hat", is_flag=True, help="Solve the strengthened hierarchy program")
@click.option("--certificate", type=click.Path(exists=True, dir_okay=False), help="Dual certificate CSV to evaluate")
@click.option("--dump", type=click.Path(dir_okay=False), help="Write the program in SDPA-like text form")
@click.pass_context
def theta(ctx, path, level, hat, certificate, dump):
    """Compute a theta number or evaluate a dual certificate."""
    _run(ctx, lambda c: theta_command(c["theta_calculator"], c["storage_manager"], path, level=level,
                                      hat=hat, certificate=certificate, dump=dump,
                                      output_format=_output_format(ctx)))


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-alpha-vertices", type=int, default=20, help="Largest n with exact alpha")
@click.pass_context
def bounds(ctx, path, max_alpha_vertices):
    """Compare theta_k with alpha and the eigenvalue bounds."""
    _run(ctx, lambda c: bounds_command(c["theta_calculator"], c["storage_manager"], path,
                                       max_alpha_vertices=max_alpha_vertices,
                                       output_format=_output_format(ctx)))


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def alpha(ctx, path):
    """Exact independence number."""
    _run(ctx, lambda c: alpha_command(c["storage_manager"], path, _output_format(ctx)))


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def chi(ctx, path):
    """Weak chromatic number and chromatic number of the 1-skeleton."""
    _run(ctx, lambda c: chi_command(c["storage_manager"], path, _output_format(ctx)))


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def chik(ctx, path):
    """Least l with a homomorphism into the complete complex on l vertices."""
    _run(ctx, lambda c: chik_command(c["chromatic_search"], c["storage_manager"], path, _output_format(ctx)))


@cli.command()
@click.argument("family", type=click.Choice(["complete", "tripartite", "bipartite", "cycle", "petersen", "lm", "gnp"]))
@click.option("--n", type=int, help="Vertex count")
@click.option("--k", type=int, help="Dimension")
@click.option("--m", type=int, help="Part size of the tripartite and bipartite families")
@click.option("--p", type=float, help="Face or edge probability")
@click.option("--seed", "gen_seed", type=int, help="Generator seed (defaults to the global --seed, then 0)")
@click.option("--complement", is_flag=True, help="Emit the complementary complex")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write to a file instead of stdout")
@click.pass_context
def gen(ctx, family, n, k, m, p, gen_seed, complement, output):
    """Generate a named or random complex as complex.json."""
    seed = gen_seed if gen_seed is not None else ctx.find_root().obj.get("seed")
    _run(ctx, lambda c: gen_command(c["storage_manager"], family, n=n, k=k, m=m, p=p, seed=seed,
                                    complement=complement, output=output))


@cli.group()
def experiment():
    """Random-complex experiments."""


@experiment.command()
@click.option("--kind", type=click.Choice(["theta_k", "theta_ell"]), default="theta_k", help="Quantity to measure")
@click.option("--grid", required=True, help='Grid such as "n=8,10,12;p=0.5;k=2"')
@click.option("--seeds", help="Comma-separated seeds (defaults to the configured seeds)")
@click.option("--name", help="Also save <name>.csv and <name>_summary.json in the results directory")
@click.pass_context
def scaling(ctx, kind, grid, seeds, name):
    """Ratios of theta to its predicted scale over a grid of random samples."""
    fmt = ctx.find_root().params.get("output_format") or "csv"
    _run(ctx, lambda c: experiment_command(c["experiment"], c["storage_manager"], kind, grid,
                                           seeds=_seeds(seeds), name=name, output_format=fmt))


@experiment.command()
@click.option("--n", type=int, required=True, help="Vertex count")
@click.option("--k", type=int, default=2, help="Dimension")
@click.option("--p", type=float, required=True, help="Face probability")
@click.option("--seeds", help="Comma-separated seeds (defaults to the configured seeds)")
@click.pass_context
def links(ctx, n, k, p, seeds):
    """Check the complement localization inequality on random complexes."""
    config = ctx.find_root().obj["config"]
    chosen = _seeds(seeds) or config.get("experiments", {}).get("seeds", [1])
    _run(ctx, lambda c: link_check_command(c["storage_manager"], n, k, p, chosen, _output_format(ctx)))


def main():
    """Main entry point for the application."""
    try:
        cli(obj={})
    except Exception as e:
        print(f"Error: {str(e)}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
