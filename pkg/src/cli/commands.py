"""
CLI commands for Theta Complex.

Each command computes a JSON-ready dictionary, writes it to stdout in the
requested format and returns True.
"""

import logging
from typing import Any, Dict, Optional, Sequence

import click
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from src.combinatorics.homomorphism import ChromaticSearch, component_chromatic_bound
from src.combinatorics.invariants import alpha, chi_skeleton, chi_weak
from src.complex.families import family_complex
from src.complex.simplicial_complex import graph_complex
from src.errors import ConfigurationError, PreconditionError
from src.random_lab.experiments import ScalingExperiment, link_spectra_check, parse_grid, summarize
from src.random_lab.random_models import sample_gnp, sample_lm
from src.spectral.chain_operators import (
    adjacency,
    down_laplacian,
    hodge_dimensions,
    spectrum,
    spectrum_multiplicities,
    up_laplacian,
)
from src.storage.storage_manager import StorageManager
from src.theta.bounds import golubev_bound, link_bound, ratio_bound, spectral_lower_bound
from src.theta.theta_builder import ThetaCalculator, build_theta_ell

# Initialize console for rich output
console = Console()
status_console = Console(stderr=True)
logger = logging.getLogger(__name__)

SANDWICH_TOL = 1e-4


def _emit(data: Dict[str, Any], storage_manager: StorageManager, output_format: str, title: str):
    if output_format == "table":
        _display_result(data, title)
    else:
        click.echo(storage_manager.dumps(data))


def info_command(storage_manager: StorageManager, path: str, output_format: str = "json"):
    """
    Show the structure of a complex.

    Args:
        storage_manager: The storage manager instance
        path (str): complex.json file
        output_format (str): json, csv or table

    Returns:
        bool: True if successful
    """
    complex_ = storage_manager.load_complex(path)
    components = complex_.connected_components()
    data = {
        "n": complex_.n,
        "k": complex_.k,
        "face_counts": {str(dim): count for dim, count in complex_.face_counts().items()},
        "complete_skeleton": complex_.has_complete_skeleton(),
        "empty": complex_.is_empty(),
        "components": len(components),
        "component_sizes": [len(c) for c in components],
        "min_degrees": {str(dim): complex_.min_degree(dim) for dim in range(complex_.k)},
    }
    if complex_.k >= 1 and not complex_.is_empty():
        data["hodge"] = hodge_dimensions(complex_, complex_.k - 1)
    _emit(data, storage_manager, output_format, "Complex")
    return True


def laplacian_command(storage_manager: StorageManager, path: str, dim: int, which: str = "up",
                      show_spectrum: bool = False, output_format: str = "csv"):
    """
    Print an up/down Laplacian or the adjacency matrix, or its spectrum.

    Args:
        storage_manager: The storage manager instance
        path (str): complex.json file
        dim (int): Cochain dimension i
        which (str): up, down or adjacency (adjacency lives on dimension k-1)
        show_spectrum (bool): Print eigenvalues instead of the matrix
        output_format (str): json, csv or table

    Returns:
        bool: True if successful
    """
    complex_ = storage_manager.load_complex(path)
    if which == "up":
        matrix = up_laplacian(complex_, dim)
    elif which == "down":
        matrix = down_laplacian(complex_, dim)
    elif which == "adjacency":
        if dim != complex_.k - 1:
            raise PreconditionError(f"adjacency is defined on dimension k-1 = {complex_.k - 1}")
        matrix = adjacency(complex_)
    else:
        raise ConfigurationError(f"Unknown operator '{which}'")

    if not show_spectrum:
        if output_format == "csv":
            click.echo(storage_manager.matrix_csv(matrix.values, matrix.index.labels()), nl=False)
        else:
            data = {"labels": matrix.index.labels(), "matrix": matrix.values.tolist()}
            _emit(data, storage_manager, output_format, f"{which} operator, dimension {dim}")
        return True

    values = spectrum(matrix)
    multiplicities = spectrum_multiplicities(values)
    data = {
        "operator": which,
        "dim": dim,
        "size": matrix.dim,
        "eigenvalues": values.tolist(),
        "multiplicities": {f"{value:g}": count for value, count in multiplicities.items()},
    }
    if output_format == "table":
        _display_spectrum(data)
    else:
        click.echo(storage_manager.dumps(data))
    return True


def theta_command(theta_calculator: ThetaCalculator, storage_manager: StorageManager, path: str,
                  level: Optional[int] = None, hat: bool = False, certificate: Optional[str] = None,
                  dump: Optional[str] = None, output_format: str = "json"):
    """
    Solve theta_k, theta_l or hat-theta_l, or evaluate a dual certificate.

    Args:
        theta_calculator: The theta calculator instance
        storage_manager: The storage manager instance
        path (str): complex.json file
        level (int, optional): Hierarchy level, defaults to k
        hat (bool): Solve the strengthened program
        certificate (str, optional): CSV certificate; evaluated instead of solving
        dump (str, optional): Write the program as an SDPA-like text file
        output_format (str): json, csv or table

    Returns:
        bool: True if successful
    """
    complex_ = storage_manager.load_complex(path)
    level = complex_.k if level is None else level

    if certificate is not None:
        instance = build_theta_ell(complex_, level)
        matrix, _ = storage_manager.load_matrix(certificate, expected_labels=instance.index.labels())
        bound = theta_calculator.certificate_bound(complex_, matrix, level)
        data = {"level": level, "certificate": str(certificate), "certificate_bound": bound}
        _emit(data, storage_manager, output_format, "Dual certificate")
        return True

    if dump is not None:
        if hat:
            from src.theta.hierarchy import build_theta_hat_ell

            problem = build_theta_hat_ell(complex_, level)
        else:
            problem = build_theta_ell(complex_, level).to_problem()
        storage_manager.save_sdpa(problem, dump)

    with status_console.status("[bold green]Solving theta program...[/bold green]"):
        result = theta_calculator.evaluate(complex_, level, hat)

    _emit(result.to_dict(), storage_manager, output_format, "Theta")
    return True


def bounds_command(theta_calculator: ThetaCalculator, storage_manager: StorageManager, path: str,
                   max_alpha_vertices: int = 20, output_format: str = "json"):
    """
    Compare theta_k with alpha and the eigenvalue bounds.

    Args:
        theta_calculator: The theta calculator instance
        storage_manager: The storage manager instance
        path (str): complex.json file
        max_alpha_vertices (int): Exact alpha is computed only up to this many vertices
        output_format (str): json, csv or table

    Returns:
        bool: True if successful
    """
    complex_ = storage_manager.load_complex(path)
    data: Dict[str, Any] = {"n": complex_.n, "k": complex_.k}

    data["golubev"] = golubev_bound(complex_)
    try:
        data["ratio"] = ratio_bound(complex_.one_skeleton())
    except PreconditionError:
        data["ratio"] = None
    try:
        data["link"] = link_bound(complex_, theta_calculator)
    except PreconditionError as e:
        logger.info(f"Link bound skipped: {e}")
        data["link"] = None
    data["spectral_lower"] = spectral_lower_bound(complex_)

    with status_console.status("[bold green]Solving theta_k...[/bold green]"):
        result = theta_calculator.evaluate(complex_)
    theta = result.value
    data["theta"] = theta
    data["certificate"] = result.certificate_bound

    data["alpha"] = alpha(complex_)[0] if complex_.n <= max_alpha_vertices else None
    upper = [b for b in (data["golubev"], data["link"], float(complex_.n)) if b is not None]
    data["sandwich"] = {
        "alpha_le_theta": None if data["alpha"] is None else data["alpha"] <= theta + SANDWICH_TOL,
        "theta_le_bounds": all(theta <= b + SANDWICH_TOL for b in upper),
        "lower_le_theta": data["spectral_lower"] <= theta + SANDWICH_TOL,
    }
    _emit(data, storage_manager, output_format, "Bounds")
    return True


def alpha_command(storage_manager: StorageManager, path: str, output_format: str = "json"):
    """Exact independence number with a maximum independent set."""
    complex_ = storage_manager.load_complex(path)
    value, witness = alpha(complex_)
    _emit({"alpha": value, "witness": list(witness)}, storage_manager, output_format, "Independence number")
    return True


def chi_command(storage_manager: StorageManager, path: str, output_format: str = "json"):
    """Weak chromatic number and chromatic number of the 1-skeleton, with colorings."""
    complex_ = storage_manager.load_complex(path)
    value, coloring = chi_weak(complex_)
    skeleton_value, skeleton_coloring = chi_skeleton(complex_)
    data = {
        "chi": value,
        "coloring": list(coloring),
        "chi_skeleton": skeleton_value,
        "skeleton_coloring": list(skeleton_coloring),
    }
    _emit(data, storage_manager, output_format, "Chromatic numbers")
    return True


def chik_command(chromatic_search: ChromaticSearch, storage_manager: StorageManager, path: str,
                 output_format: str = "json"):
    """
    chi_k with its witness homomorphism.

    Returns:
        bool: True if successful
    """
    complex_ = storage_manager.load_complex(path)
    with status_console.status("[bold green]Searching homomorphisms...[/bold green]"):
        result = chromatic_search.chi_k(complex_)
    data = result.to_dict()
    data["component_bound"] = component_chromatic_bound(complex_)
    _emit(data, storage_manager, output_format, "chi_k")
    return True


def gen_command(storage_manager: StorageManager, family: str, n: Optional[int] = None,
                k: Optional[int] = None, m: Optional[int] = None, p: Optional[float] = None,
                seed: Optional[int] = None, complement: bool = False, output: Optional[str] = None):
    """
    Generate a named or random complex as complex.json.

    Args:
        storage_manager: The storage manager instance
        family (str): complete | tripartite | bipartite | cycle | petersen | lm | gnp
        n, k, m, p, seed: Family parameters
        complement (bool): Emit the complementary complex
        output (str, optional): File to write instead of stdout

    Returns:
        bool: True if successful
    """
    if family in ("lm", "gnp"):
        if n is None or p is None:
            raise ConfigurationError(f"Family '{family}' needs --n and --p")
        seed = 0 if seed is None else seed
        if family == "lm":
            complex_ = sample_lm(n, 2 if k is None else k, p, seed)
        else:
            complex_, _ = graph_complex(sample_gnp(n, p, seed))
    else:
        params = {name: value for name, value in (("n", n), ("k", k), ("m", m)) if value is not None}
        complex_ = family_complex(family, **params)

    if complement:
        complex_ = complex_.complement()

    if output is not None:
        storage_manager.save_complex(complex_, output)
    else:
        click.echo(storage_manager.complex_json(complex_))
    return True


def experiment_command(experiment: ScalingExperiment, storage_manager: StorageManager, kind: str,
                       grid: str, seeds: Optional[Sequence[int]] = None, name: Optional[str] = None,
                       output_format: str = "csv"):
    """
    Run a seeded scaling experiment.

    Args:
        experiment: The experiment runner
        storage_manager: The storage manager instance
        kind (str): theta_k or theta_ell
        grid (str): Grid such as "n=8,10;p=0.5;k=2"
        seeds (list, optional): Seeds per cell
        name (str, optional): Also save <name>.csv and <name>_summary.json in the results directory
        output_format (str): csv prints rows, json prints the summary, table shows both

    Returns:
        bool: True if successful
    """
    cells = parse_grid(grid)
    with Progress(
        SpinnerColumn(),
        TextColumn("[bold green]{task.description}[/bold green]"),
        TimeElapsedColumn(),
        console=status_console,
        transient=True,
    ) as progress:
        progress.add_task(f"Running {kind} over {len(cells)} cells...", total=None)
        rows = experiment.run(kind, cells, seeds)
    summary = summarize(rows)

    if name:
        csv_path, summary_path = storage_manager.save_experiment(rows, summary, name)
        logger.info(f"Experiment written to {csv_path} and {summary_path}")

    if output_format == "csv":
        click.echo(storage_manager.experiment_csv(rows), nl=False)
    elif output_format == "json":
        click.echo(storage_manager.dumps(summary))
    else:
        _display_experiment(summary)
    return True


def link_check_command(storage_manager: StorageManager, n: int, k: int, p: float, seeds: Sequence[int],
                       output_format: str = "json"):
    """
    Check the complement localization inequality on seeded Linial-Meshulam samples.

    Returns:
        bool: True if successful
    """
    reports = []
    for seed in seeds:
        report = link_spectra_check(sample_lm(n, k, p, seed), complete_skeleton=True)
        reports.append({"seed": seed, **vars(report)})
        if not report.holds:
            logger.warning(f"Localization inequality failed for seed {seed}")
    data = {"n": n, "k": k, "p": p, "samples": reports, "all_hold": all(r["holds"] for r in reports)}
    _emit(data, storage_manager, output_format, "Link spectra")
    return True


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, dict):
        return ", ".join(f"{k}: {_format_value(v)}" for k, v in value.items())
    if isinstance(value, list):
        return ", ".join(_format_value(v) for v in value[:12]) + (" ..." if len(value) > 12 else "")
    return str(value)


def _display_result(data: Dict[str, Any], title: str):
    """
    Display a result dictionary in a table.

    Args:
        data (dict): Result
        title (str): Table title
    """
    table = Table(title=title)

    table.add_column("Field", style="cyan")
    table.add_column("Value", style="green")

    for key, value in data.items():
        table.add_row(key, _format_value(value))

    console.print(table)


def _display_spectrum(data: Dict[str, Any]):
    table = Table(title=f"Spectrum of the {data['operator']} operator in dimension {data['dim']}")

    table.add_column("Eigenvalue", style="cyan")
    table.add_column("Multiplicity", style="green")

    for value, count in data["multiplicities"].items():
        table.add_row(value, str(count))

    console.print(table)


def _display_experiment(summary: Dict[str, Any]):
    """
    Display per-cell medians of an experiment.

    Args:
        summary (dict): Output of summarize()
    """
    if not summary["cells"]:
        console.print("[bold yellow]No experiment rows.[/bold yellow]")
        return

    table = Table(title="Scaling experiment")

    table.add_column("Kind", style="cyan")
    table.add_column("n", style="blue")
    table.add_column("k/l", style="blue")
    table.add_column("p", style="blue")
    table.add_column("Median value", style="green")
    table.add_column("Median ratio", style="magenta")
    table.add_column("IQR", style="yellow")

    for cell in summary["cells"]:
        table.add_row(
            cell["kind"],
            str(cell["n"]),
            str(cell["k_or_ell"]),
            f"{cell['p']:g}",
            _format_value(cell["value_median"]),
            _format_value(cell["ratio_median"]),
            _format_value(cell["ratio_iqr"]),
        )

    console.print(table)
    if summary["band"] is not None:
        console.print(f"Ratio band (max/min of medians): [bold]{summary['band']:.3f}[/bold]")
