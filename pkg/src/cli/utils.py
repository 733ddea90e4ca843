"""
CLI utilities for Theta Complex.
"""

import copy
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from rich.console import Console

from src.errors import ConfigurationError

# Initialize console for rich output
console = Console(stderr=True)

BASE_PATH = Path(__file__).parent.parent.parent

DEFAULT_CONFIG: Dict[str, Any] = {
    "solver": {
        "tol_feas": 1e-7,
        "tol_psd": 1e-7,
        "max_iter": 200000,
        "rho": 1.0,
        "rho_adapt_ratio": 10.0,
        "rho_adapt_factor": 2.0,
        "divergence_threshold": 1e8,
        "check_every": 10,
        "eig_method": "lapack",
    },
    "linalg": {
        "jacobi_tol": 1e-12,
        "jacobi_max_sweeps": 100,
        "rank_tol": 1e-8,
        "symmetry_tol": 1e-12,
        "eig_method": "jacobi",
    },
    "theta": {
        "bracket_with_certificate": True,
        "require_convergence": True,
    },
    "combinatorics": {
        "max_nodes": 2000000,
        "max_alpha_vertices": 25,
    },
    "experiments": {
        "seeds": [1, 2, 3, 4, 5],
        "n_jobs": 1,
        "max_block": 500,
        "max_alpha_vertices": 25,
        "link_bound": True,
    },
    "storage": {
        "results_dir": "results",
        "float_digits": 12,
    },
    "output": {
        "format": "json",
        "verbosity": "info",
    },
}

OUTPUT_FORMATS = ("json", "csv", "table")


def config_path() -> Path:
    """Path of the YAML config; THETA_COMPLEX_CONFIG overrides the repository default."""
    override = os.environ.get("THETA_COMPLEX_CONFIG")
    return Path(override) if override else BASE_PATH / "config.yaml"


def _merge(defaults: Dict[str, Any], loaded: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(defaults)
    for section, values in loaded.items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section].update(values)
        else:
            merged[section] = values
    return merged


def load_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load configuration from config.yaml.

    Missing sections and keys fall back to DEFAULT_CONFIG.

    Args:
        path (Path, optional): Explicit config file

    Returns:
        dict: Configuration dictionary
    """
    path = Path(path) if path is not None else config_path()

    if not path.exists():
        console.print(f"[bold yellow]Warning:[/bold yellow] {path.name} not found, using default configuration.")
        return copy.deepcopy(DEFAULT_CONFIG)

    try:
        with open(path, "r") as f:
            config = yaml.safe_load(f)

        if config is None:
            console.print("[bold yellow]Warning:[/bold yellow] Empty config file, using default configuration.")
            return copy.deepcopy(DEFAULT_CONFIG)
        if not isinstance(config, dict):
            raise ConfigurationError(f"{path} must contain a mapping of sections")

        return _merge(DEFAULT_CONFIG, config)
    except yaml.YAMLError as e:
        console.print(f"[bold red]Error loading configuration:[/bold red] {str(e)}")
        return copy.deepcopy(DEFAULT_CONFIG)


def save_config(config: Dict[str, Any], path: Optional[Path] = None) -> bool:
    """
    Save configuration as YAML.

    Args:
        config (dict): Configuration dictionary
        path (Path, optional): Target file, defaults to config_path()

    Returns:
        bool: True if successful, False otherwise
    """
    path = Path(path) if path is not None else config_path()

    try:
        with open(path, "w") as f:
            yaml.dump(config, f, default_flow_style=False, sort_keys=False)
        return True
    except OSError as e:
        console.print(f"[bold red]Error saving configuration:[/bold red] {str(e)}")
        return False


def apply_overrides(config: Dict[str, Any], tol_feas=None, tol_psd=None, max_iter=None, rho=None,
                    output_format=None, seed=None) -> Dict[str, Any]:
    """
    Apply command-line overrides to a copy of the configuration.

    Returns:
        dict: The updated configuration

    Raises:
        ConfigurationError: On non-positive tolerances or an unknown format
    """
    config = copy.deepcopy(config)
    solver = config.setdefault("solver", {})
    for name, value in (("tol_feas", tol_feas), ("tol_psd", tol_psd), ("rho", rho)):
        if value is not None:
            if value <= 0:
                raise ConfigurationError(f"--{name.replace('_', '-')} must be positive, got {value}")
            solver[name] = float(value)
    if max_iter is not None:
        if max_iter < 1:
            raise ConfigurationError(f"--max-iter must be at least 1, got {max_iter}")
        solver["max_iter"] = int(max_iter)
    if output_format is not None:
        if output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(f"Unknown output format '{output_format}'")
        config.setdefault("output", {})["format"] = output_format
    if seed is not None:
        config.setdefault("experiments", {})["seeds"] = [int(seed)]
    return config


def setup_logging(verbosity: Optional[str] = None):
    """
    Set up logging configuration.

    Log records go to logs/theta_complex.log and to stderr; stdout is left to
    command output.

    Args:
        verbosity (str, optional): Level name, defaults to INFO
    """
    log_dir = BASE_PATH / "logs"
    log_dir.mkdir(exist_ok=True)

    level = getattr(logging, str(verbosity or "info").upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(log_dir / "theta_complex.log"),
            logging.StreamHandler(sys.stderr)
        ]
    )
    logging.getLogger().setLevel(level)


def check_environment():
    """
    Load a .env file if present and validate the config override.

    THETA_COMPLEX_CONFIG may be set there to point at another config file.
    """
    env_path = BASE_PATH / ".env"
    if env_path.exists():
        load_dotenv(env_path)

    override = os.environ.get("THETA_COMPLEX_CONFIG")
    if override and not Path(override).exists():
        raise ConfigurationError(f"THETA_COMPLEX_CONFIG points to a missing file: {override}")


def get_components(config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Initialize and return all components needed for the application.

    Args:
        config (dict, optional): Configuration, loaded with load_config() when omitted

    Returns:
        dict: Dictionary containing all initialized components
    """
    # Import components here to avoid circular imports
    from src.combinatorics.homomorphism import ChromaticSearch
    from src.random_lab.experiments import ScalingExperiment
    from src.sdp.admm_solver import AdmmSolver
    from src.spectral.linalg import configure_tolerances
    from src.storage.storage_manager import StorageManager
    from src.theta.theta_builder import ThetaCalculator

    if config is None:
        config = load_config()

    configure_tolerances(config.get("linalg", {}))

    solver = AdmmSolver(config.get("solver", {}))
    theta_calculator = ThetaCalculator(config.get("theta", {}), solver)
    chromatic_search = ChromaticSearch(config.get("combinatorics", {}))
    experiment = ScalingExperiment(config.get("experiments", {}), theta_calculator)
    storage_manager = StorageManager(config.get("storage", {}))

    return {
        "config": config,
        "solver": solver,
        "theta_calculator": theta_calculator,
        "chromatic_search": chromatic_search,
        "experiment": experiment,
        "storage_manager": storage_manager,
    }
