"""
Seeded scaling experiments for theta numbers of random complexes and graphs.
"""

import logging
from dataclasses import asdict, dataclass
from itertools import combinations, product
from math import comb, log, sqrt
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from src.combinatorics.invariants import alpha
from src.complex.simplicial_complex import Complex, FaceIndex, graph_complex
from src.errors import ConfigurationError, PreconditionError, ThetaComplexError
from src.random_lab.random_models import sample_gnp, sample_lm
from src.spectral.chain_operators import union_adjacency
from src.spectral.linalg import lambda_min
from src.theta.bounds import golubev_certificate, juhasz_certificate, link_bound, spectral_lower_bound
from src.theta.theta_builder import ThetaCalculator

logger = logging.getLogger(__name__)

KINDS = ("theta_k", "theta_ell")

CSV_COLUMNS = [
    "kind", "n", "k_or_ell", "p", "seed", "value", "reference", "ratio", "status",
    "alpha", "dual_bound", "lower_bound", "link_bound", "regime",
]


@dataclass
class ExperimentRow:
    """One sample of a scaling experiment."""

    kind: str
    n: int
    k_or_ell: int
    p: float
    seed: int
    value: Optional[float] = None
    reference: float = 0.0
    ratio: Optional[float] = None
    status: str = "pending"
    alpha: Optional[int] = None
    dual_bound: Optional[float] = None
    lower_bound: Optional[float] = None
    link_bound: Optional[float] = None
    regime: str = "in_regime"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class LinkSpectraReport:
    """Localization inequality lambda_min(A_bar) >= k * min_K lambda_min(lk_bar(K))."""

    complement_lambda_min: float
    link_lambda_min: float
    bound: float
    holds: bool
    links: int = 0


def reference_scale(kind: str, n: int, k_or_ell: int, p: float) -> float:
    """sqrt((n-k) q / p) for theta_k and sqrt(n q^l / p) for theta_ell; 0 when p is 0 or 1."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    q = 1.0 - p
    if kind == "theta_k":
        return sqrt((n - k_or_ell) * q / p)
    return sqrt(n * q ** k_or_ell / p)


def classify_regime(n: int, p: float) -> str:
    """Rows with p within log(n)/n of 0 or 1 are out of regime; p = 1 has no reference."""
    if p >= 1.0:
        return "not_applicable"
    margin = log(n) / n if n > 1 else 1.0
    return "in_regime" if margin <= p <= 1.0 - margin else "out_of_regime"


def parse_grid(text: str) -> List[Tuple[int, float, int]]:
    """
    Parse "n=8,10,12;p=0.5;k=2" into (n, p, k_or_ell) cells.

    The level may be given as k, ell or l.
    """
    values: Dict[str, List[str]] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigurationError(f"Grid entry '{part}' is not of the form key=v1,v2")
        key, raw = part.split("=", 1)
        values[key.strip()] = [v.strip() for v in raw.split(",") if v.strip()]
    level_key = next((key for key in ("k", "ell", "l") if key in values), None)
    if "n" not in values or "p" not in values or level_key is None:
        raise ConfigurationError(f"Grid '{text}' needs n, p and k (or ell)")
    try:
        return [
            (int(n), float(p), int(level))
            for n, p, level in product(values["n"], values["p"], values[level_key])
        ]
    except ValueError as e:
        raise ConfigurationError(f"Invalid grid value: {e}") from e


def link_spectra_check(complex_: Complex, tol: float = 1e-6,
                       complete_skeleton: bool = False) -> LinkSpectraReport:
    """
    Check the localization inequality for the complement adjacency.

    A_bar is indexed by all k-subsets with entries eps(F, F') when F+F' is a
    k-face of the complement, and lk_bar(K) joins v, w when K+v+w is one.

    Args:
        complex_: The complex X
        tol: Slack allowed in the comparison
        complete_skeleton: Treat every (k-1)-subset as a face, as for
            Linial-Meshulam samples whose k-faces alone do not cover the skeleton

    Raises:
        PreconditionError: Without a complete (k-1)-skeleton
    """
    if not complete_skeleton and not complex_.is_empty() and not complex_.has_complete_skeleton():
        raise PreconditionError("link spectra check needs a complete (k-1)-skeleton")
    n, k = complex_.n, complex_.k
    complement = complex_.complement()
    index = FaceIndex.all_subsets(n, k - 1)
    overall = lambda_min(union_adjacency(index, complement.k_faces))

    present = set(complement.k_faces)
    worst = 0.0
    count = 0
    for anchor in combinations(range(n), k - 1):
        others = [v for v in range(n) if v not in anchor]
        link = nx.Graph()
        link.add_nodes_from(others)
        link.add_edges_from(
            (v, w) for v, w in combinations(others, 2) if tuple(sorted(anchor + (v, w))) in present
        )
        a = nx.to_numpy_array(link, nodelist=others, dtype=float)
        worst = min(worst, lambda_min(a, "lapack"))
        count += 1

    bound = k * worst
    return LinkSpectraReport(overall, worst, bound, overall >= bound - tol, count)


class ScalingExperiment:
    """Runs seeded samples over a grid and aggregates ratio statistics."""

    def __init__(self, config: Dict[str, Any], theta_calculator: ThetaCalculator):
        """
        Initialize the experiment runner.

        Args:
            config (Dict[str, Any]): The `experiments` configuration section
            theta_calculator (ThetaCalculator): Solves the sampled programs
        """
        self.theta_calculator = theta_calculator
        self.seeds = [int(s) for s in config.get("seeds", [1, 2, 3, 4, 5])]
        self.n_jobs = int(config.get("n_jobs", 1))
        self.max_block = int(config.get("max_block", 500))
        self.max_alpha_vertices = int(config.get("max_alpha_vertices", 25))
        self.with_link_bound = bool(config.get("link_bound", True))

    def run_row(self, kind: str, n: int, k_or_ell: int, p: float, seed: int) -> ExperimentRow:
        """
        Sample one complex or graph and measure it.

        Failures are recorded in the status column instead of being raised.
        """
        row = ExperimentRow(kind, n, k_or_ell, p, seed,
                            reference=reference_scale(kind, n, k_or_ell, p),
                            regime=classify_regime(n, p))
        if comb(n, k_or_ell) > self.max_block:
            row.status = "skipped_too_large"
            return row

        try:
            if kind == "theta_k":
                complex_ = sample_lm(n, k_or_ell, p, seed)
                level = None
                report = self.theta_calculator.theta_k(complex_)
                row.dual_bound = golubev_certificate(complex_)
            else:
                graph = sample_gnp(n, p, seed)
                complex_, _ = graph_complex(graph)
                level = k_or_ell
                report = self.theta_calculator.theta_ell(complex_, level)
                row.dual_bound = juhasz_certificate(graph, p) if p > 0 else None

            row.value = report.value
            row.status = report.status
            row.lower_bound = spectral_lower_bound(complex_, level)
            if n <= self.max_alpha_vertices:
                row.alpha = alpha(complex_)[0]
            if self.with_link_bound:
                # Linial-Meshulam samples carry the full (k-1)-skeleton by construction
                row.link_bound = link_bound(complex_, self.theta_calculator, k_or_ell)
            if row.reference > 0:
                row.ratio = row.value / row.reference
        except PreconditionError as e:
            row.status = f"precondition: {e}"
        except ThetaComplexError as e:
            row.status = f"error: {type(e).__name__}: {e}"

        if row.regime == "out_of_regime":
            logger.warning(f"{kind} n={n} p={p} seed={seed} lies outside the dense regime")
        return row

    def run(self, kind: str, grid: Sequence[Tuple[int, float, int]],
            seeds: Optional[Sequence[int]] = None, progress: bool = False) -> List[ExperimentRow]:
        """
        Run every (cell, seed) pair.

        Args:
            kind: theta_k or theta_ell
            grid: (n, p, k_or_ell) cells
            seeds: Seeds per cell; defaults to the configured seeds
            progress: Show a tqdm progress bar

        Returns:
            list: Rows in grid-major, seed-minor order
        """
        if kind not in KINDS:
            raise ConfigurationError(f"Unknown experiment kind '{kind}'")
        seeds = list(self.seeds if seeds is None else seeds)
        tasks = [(n, k_or_ell, p, seed) for n, p, k_or_ell in grid for seed in seeds]
        logger.info(f"Running {kind} experiment: {len(grid)} cells x {len(seeds)} seeds")
        iterator = tqdm(tasks, desc=kind, disable=not progress)
        rows = Parallel(n_jobs=self.n_jobs)(
            delayed(self.run_row)(kind, n, k_or_ell, p, seed) for n, k_or_ell, p, seed in iterator
        )
        logger.info(f"Experiment finished: {sum(r.ratio is not None for r in rows)} rows with ratios")
        return rows


def summarize(rows: Sequence[ExperimentRow]) -> Dict[str, Any]:
    """
    Median and interquartile range of ratio and value per (kind, n, k_or_ell, p) cell.

    Returns:
        dict: {"cells": [...], "band": max/min of the cell medians (None if undefined)}
    """
    cells: Dict[Tuple, List[ExperimentRow]] = {}
    for row in rows:
        cells.setdefault((row.kind, row.n, row.k_or_ell, row.p), []).append(row)

    summary = []
    for (kind, n, k_or_ell, p), members in sorted(cells.items()):
        ratios = np.array([r.ratio for r in members if r.ratio is not None], dtype=float)
        values = np.array([r.value for r in members if r.value is not None], dtype=float)
        entry = {"kind": kind, "n": n, "k_or_ell": k_or_ell, "p": p, "samples": len(members)}
        for name, data in (("ratio", ratios), ("value", values)):
            if data.size:
                q1, median, q3 = np.percentile(data, [25, 50, 75])
                entry[f"{name}_median"] = float(median)
                entry[f"{name}_iqr"] = float(q3 - q1)
            else:
                entry[f"{name}_median"] = None
                entry[f"{name}_iqr"] = None
        summary.append(entry)

    medians = [c["ratio_median"] for c in summary if c["ratio_median"]]
    band = max(medians) / min(medians) if medians else None
    return {"cells": summary, "band": band}
