"""
Linial-Meshulam random complexes and Erdos-Renyi graphs.

The decision for the subset of rank r (lexicographic position) uses the r-th
uniform of a Philox stream keyed by the seed, so a face present at p stays
present at every larger p with the same seed.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb

import networkx as nx
import numpy as np

from src.complex.simplicial_complex import Complex
from src.errors import PreconditionError

logger = logging.getLogger(__name__)


def subset_uniforms(seed: int, count: int) -> np.ndarray:
    """
    Uniforms in [0, 1) indexed by subset rank.

    Args:
        seed: Non-negative key of the counter-based generator
        count: Number of ranks

    Returns:
        np.ndarray: u[rank]
    """
    if seed < 0:
        raise PreconditionError(f"seed must be non-negative, got {seed}")
    generator = np.random.Generator(np.random.Philox(key=int(seed)))
    return generator.random(count)


def _check_probability(p: float):
    if not 0.0 <= p <= 1.0:
        raise PreconditionError(f"p must lie in [0, 1], got {p}")


def sample_lm(n: int, k: int, p: float, seed: int) -> Complex:
    """
    Sample X^k(n, p): complete (k-1)-skeleton, each (k+1)-set kept with probability p.

    Args:
        n: Vertex count
        k: Dimension
        p: Face probability
        seed: Generator key

    Returns:
        Complex: The sampled k-faces; at p = 0 no k-face survives
    """
    _check_probability(p)
    if k < 1 or n < k + 1:
        raise PreconditionError(f"Linial-Meshulam model needs n >= k+1 >= 2, got n={n}, k={k}")
    uniforms = subset_uniforms(seed, comb(n, k + 1))
    faces = [face for face, u in zip(combinations(range(n), k + 1), uniforms) if u < p]
    logger.debug(f"X^{k}({n}, {p}) seed {seed}: {len(faces)} faces")
    return Complex(n, k, faces)


def sample_gnp(n: int, p: float, seed: int) -> nx.Graph:
    """G(n, p) on vertices 0..n-1 with the same rank-keyed coupling."""
    _check_probability(p)
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    if n >= 2:
        uniforms = subset_uniforms(seed, comb(n, 2))
        graph.add_edges_from(edge for edge, u in zip(combinations(range(n), 2), uniforms) if u < p)
    return graph


@dataclass
class LmModel:
    """Parameters of one Linial-Meshulam sample and the complex they produce."""

    n: int
    k: int
    p: float
    seed: int

    def sample(self) -> Complex:
        return sample_lm(self.n, self.k, self.p, self.seed)
