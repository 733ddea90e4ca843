"""
Eigenvalue bounds on the independence number and explicit dual certificates.
"""

import logging
from itertools import combinations
from typing import Dict, Optional, Tuple

import networkx as nx
import numpy as np

from src.complex.families import complete_tripartite
from src.complex.simplicial_complex import Complex, FaceIndex, graph_complex, make_face
from src.errors import PreconditionError
from src.sdp.admm_solver import dual_eigenvalue_bound
from src.spectral.chain_operators import (
    adjacency,
    down_laplacian,
    embed,
    union_adjacency,
    up_laplacian,
)
from src.spectral.linalg import SymMatrix, lambda_max, lambda_min, spectral_projection
from src.theta.theta_builder import ThetaCalculator, build_theta_k

logger = logging.getLogger(__name__)


def _regular_degree(graph: nx.Graph) -> int:
    degrees = {d for _, d in graph.degree()}
    if len(degrees) > 1:
        raise PreconditionError(f"Graph is not regular (degrees {sorted(degrees)})")
    return degrees.pop() if degrees else 0


def _adjacency_array(graph: nx.Graph) -> np.ndarray:
    return nx.to_numpy_array(graph, nodelist=sorted(graph.nodes), dtype=float)


def ratio_bound(graph: nx.Graph) -> float:
    """
    Hoffman's ratio bound -n lambda_min(A) / (d - lambda_min(A)).

    Args:
        graph: A d-regular graph

    Returns:
        float: Upper bound on alpha(G); n for the edgeless graph

    Raises:
        PreconditionError: If the graph is not regular
    """
    d = _regular_degree(graph)
    n = graph.number_of_nodes()
    if d == 0:
        return float(n)
    smallest = lambda_min(_adjacency_array(graph))
    return -n * smallest / (d - smallest)


def golubev_bound(complex_: Complex) -> float:
    """
    Golubev's eigenvalue bound on alpha(X).

    n(1 - (d_0+1)(d_1+2)...(d_{k-2}+k-1) d_{k-1} / (mu_0 ... mu_{k-1})) with
    d_i the minimal degree of an i-face and mu_i = lambda_max(L_up_i). With a
    complete (k-1)-skeleton this is n(1 - d_{k-1} / mu_{k-1}).

    Returns:
        float: The bound, or n when some minimal degree vanishes
    """
    n, k = complex_.n, complex_.k
    if complex_.is_empty():
        return float(n)
    # a vertex outside X_0 counts as a 0-face of degree 0
    degrees = [complex_.min_degree(i) for i in range(k)]
    if len(complex_.faces(0)) < n or any(d == 0 for d in degrees):
        return float(n)

    if complex_.has_complete_skeleton():
        mu = lambda_max(up_laplacian(complex_, k - 1))
        return n * (1.0 - degrees[k - 1] / mu)

    numerator = float(degrees[k - 1])
    denominator = 1.0
    for i in range(k):
        if i < k - 1:
            numerator *= degrees[i] + i + 1
        denominator *= lambda_max(up_laplacian(complex_, i))
    return n * (1.0 - numerator / denominator)


def hierarchy_link(complex_: Complex, anchor, level: int, ind: Dict[int, tuple]) -> nx.Graph:
    """
    The level-l link of an independent (l-1)-set K.

    Vertices are v with K+v independent; edges join v, w when K+v+w is not
    independent. At l = k with a complete skeleton this is lk_X(K).
    """
    independent = set(ind[level - 1])
    admissible = set(ind[level]) if level in ind else set()
    graph = nx.Graph()
    for v in range(complex_.n):
        if v not in anchor and make_face(anchor + (v,)) in independent:
            graph.add_node(v)
    for v, w in combinations(sorted(graph.nodes), 2):
        if make_face(anchor + (v, w)) not in admissible:
            graph.add_edge(v, w)
    return graph


def link_bound(complex_: Complex, calculator: ThetaCalculator, level: Optional[int] = None) -> float:
    """
    Localization bound l * max over K in Ind_{l-2} of theta(lk(K)).

    Without a level this is k * max over (k-2)-faces of theta(lk_X(K)), which
    needs a complete (k-1)-skeleton; the empty complex counts as complete.

    Args:
        complex_: The complex X
        calculator: Solves the link theta programs
        level: Hierarchy level l, defaults to k

    Returns:
        float: Upper bound on theta_l(X)
    """
    if level is None:
        if not complex_.is_empty() and not complex_.has_complete_skeleton():
            raise PreconditionError("link bound needs a complete (k-1)-skeleton")
        level = complex_.k
    if level < 1:
        raise PreconditionError("link bound needs level >= 1")
    ind = complex_.independence_complex(level)
    best = 0.0
    for anchor in ind[level - 2]:
        link = hierarchy_link(complex_, anchor, level, ind)
        best = max(best, calculator.lovasz_theta(link))
    logger.info(f"Link bound at level {level}: {level} * {best:.6f}")
    return level * best


def juhasz_certificate(graph: nx.Graph, p: float) -> float:
    """
    lambda_max(J - A/p), a dual-feasible upper bound on theta(G).

    Args:
        graph: Any graph
        p: Edge probability used as the scale, 0 < p <= 1
    """
    if not 0 < p <= 1:
        raise PreconditionError(f"p must lie in (0, 1], got {p}")
    a = _adjacency_array(graph)
    n = a.shape[0]
    if n == 0:
        return 0.0
    return lambda_max(np.ones((n, n)) - a / p)


def spectral_lower_bound(complex_: Complex, level: Optional[int] = None) -> float:
    """
    Value of the feasible matrix A_l - lambda_min(A_l) I, normalized to trace one.

    A_l is the signed adjacency of Ind over Ind_{l-1}, so the value is
    l(1 + (l+1)|Ind_l| / (-lambda_min(A_l)|Ind_{l-1}|)), and l when A_l = 0.
    """
    level = complex_.k if level is None else level
    ind = complex_.independence_complex(level)
    if not ind[level - 1]:
        raise PreconditionError(f"level {level} exceeds alpha")
    if not ind[level]:
        return float(level)
    index = FaceIndex(level - 1, ind[level - 1])
    smallest = lambda_min(union_adjacency(index, ind[level]))
    if smallest >= -1e-12:
        return float(level)
    return level * (1.0 + (level + 1) * len(ind[level]) / (-smallest * len(index)))


def hoffman_certificate(graph: nx.Graph) -> float:
    """
    Evaluate the dual certificate T = tA with t = -n / (d - lambda_min(A)).

    On a regular graph lambda_max(J + tA) equals the ratio bound.
    """
    d = _regular_degree(graph)
    complex_, _ = graph_complex(graph)
    instance = build_theta_k(complex_)
    a = _adjacency_array(graph)
    if d == 0:
        return dual_eigenvalue_bound(instance.objective.as_float(), np.zeros_like(a), instance.certificate_check)
    t = -complex_.n / (d - lambda_min(a))
    return dual_eigenvalue_bound(instance.objective.as_float(), t * a, instance.certificate_check)


def golubev_certificate(complex_: Complex) -> float:
    """
    Evaluate T = gamma (L_up_{k-1}(X) - D(X)) with gamma = n / lambda_max(L_up_{k-1}).

    T is zero-padded to every k-subset. T = 0 is used when L_up_{k-1} vanishes.
    """
    instance = build_theta_k(complex_)
    size = instance.size
    if complex_.is_empty():
        certificate = np.zeros((size, size))
    else:
        up = up_laplacian(complex_, complex_.k - 1)
        top = lambda_max(up)
        if top <= 0:
            certificate = np.zeros((size, size))
        else:
            gamma = complex_.n / top
            minus_a = SymMatrix(-adjacency(complex_).values, up.index)
            certificate = gamma * embed(minus_a, instance.index).as_float()
    return dual_eigenvalue_bound(instance.objective.as_float(), certificate, instance.certificate_check)


def tripartite_certificate(m: int) -> Tuple[SymMatrix, float]:
    """
    The optimal dual certificate for K_{m,m,m}^2.

    T = 2m (P_up[3m] + P_up[2m] + P_down[3m]) - L_down_1(X), where P_up[c] and
    P_down[c] project onto the c-eigenspaces of the up and down Laplacians on
    the edges of X; everything is zero-padded to all vertex pairs.

    Returns:
        tuple: (certificate over all pairs, lambda_max(L + T) = 2m)
    """
    complex_ = complete_tripartite(m)
    instance = build_theta_k(complex_)
    up = up_laplacian(complex_, 1)
    down = down_laplacian(complex_, 1)
    local = 2 * m * (
        spectral_projection(up, 3 * m, method="lapack")
        + spectral_projection(up, 2 * m, method="lapack")
        + spectral_projection(down, 3 * m, method="lapack")
    ) - down.as_float()
    certificate = embed(SymMatrix(local, up.index), instance.index)
    bound = dual_eigenvalue_bound(instance.objective.as_float(), certificate.values, instance.certificate_check)
    return certificate, bound
