"""
Exact independence and coloring invariants of a pure complex.

All searches are exponential and meant for desk-scale inputs (n up to ~25).
"""

import logging
from itertools import combinations
from typing import Dict, List, Tuple

from src.complex.simplicial_complex import Complex, Face

logger = logging.getLogger(__name__)


def _faces_by_top_vertex(complex_: Complex) -> Dict[int, List[Face]]:
    """k-faces grouped by their largest vertex, stored without it."""
    grouped: Dict[int, List[Face]] = {v: [] for v in range(complex_.n)}
    for face in complex_.k_faces:
        grouped[face[-1]].append(face[:-1])
    return grouped


def alpha(complex_: Complex) -> Tuple[int, Tuple[int, ...]]:
    """
    Independence number by include-first branch and bound.

    Vertices are decided in increasing order; a vertex may join the current
    set unless it completes a k-face, and a branch is cut when even taking
    every remaining vertex cannot beat the incumbent.

    Args:
        complex_: The complex X

    Returns:
        tuple: (alpha(X), a maximum independent set)
    """
    n = complex_.n
    closing = _faces_by_top_vertex(complex_)
    best: List[Tuple[int, ...]] = [()]
    chosen: List[int] = []
    chosen_set = set()

    def branch(v: int):
        if len(chosen) + (n - v) <= len(best[0]):
            return
        if v == n:
            best[0] = tuple(chosen)
            return
        if all(not chosen_set.issuperset(rest) for rest in closing[v]):
            chosen.append(v)
            chosen_set.add(v)
            branch(v + 1)
            chosen.pop()
            chosen_set.discard(v)
        branch(v + 1)

    branch(0)
    logger.debug(f"alpha = {len(best[0])} with witness {best[0]}")
    return len(best[0]), best[0]


def alpha_naive(complex_: Complex) -> Tuple[int, Tuple[int, ...]]:
    """Independence number by scanning subsets from the largest size down."""
    for size in range(complex_.n, -1, -1):
        for subset in combinations(range(complex_.n), size):
            if complex_.is_independent(subset):
                return size, subset
    return 0, ()


def _min_coloring(complex_: Complex) -> Tuple[int, Tuple[int, ...]]:
    """Fewest colors with no monochromatic k-face, by backtracking."""
    n = complex_.n
    if n == 0:
        return 0, ()
    closing = _faces_by_top_vertex(complex_)

    def attempt(colors: int):
        coloring = [-1] * n

        def assign(v: int, used: int) -> bool:
            if v == n:
                return True
            for color in range(min(used + 1, colors)):
                if any(all(coloring[u] == color for u in rest) for rest in closing[v]):
                    continue
                coloring[v] = color
                if assign(v + 1, max(used, color + 1)):
                    return True
            coloring[v] = -1
            return False

        return tuple(coloring) if assign(0, 0) else None

    for colors in range(1, n + 1):
        coloring = attempt(colors)
        if coloring is not None:
            return colors, coloring
    return n, tuple(range(n))


def chi_weak(complex_: Complex) -> Tuple[int, Tuple[int, ...]]:
    """
    Weak chromatic number: fewest colors so that no k-face is monochromatic.

    Returns:
        tuple: (chi(X), coloring as a color per vertex)
    """
    return _min_coloring(complex_)


def chi_skeleton(complex_: Complex) -> Tuple[int, Tuple[int, ...]]:
    """
    Chromatic number of the 1-skeleton X_1 on all n vertices.

    Returns:
        tuple: (chi(X_1), proper vertex coloring)
    """
    if complex_.k == 1:
        return _min_coloring(complex_)
    return _min_coloring(Complex(complex_.n, 1, complex_.faces(1)))
