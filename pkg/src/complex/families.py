"""
Named complexes and graphs used as fixtures and by the `gen` command.
"""

from itertools import combinations, product
from typing import Iterable, List, Sequence

import networkx as nx

from src.complex.simplicial_complex import Complex, complete_complex, graph_complex
from src.errors import ComplexError


def tripartite_parts(m: int) -> List[range]:
    """Vertex parts A, B, C of the complete tripartite complex on 3m vertices."""
    return [range(0, m), range(m, 2 * m), range(2 * m, 3 * m)]


def complete_tripartite(m: int) -> Complex:
    """
    The complete tripartite 2-complex K_{m,m,m}^2.

    Its triangles take exactly one vertex from each part.

    Args:
        m (int): Part size, at least 1

    Returns:
        Complex: n = 3m, k = 2, m^3 triangles
    """
    if m < 1:
        raise ComplexError(f"Part size must be positive, got {m}")
    return Complex(3 * m, 2, product(*tripartite_parts(m)))


def complete_bipartite(m: int) -> Complex:
    """
    The complete bipartite 2-complex K_{m,m}^2.

    Its triangles are the vertex triples meeting both parts. The complement is
    the disjoint union of two copies of K_m^2.

    Args:
        m (int): Part size, at least 1

    Returns:
        Complex: n = 2m, k = 2
    """
    if m < 1:
        raise ComplexError(f"Part size must be positive, got {m}")
    n = 2 * m
    faces = [t for t in combinations(range(n), 3) if t[0] < m <= t[2]]
    return Complex(n, 2, faces)


def cycle_graph(n: int) -> nx.Graph:
    if n < 3:
        raise ComplexError(f"A cycle needs at least 3 vertices, got {n}")
    return nx.cycle_graph(n)


def petersen_graph() -> nx.Graph:
    return nx.petersen_graph()


def cycle_complex(n: int) -> Complex:
    """C_n as a 1-complex."""
    return graph_complex(cycle_graph(n))[0]


def complex_graph(complex_: Complex) -> nx.Graph:
    """
    The graph of a 1-complex on all n vertices.

    Raises:
        ComplexError: If the complex is not 1-dimensional
    """
    if complex_.k != 1:
        raise ComplexError(f"Only 1-complexes are graphs, got k={complex_.k}")
    graph = nx.Graph()
    graph.add_nodes_from(range(complex_.n))
    graph.add_edges_from(complex_.k_faces)
    return graph


def disjoint_union(complexes: Sequence[Complex]) -> Complex:
    """
    Place complexes of one dimension side by side, shifting vertex labels.

    Args:
        complexes: Complexes sharing the same k

    Returns:
        Complex: Union on sum(n) vertices
    """
    if not complexes:
        raise ComplexError("disjoint_union needs at least one complex")
    k = complexes[0].k
    offset = 0
    faces: List[Iterable[int]] = []
    for part in complexes:
        if part.k != k:
            raise ComplexError(f"Cannot join complexes of dimension {k} and {part.k}")
        faces.extend(tuple(v + offset for v in face) for face in part.k_faces)
        offset += part.n
    return Complex(offset, k, faces)


def family_complex(name: str, **params) -> Complex:
    """
    Build a deterministic named family by name.

    Args:
        name: complete | tripartite | bipartite | cycle | petersen
        **params: n, k or m as the family requires

    Returns:
        Complex: The requested fixture
    """
    try:
        if name == "complete":
            return complete_complex(int(params["n"]), int(params["k"]))
        if name == "tripartite":
            return complete_tripartite(int(params["m"]))
        if name == "bipartite":
            return complete_bipartite(int(params["m"]))
        if name == "cycle":
            return cycle_complex(int(params["n"]))
        if name == "petersen":
            return graph_complex(petersen_graph())[0]
    except KeyError as e:
        raise ComplexError(f"Family '{name}' needs parameter {e}") from e
    raise ComplexError(f"Unknown family '{name}'")
