"""
Pure k-dimensional simplicial complexes and their combinatorial queries.

Vertices are the integers 0..n-1. Every face is a strictly increasing tuple,
and all orientations are induced by the global order 0 < 1 < ... < n-1.
"""

import logging
from collections import defaultdict
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from src.errors import ComplexError, PreconditionError

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]

EMPTY_FACE: Face = ()


def make_face(vertices: Iterable[int]) -> Face:
    """
    Canonicalize a vertex collection into a face.

    Args:
        vertices: Any iterable of vertex labels

    Returns:
        Face: Strictly increasing tuple of ints

    Raises:
        ComplexError: If a vertex is repeated
    """
    face = tuple(sorted(int(v) for v in vertices))
    if len(set(face)) != len(face):
        raise ComplexError(f"Face {list(vertices)} repeats a vertex")
    return face


def face_label(face: Face) -> str:
    """Render a face as "0-1-2"; the empty face is "{}"."""
    if not face:
        return "{}"
    return "-".join(str(v) for v in face)


def parse_face_label(label: str) -> Face:
    """Inverse of face_label."""
    label = label.strip()
    if label in ("{}", ""):
        return EMPTY_FACE
    return make_face(int(part) for part in label.split("-"))


def incidence(higher: Sequence[int], lower: Sequence[int]) -> int:
    """
    Signed incidence number [H:F] under the global vertex order.

    Args:
        higher: Face H of dimension i
        lower: Face F of dimension i-1

    Returns:
        int: (-1)^j if F = H minus its j-th vertex, 0 if F is not a facet of H

    Raises:
        ComplexError: If the dimensions do not differ by exactly one
    """
    if len(higher) != len(lower) + 1:
        raise ComplexError(
            f"incidence needs dim(H) = dim(F) + 1, got |H|={len(higher)}, |F|={len(lower)}"
        )
    lower_set = set(lower)
    removed = [j for j, v in enumerate(higher) if v not in lower_set]
    if len(removed) != 1:
        return 0
    return -1 if removed[0] % 2 else 1


def epsilon(first: Sequence[int], second: Sequence[int]) -> int:
    """
    The sign epsilon_{F,F'} = [F:F∩F'][F':F∩F'].

    Equal faces give 0; Laplacian builders set diagonals themselves.

    Args:
        first: Face F of dimension i
        second: Face F' of dimension i

    Returns:
        int: -1, 0 or +1

    Raises:
        ComplexError: If the faces have different dimensions
    """
    if len(first) != len(second):
        raise ComplexError(f"epsilon needs equal dimensions, got {len(first)} and {len(second)}")
    common = tuple(v for v in first if v in set(second))
    if len(common) != len(first) - 1:
        return 0
    return incidence(first, common) * incidence(second, common)


class FaceIndex:
    """
    Bijection between a set of d-faces and the integers 0..len-1.

    Faces are ordered lexicographically, which fixes the basis of elementary
    cochains and therefore every matrix row and column order.
    """

    def __init__(self, dim: int, faces: Iterable[Face]):
        self.dim = dim
        self.faces: Tuple[Face, ...] = tuple(sorted(set(faces)))
        for face in self.faces:
            if len(face) != dim + 1:
                raise ComplexError(f"Face {face} does not have dimension {dim}")
        self._lookup: Dict[Face, int] = {face: i for i, face in enumerate(self.faces)}

    @classmethod
    def all_subsets(cls, n: int, dim: int) -> "FaceIndex":
        """Index over every (dim+1)-subset of range(n)."""
        return cls(dim, combinations(range(n), dim + 1))

    def index(self, face: Face) -> int:
        try:
            return self._lookup[face]
        except KeyError:
            raise ComplexError(f"Face {face} is not indexed at dimension {self.dim}") from None

    def get(self, face: Face) -> Optional[int]:
        return self._lookup.get(face)

    def labels(self) -> List[str]:
        return [face_label(face) for face in self.faces]

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self) -> Iterator[Face]:
        return iter(self.faces)

    def __contains__(self, face) -> bool:
        return face in self._lookup

    def __eq__(self, other) -> bool:
        return isinstance(other, FaceIndex) and self.dim == other.dim and self.faces == other.faces

    def __hash__(self) -> int:
        return hash((self.dim, self.faces))

    def __repr__(self) -> str:
        return f"FaceIndex(dim={self.dim}, size={len(self.faces)})"


class Complex:
    """
    A pure k-dimensional simplicial complex on the vertex set range(n).

    Only the k-faces are stored; the lower face sets X_i are the downward
    closure. The empty complex (no k-faces) is pure of every dimension.
    """

    def __init__(self, n: int, k: int, k_faces: Iterable[Iterable[int]] = ()):
        """
        Initialize the complex.

        Args:
            n (int): Vertex count
            k (int): Dimension
            k_faces: The maximal faces, each a (k+1)-subset of range(n)

        Raises:
            ComplexError: On a face of the wrong size or a vertex out of range
        """
        if k < 0:
            raise ComplexError(f"Dimension must be non-negative, got {k}")
        if n < 0:
            raise ComplexError(f"Vertex count must be non-negative, got {n}")
        self.n = int(n)
        self.k = int(k)

        canonical = set()
        for raw in k_faces:
            face = make_face(raw)
            if len(face) != k + 1:
                raise ComplexError(f"Face {list(raw)} has {len(face)} vertices, expected {k + 1}")
            if face and (face[0] < 0 or face[-1] >= n):
                raise ComplexError(f"Face {list(raw)} has a vertex outside 0..{n - 1}")
            canonical.add(face)

        self.k_faces: Tuple[Face, ...] = tuple(sorted(canonical))
        self._face_sets: Dict[int, FrozenSet[Face]] = {}
        self._degrees: Dict[Face, int] = {}
        self._close_downward()

    def _close_downward(self):
        self._face_sets[self.k] = frozenset(self.k_faces)
        for dim in range(self.k - 1, -2, -1):
            lower = set()
            for face in self._face_sets[dim + 1]:
                for facet in combinations(face, dim + 1):
                    lower.add(facet)
                    self._degrees[facet] = self._degrees.get(facet, 0) + 1
            self._face_sets[dim] = frozenset(lower)

    def faces(self, dim: int) -> Tuple[Face, ...]:
        """
        The i-faces X_i in lexicographic order.

        Args:
            dim (int): Dimension i with -1 <= i <= k

        Returns:
            tuple: Sorted faces
        """
        if dim < -1 or dim > self.k:
            return ()
        return tuple(sorted(self._face_sets[dim]))

    def face_index(self, dim: int) -> FaceIndex:
        return FaceIndex(dim, self.faces(dim))

    def has_face(self, face: Sequence[int]) -> bool:
        face = tuple(face)
        dim = len(face) - 1
        return -1 <= dim <= self.k and face in self._face_sets[dim]

    def degree(self, face: Sequence[int]) -> int:
        """
        Number of (i+1)-faces of X containing the i-face F.

        Args:
            face: An i-face of X

        Returns:
            int: deg(F); 0 for top-dimensional faces
        """
        face = make_face(face)
        if not self.has_face(face):
            raise ComplexError(f"{face} is not a face of the complex")
        return self._degrees.get(face, 0)

    def min_degree(self, dim: int) -> int:
        faces = self.faces(dim)
        if not faces:
            return 0
        return min(self._degrees.get(face, 0) for face in faces)

    def is_empty(self) -> bool:
        return not self.k_faces

    def has_complete_skeleton(self) -> bool:
        """True when every k-subset of range(n) is a (k-1)-face."""
        return len(self._face_sets[self.k - 1]) == comb(self.n, self.k) if self.k >= 1 else True

    def is_independent(self, vertices: Iterable[int]) -> bool:
        """
        Check that a vertex set contains no k-face.

        Args:
            vertices: Candidate independent set

        Returns:
            bool: True if no maximal face lies inside the set
        """
        chosen = frozenset(vertices)
        if len(chosen) <= self.k:
            return True
        if comb(len(chosen), self.k + 1) <= len(self.k_faces):
            return all(sub not in self._face_sets[self.k]
                       for sub in combinations(sorted(chosen), self.k + 1))
        return not any(chosen.issuperset(face) for face in self.k_faces)

    def complement(self) -> "Complex":
        """The complementary complex: the (k+1)-subsets absent from X."""
        present = self._face_sets[self.k]
        return Complex(
            self.n,
            self.k,
            (face for face in combinations(range(self.n), self.k + 1) if face not in present),
        )

    def link(self, face: Sequence[int]) -> nx.Graph:
        """
        The link of a (k-2)-face as a graph.

        Args:
            face: K in X_{k-2}

        Returns:
            nx.Graph: Vertices {v : K+v in X_{k-1}}, edges {v,w} with K+v+w in X_k

        Raises:
            PreconditionError: If K is not a (k-2)-face of X
        """
        anchor = make_face(face)
        if len(anchor) != self.k - 1 or not self.has_face(anchor):
            raise PreconditionError(f"{anchor} is not a ({self.k - 2})-face of the complex")

        graph = nx.Graph()
        anchor_set = set(anchor)
        for v in range(self.n):
            if v not in anchor_set and make_face(anchor + (v,)) in self._face_sets[self.k - 1]:
                graph.add_node(v)
        for v, w in combinations(sorted(graph.nodes), 2):
            if make_face(anchor + (v, w)) in self._face_sets[self.k]:
                graph.add_edge(v, w)
        return graph

    def independence_complex(self, up_to: int) -> Dict[int, Tuple[Face, ...]]:
        """
        Independent sets by dimension, Ind_{-1} .. Ind_{up_to}.

        Args:
            up_to (int): Largest dimension to enumerate, at least k-1

        Returns:
            dict: dimension -> sorted tuple of independent (i+1)-subsets
        """
        if up_to < self.k - 1:
            raise PreconditionError(f"independence complex needs up_to >= k-1 = {self.k - 1}")

        levels: Dict[int, Tuple[Face, ...]] = {}
        for dim in range(-1, min(up_to, self.k - 1) + 1):
            levels[dim] = tuple(combinations(range(self.n), dim + 1))

        top = self._face_sets[self.k]
        for dim in range(self.k, up_to + 1):
            previous = levels[dim - 1]
            previous_set = set(previous)
            current = []
            for base in previous:
                start = base[-1] + 1 if base else 0
                for v in range(start, self.n):
                    candidate = base + (v,)
                    if dim == self.k:
                        if candidate in top:
                            continue
                    elif any(candidate[:j] + candidate[j + 1:] not in previous_set
                             for j in range(len(candidate) - 1)):
                        continue
                    current.append(candidate)
            levels[dim] = tuple(current)
            if not current:
                for rest in range(dim + 1, up_to + 1):
                    levels[rest] = ()
                break
        return levels

    def connected_components(self) -> List[Tuple[Face, ...]]:
        """
        Partition of the k-faces into connected components.

        Two k-faces are adjacent when they share a (k-1)-face.

        Returns:
            list: Components as sorted tuples of k-faces, ordered by first face
        """
        graph = nx.Graph()
        graph.add_nodes_from(self.k_faces)
        by_facet: Dict[Face, List[Face]] = defaultdict(list)
        for face in self.k_faces:
            for facet in combinations(face, self.k):
                by_facet[facet].append(face)
        for members in by_facet.values():
            for a, b in zip(members, members[1:]):
                graph.add_edge(a, b)
        components = [tuple(sorted(c)) for c in nx.connected_components(graph)]
        return sorted(components)

    def subcomplex(self, k_faces: Iterable[Face]) -> "Complex":
        """Complex on the same vertex set generated by some of the k-faces."""
        return Complex(self.n, self.k, k_faces)

    def one_skeleton(self) -> nx.Graph:
        """The graph X_1 on all n vertices (isolated vertices included)."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.faces(1))
        return graph

    def face_counts(self) -> Dict[int, int]:
        return {dim: len(self._face_sets[dim]) for dim in range(-1, self.k + 1)}

    def to_dict(self) -> Dict:
        return {"n": self.n, "k": self.k, "k_faces": [list(face) for face in self.k_faces]}

    @classmethod
    def from_dict(cls, data: Dict) -> "Complex":
        try:
            return cls(int(data["n"]), int(data["k"]), data.get("k_faces", []))
        except (KeyError, TypeError, ValueError) as e:
            raise ComplexError(f"Invalid complex description: {e}") from e

    def __eq__(self, other) -> bool:
        return (isinstance(other, Complex) and self.n == other.n and self.k == other.k
                and self.k_faces == other.k_faces)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.k_faces))

    def __repr__(self) -> str:
        return f"Complex(n={self.n}, k={self.k}, k_faces={len(self.k_faces)})"


def complete_complex(n: int, k: int) -> Complex:
    """
    The complete k-complex K_n^k.

    Args:
        n (int): Vertex count, at least k+1
        k (int): Dimension

    Returns:
        Complex: All (k+1)-subsets of range(n) as k-faces
    """
    if k < 0 or n < k + 1:
        raise ComplexError(f"complete complex needs n >= k+1 >= 1, got n={n}, k={k}")
    return Complex(n, k, combinations(range(n), k + 1))


def from_k_faces(n: int, k: int, faces: Iterable[Iterable[int]]) -> Complex:
    """Build a pure complex from its k-faces (duplicates collapse)."""
    return Complex(n, k, faces)


def graph_complex(graph: nx.Graph) -> Tuple[Complex, List]:
    """
    Relabel a graph to 0..m-1 and view it as a 1-complex.

    Args:
        graph: Any simple networkx graph

    Returns:
        tuple: (Complex with k=1, list mapping new label -> original node)
    """
    nodes = sorted(graph.nodes)
    position = {node: i for i, node in enumerate(nodes)}
    edges = []
    for u, v in graph.edges:
        if u == v:
            raise ComplexError(f"Graph has a loop at {u}")
        edges.append((position[u], position[v]))
    return Complex(len(nodes), 1, edges), nodes
