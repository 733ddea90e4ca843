"""
Coboundary and boundary matrices, combinatorial Laplacians and the adjacency
matrix of a pure complex.

Operators are assembled in exact integer arithmetic over the elementary
cochain basis fixed by FaceIndex; conversion to float happens in linalg.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Tuple

import numpy as np

from src.complex.simplicial_complex import Complex, Face, FaceIndex, epsilon, incidence
from src.errors import ComplexError, DimensionMismatchError
from src.spectral.linalg import SymMatrix, eigenvalues, numerical_rank

logger = logging.getLogger(__name__)


@dataclass
class OperatorMatrix:
    """
    Integer matrix between two cochain spaces.

    For the coboundary delta_i the rows are the (i+1)-faces and the columns the
    i-faces; the transpose is the boundary map in the other direction.
    """

    values: np.ndarray
    row_index: FaceIndex
    col_index: FaceIndex

    def transpose(self) -> "OperatorMatrix":
        return OperatorMatrix(self.values.T.copy(), self.col_index, self.row_index)

    @property
    def T(self) -> "OperatorMatrix":
        return self.transpose()

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape


def incidence_matrix(rows: FaceIndex, cols: FaceIndex) -> np.ndarray:
    """
    Signed incidence numbers [H:F] for H in rows and F in cols.

    Args:
        rows: Index of d-faces
        cols: Index of (d-1)-faces

    Returns:
        np.ndarray: int64 matrix of shape (len(rows), len(cols))
    """
    if rows.dim != cols.dim + 1:
        raise DimensionMismatchError(f"Incidence needs dimensions d and d-1, got {rows.dim} and {cols.dim}")
    matrix = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, face in enumerate(rows):
        for j in range(len(face)):
            c = cols.get(face[:j] + face[j + 1:])
            if c is not None:
                matrix[r, c] = -1 if j % 2 else 1
    return matrix


def _check_dim(complex_: Complex, dim: int, low: int, high: int, name: str):
    if not low <= dim <= high:
        raise ComplexError(f"{name} needs {low} <= i <= {high}, got i={dim}")


def coboundary(complex_: Complex, dim: int) -> OperatorMatrix:
    """
    The coboundary delta_i : C^i -> C^{i+1}.

    Args:
        complex_: The complex X
        dim: i with -1 <= i < k

    Returns:
        OperatorMatrix: Rows X_{i+1}, columns X_i
    """
    _check_dim(complex_, dim, -1, complex_.k - 1, "coboundary")
    rows = complex_.face_index(dim + 1)
    cols = complex_.face_index(dim)
    return OperatorMatrix(incidence_matrix(rows, cols), rows, cols)


def boundary(complex_: Complex, dim: int) -> OperatorMatrix:
    """The boundary map on dim-chains, the transpose of delta_{dim-1}."""
    _check_dim(complex_, dim, 0, complex_.k, "boundary")
    return coboundary(complex_, dim - 1).transpose()


def up_laplacian(complex_: Complex, dim: int) -> SymMatrix:
    """
    L_up_i = boundary_{i+1} delta_i, indexed by X_i.

    At the top dimension there are no (k+1)-faces and the result is zero.
    """
    _check_dim(complex_, dim, -1, complex_.k, "up_laplacian")
    index = complex_.face_index(dim)
    if dim == complex_.k:
        return SymMatrix(np.zeros((len(index), len(index)), dtype=np.int64), index)
    delta = coboundary(complex_, dim).values
    return SymMatrix(delta.T @ delta, index)


def down_laplacian(complex_: Complex, dim: int) -> SymMatrix:
    """
    L_down_i = delta_{i-1} boundary_i, indexed by X_i.

    L_down_{-1} is zero.
    """
    _check_dim(complex_, dim, -1, complex_.k, "down_laplacian")
    index = complex_.face_index(dim)
    if dim == -1:
        return SymMatrix(np.zeros((len(index), len(index)), dtype=np.int64), index)
    delta = coboundary(complex_, dim - 1).values
    return SymMatrix(delta @ delta.T, index)


def laplacian_from_entries(complex_: Complex, dim: int, which: str) -> SymMatrix:
    """
    Build L_up_i or L_down_i directly from the entry formulas.

    down: diagonal i+1, off-diagonal epsilon(F, F').
    up: diagonal deg(F), off-diagonal -epsilon(F, F') when F+F' is an (i+1)-face.
    """
    _check_dim(complex_, dim, -1, complex_.k, "laplacian_from_entries")
    index = complex_.face_index(dim)
    matrix = np.zeros((len(index), len(index)), dtype=np.int64)
    for a, face in enumerate(index):
        if which == "down":
            matrix[a, a] = dim + 1 if dim >= 0 else 0
        elif which == "up":
            matrix[a, a] = complex_.degree(face) if dim < complex_.k else 0
        else:
            raise ComplexError(f"Unknown Laplacian '{which}'")
        for b in range(a + 1, len(index)):
            other = index.faces[b]
            sign = epsilon(face, other)
            if sign == 0:
                continue
            if which == "down":
                value = sign if dim >= 0 else 0
            else:
                union = tuple(sorted(set(face) | set(other)))
                value = -sign if complex_.has_face(union) else 0
            matrix[a, b] = matrix[b, a] = value
    return SymMatrix(matrix, index)


def union_adjacency(index: FaceIndex, unions: Iterable[Face]) -> SymMatrix:
    """
    Signed adjacency over an index of d-faces.

    Entry (F, F') is epsilon(F, F') = -[H:F][H:F'] whenever F+F' = H is one of
    the given (d+1)-sets; all other entries are zero.

    Args:
        index: Row and column index
        unions: Admissible (d+1)-sets

    Returns:
        SymMatrix: Integer matrix with zero diagonal
    """
    matrix = np.zeros((len(index), len(index)), dtype=np.int64)
    for union in unions:
        members = []
        for j in range(len(union)):
            position = index.get(union[:j] + union[j + 1:])
            if position is not None:
                members.append((position, -1 if j % 2 else 1))
        for (a, sa), (b, sb) in combinations(members, 2):
            matrix[a, b] = matrix[b, a] = -sa * sb
    return SymMatrix(matrix, index)


def degrees(complex_: Complex) -> SymMatrix:
    """Diagonal matrix D of deg(F) over X_{k-1}."""
    index = complex_.face_index(complex_.k - 1)
    values = np.diag(np.array([complex_.degree(face) for face in index], dtype=np.int64))
    return SymMatrix(values.reshape(len(index), len(index)), index)


def adjacency(complex_: Complex) -> SymMatrix:
    """
    The adjacency matrix A = D - L_up_{k-1}, indexed by X_{k-1}.

    For a graph this is the usual adjacency matrix.
    """
    up = up_laplacian(complex_, complex_.k - 1)
    return SymMatrix(degrees(complex_).values - up.values, up.index)


def complete_down_laplacian(n: int, k: int) -> SymMatrix:
    """
    L_down_{k-1} of the complete complex, indexed by all k-subsets of range(n).

    Entries are k on the diagonal and epsilon(F, F') elsewhere.

    Args:
        n (int): Vertex count, at least k
        k (int): Subset size, at least 1
    """
    if k < 1 or n < k:
        raise ComplexError(f"complete_down_laplacian needs n >= k >= 1, got n={n}, k={k}")
    return subset_down_laplacian(FaceIndex.all_subsets(n, k - 1))


def subset_down_laplacian(index: FaceIndex) -> SymMatrix:
    """
    Principal submatrix of the complete down-Laplacian on the given d-sets.

    This is L_down_d of any complex containing all of the indexed sets with
    complete lower skeleton, in particular of the independence complex.
    """
    if index.dim < 0:
        return SymMatrix(np.zeros((len(index), len(index)), dtype=np.int64), index)
    lower = set()
    for face in index:
        lower.update(combinations(face, index.dim))
    cols = FaceIndex(index.dim - 1, lower)
    delta = incidence_matrix(index, cols)
    return SymMatrix(delta @ delta.T, index)


def local_blocks(n: int, k: int) -> List[Tuple[Face, np.ndarray, np.ndarray]]:
    """
    Local pieces of the complete L_down_{k-1}.

    For every (k-1)-subset K this gives the positions of the k-subsets
    containing K and the signs [F:K].

    Returns:
        list: (K, positions, signs) triples
    """
    index = FaceIndex.all_subsets(n, k - 1)
    blocks = []
    for anchor in combinations(range(n), k - 1):
        positions, signs = [], []
        anchor_set = set(anchor)
        for v in range(n):
            if v in anchor_set:
                continue
            face = tuple(sorted(anchor + (v,)))
            positions.append(index.index(face))
            signs.append(incidence(face, anchor))
        blocks.append((anchor, np.array(positions, dtype=np.int64), np.array(signs, dtype=np.int64)))
    return blocks


def localized_down_laplacian(n: int, k: int) -> SymMatrix:
    """
    Rebuild the complete L_down_{k-1} as the sum of rho_K J_K rho_K over K.

    Matches complete_down_laplacian(n, k) exactly.
    """
    index = FaceIndex.all_subsets(n, k - 1)
    total = np.zeros((len(index), len(index)), dtype=np.int64)
    for _, positions, signs in local_blocks(n, k):
        total[np.ix_(positions, positions)] += np.outer(signs, signs)
    return SymMatrix(total, index)


def embed(matrix: SymMatrix, target: FaceIndex) -> SymMatrix:
    """
    Zero-pad a face-indexed matrix into a larger index.

    Args:
        matrix: Matrix indexed by a subset of target's faces
        target: Enclosing index of the same dimension

    Returns:
        SymMatrix: Matrix over target with zero rows and columns added
    """
    if matrix.index is None:
        raise DimensionMismatchError("embed needs a face-indexed matrix")
    if matrix.index.dim != target.dim:
        raise DimensionMismatchError(f"Cannot embed dimension {matrix.index.dim} into {target.dim}")
    positions = np.array([target.index(face) for face in matrix.index], dtype=np.int64)
    padded = np.zeros((len(target), len(target)), dtype=matrix.values.dtype)
    if len(positions):
        padded[np.ix_(positions, positions)] = matrix.values
    return SymMatrix(padded, target)


def spectrum(matrix: SymMatrix, method: str = None) -> np.ndarray:
    """Ascending eigenvalues of a face-indexed matrix."""
    return eigenvalues(matrix, method)


def spectrum_multiplicities(values: np.ndarray, decimals: int = 6) -> Dict[float, int]:
    """Group eigenvalues after rounding, e.g. {0.0: 3, 4.0: 3}."""
    rounded = np.round(np.asarray(values, dtype=float), decimals) + 0.0
    unique, counts = np.unique(rounded, return_counts=True)
    return {float(u): int(c) for u, c in zip(unique, counts)}


def coboundary_rank(complex_: Complex, dim: int) -> int:
    """rank delta_i, with delta_k taken as zero."""
    if dim >= complex_.k or dim < -1:
        return 0
    return numerical_rank(coboundary(complex_, dim).values)


def hodge_dimensions(complex_: Complex, dim: int) -> Dict[str, int]:
    """
    Dimensions in C^i = H_i + B^i + B_i.

    Returns:
        dict: harmonic, coboundaries (rank delta_{i-1}), boundaries (rank delta_i), total
    """
    _check_dim(complex_, dim, -1, complex_.k, "hodge_dimensions")
    total = len(complex_.faces(dim))
    coboundaries = coboundary_rank(complex_, dim - 1)
    boundaries = coboundary_rank(complex_, dim)
    return {
        "harmonic": total - coboundaries - boundaries,
        "coboundaries": coboundaries,
        "boundaries": boundaries,
        "total": total,
    }


def betti(complex_: Complex, dim: int) -> int:
    """
    Reduced Betti number: dim ker delta_i - rank delta_{i-1}.

    Args:
        complex_: The complex
        dim: -1 <= i <= k

    Returns:
        int: dim H_i
    """
    return hodge_dimensions(complex_, dim)["harmonic"]
