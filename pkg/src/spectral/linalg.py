"""
Dense symmetric linear algebra: eigendecomposition, PSD projection and SPD solves.

The cyclic Jacobi routine is the reference eigensolver. LAPACK (via numpy) is
available through method="lapack" and is what the SDP solver uses in its inner
loop by default.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy import linalg as sla

from src.complex.simplicial_complex import FaceIndex
from src.errors import (
    ConfigurationError,
    DimensionMismatchError,
    LinAlgError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)

logger = logging.getLogger(__name__)


@dataclass
class Tolerances:
    """Numerical tolerances shared by the spectral layer."""

    jacobi_tol: float = 1e-12
    jacobi_max_sweeps: int = 100
    rank_tol: float = 1e-8
    symmetry_tol: float = 1e-12
    eig_method: str = "jacobi"


TOLERANCES = Tolerances()


def configure_tolerances(config: Dict[str, Any]) -> Tolerances:
    """
    Update the shared tolerances from the `linalg` config section.

    Args:
        config: Mapping with any of the Tolerances field names

    Returns:
        Tolerances: The updated shared instance
    """
    for name in ("jacobi_tol", "rank_tol", "symmetry_tol"):
        if name in config:
            value = float(config[name])
            if value <= 0:
                raise ConfigurationError(f"linalg.{name} must be positive, got {value}")
            setattr(TOLERANCES, name, value)
    if "jacobi_max_sweeps" in config:
        TOLERANCES.jacobi_max_sweeps = int(config["jacobi_max_sweeps"])
    if "eig_method" in config:
        if config["eig_method"] not in ("jacobi", "lapack"):
            raise ConfigurationError(f"Unknown eig_method '{config['eig_method']}'")
        TOLERANCES.eig_method = config["eig_method"]
    return TOLERANCES


@dataclass
class SymMatrix:
    """
    Dense real symmetric matrix whose axes are labelled by one FaceIndex.

    Integer matrices keep their integer dtype so that operator identities can
    be checked exactly.
    """

    values: np.ndarray
    index: Optional[FaceIndex] = field(default=None, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise DimensionMismatchError(f"SymMatrix must be square, got shape {self.values.shape}")
        if self.index is not None and len(self.index) != self.values.shape[0]:
            raise DimensionMismatchError(
                f"Index of size {len(self.index)} does not match matrix of size {self.values.shape[0]}"
            )
        if np.issubdtype(self.values.dtype, np.integer):
            if not np.array_equal(self.values, self.values.T):
                raise NotSymmetricError("Integer matrix is not symmetric")
        else:
            self.values = check_symmetric(self.values)

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def as_float(self) -> np.ndarray:
        return self.values.astype(float)

    def __len__(self) -> int:
        return self.dim


@dataclass
class EigDecomposition:
    """Ascending eigenvalues with orthonormal eigenvectors in the columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T


MatrixLike = Union[SymMatrix, np.ndarray]


def _as_array(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, SymMatrix):
        return matrix.as_float()
    return np.asarray(matrix, dtype=float)


def check_symmetric(matrix: MatrixLike, tol: Optional[float] = None) -> np.ndarray:
    """
    Validate symmetry and return the exactly symmetrized float array.

    Args:
        matrix: Square array
        tol: Allowed max |A - A^T|, relative to max(1, max |A|)

    Raises:
        DimensionMismatchError: If the input is not square
        NotSymmetricError: If the asymmetry exceeds the tolerance
    """
    a = _as_array(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {a.shape}")
    if a.size == 0:
        return a
    tol = TOLERANCES.symmetry_tol if tol is None else tol
    asymmetry = float(np.max(np.abs(a - a.T)))
    scale = max(1.0, float(np.max(np.abs(a))))
    if asymmetry > tol * scale:
        raise NotSymmetricError(f"Matrix asymmetry {asymmetry:.3e} exceeds {tol:.1e}")
    return (a + a.T) / 2.0


def jacobi_eig(matrix: MatrixLike, tol: Optional[float] = None,
               max_sweeps: Optional[int] = None) -> EigDecomposition:
    """
    Full symmetric eigendecomposition by cyclic Jacobi rotations.

    Sweeps run over all (p, q) pairs in row order until the off-diagonal
    Frobenius norm is at most tol * ||A||_F.

    Args:
        matrix: Symmetric matrix
        tol: Relative off-diagonal stopping threshold
        max_sweeps: Sweep limit

    Returns:
        EigDecomposition: Ascending eigenvalues and eigenvectors

    Raises:
        LinAlgError: If the sweep limit is reached first
    """
    a = check_symmetric(matrix).copy()
    tol = TOLERANCES.jacobi_tol if tol is None else tol
    max_sweeps = TOLERANCES.jacobi_max_sweeps if max_sweeps is None else max_sweeps
    n = a.shape[0]
    v = np.eye(n)

    scale = float(np.linalg.norm(a))
    if n < 2 or scale == 0.0:
        return EigDecomposition(np.diag(a).copy(), v)

    eps = np.finfo(float).eps
    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol * scale:
            break
        if sweep == max_sweeps:
            raise LinAlgError(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # Below rounding level of the diagonal: drop instead of rotating.
                if abs(apq) <= eps * (abs(a[p, p]) + abs(a[q, q])):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

        logger.debug(f"Jacobi sweep {sweep + 1}: off-norm {off:.3e}")

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return EigDecomposition(eigenvalues[order], v[:, order])


def sym_eig(matrix: MatrixLike, method: Optional[str] = None) -> EigDecomposition:
    """
    Symmetric eigendecomposition.

    Args:
        matrix: Symmetric matrix (SymMatrix or array)
        method: "jacobi" or "lapack"; defaults to the configured method

    Returns:
        EigDecomposition: Ascending eigenvalues and orthonormal eigenvectors
    """
    method = method or TOLERANCES.eig_method
    if method == "jacobi":
        return jacobi_eig(matrix)
    if method == "lapack":
        a = check_symmetric(matrix)
        if a.shape[0] == 0:
            return EigDecomposition(np.zeros(0), np.zeros((0, 0)))
        eigenvalues, eigenvectors = np.linalg.eigh(a)
        return EigDecomposition(eigenvalues, eigenvectors)
    raise ConfigurationError(f"Unknown eigen method '{method}'")


def eigenvalues(matrix: MatrixLike, method: Optional[str] = None) -> np.ndarray:
    return sym_eig(matrix, method).eigenvalues


def psd_project(matrix: MatrixLike, method: Optional[str] = None) -> np.ndarray:
    """
    Nearest positive semidefinite matrix in Frobenius norm.

    Args:
        matrix: Symmetric matrix
        method: Eigen method, see sym_eig

    Returns:
        np.ndarray: V max(Lambda, 0) V^T
    """
    decomposition = sym_eig(matrix, method)
    clipped = np.clip(decomposition.eigenvalues, 0.0, None)
    vectors = decomposition.eigenvectors
    projected = (vectors * clipped) @ vectors.T
    return (projected + projected.T) / 2.0


def spectral_projection(matrix: MatrixLike, value: float, tol: float = 1e-6,
                        method: Optional[str] = None) -> np.ndarray:
    """
    Orthogonal projection onto the eigenspace of one eigenvalue.

    Args:
        matrix: Symmetric matrix
        value: Target eigenvalue
        tol: Eigenvalues within tol of value are grouped together

    Returns:
        np.ndarray: Projection matrix (zero if value is not an eigenvalue)
    """
    decomposition = sym_eig(matrix, method)
    chosen = decomposition.eigenvectors[:, np.abs(decomposition.eigenvalues - value) <= tol]
    return chosen @ chosen.T


def lambda_max(matrix: MatrixLike, method: Optional[str] = None) -> float:
    values = eigenvalues(matrix, method)
    if values.size == 0:
        raise DimensionMismatchError("lambda_max of an empty matrix")
    return float(values[-1])


def lambda_min(matrix: MatrixLike, method: Optional[str] = None) -> float:
    values = eigenvalues(matrix, method)
    if values.size == 0:
        raise DimensionMismatchError("lambda_min of an empty matrix")
    return float(values[0])


def solve_spd(matrix: MatrixLike, rhs: np.ndarray) -> np.ndarray:
    """
    Solve M x = b for symmetric positive definite M by Cholesky.

    Args:
        matrix: SPD matrix
        rhs: Right-hand side vector or matrix

    Returns:
        np.ndarray: Solution x

    Raises:
        DimensionMismatchError: If b does not match M
        NotPositiveDefiniteError: If the Cholesky factorization fails
    """
    m = check_symmetric(matrix)
    b = np.asarray(rhs, dtype=float)
    if b.shape[0] != m.shape[0]:
        raise DimensionMismatchError(f"Right-hand side of length {b.shape[0]} for a {m.shape[0]}x{m.shape[0]} system")
    try:
        factor = sla.cho_factor(m, lower=True, check_finite=True)
    except (np.linalg.LinAlgError, sla.LinAlgError) as e:
        raise NotPositiveDefiniteError(f"Matrix is not positive definite: {e}") from e
    return sla.cho_solve(factor, b)


def numerical_rank(matrix: np.ndarray, tol: Optional[float] = None) -> int:
    """
    Rank by eigenvalue thresholding of the Gram matrix.

    Singular values below tol * dim * sigma_max count as zero.

    Args:
        matrix: Any real 2-D array
        tol: Relative threshold

    Returns:
        int: Numerical rank
    """
    a = np.asarray(matrix, dtype=float)
    if a.size == 0:
        return 0
    tol = TOLERANCES.rank_tol if tol is None else tol
    gram = a.T @ a if a.shape[0] >= a.shape[1] else a @ a.T
    singular = np.sqrt(np.clip(eigenvalues(gram, "lapack"), 0.0, None))
    top = float(singular.max())
    if top == 0.0:
        return 0
    return int(np.sum(singular > tol * gram.shape[0] * top))
