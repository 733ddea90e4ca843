"""
ADMM solver for equality-constrained semidefinite programs.

Problems are stated in primal form

    maximize   sum_b <C_b, X_b>
    subject to sum_b <A_ib, X_b> = c_i,   X_b PSD for every block b,

and solved by alternating an affine projection (one pre-factorized normal
system), a per-block PSD projection and a scaled dual update. All iterates
live in svec coordinates, where off-diagonal entries carry a factor sqrt(2)
so that the trace inner product becomes the dot product.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla
from scipy import sparse
from scipy.sparse import linalg as spla

from src.complex.simplicial_complex import FaceIndex
from src.errors import (
    ConfigurationError,
    DimensionMismatchError,
    InfeasibleCertificateError,
    NotPositiveDefiniteError,
    SolverError,
)
from src.spectral.linalg import check_symmetric, lambda_max, psd_project, sym_eig

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)

CONVERGED = "converged"
MAX_ITER = "max_iter"
INFEASIBLE = "infeasible_suspected"

# Normal systems up to this many rows are factored densely by Cholesky.
DENSE_NORMAL_LIMIT = 1500


@dataclass
class Constraint:
    """
    One linear equality sum_b <A_b, X_b> = rhs.

    Each entry (block, i, j, value) sets A_b[i, j] = A_b[j, i] = value, so an
    off-diagonal entry contributes 2 * value * X[i, j] to the inner product.
    Repeated positions add up.
    """

    entries: List[Tuple[int, int, int, float]]
    rhs: float
    label: str = ""


@dataclass
class SdpProblem:
    """
    A block-diagonal SDP in primal maximization form.

    Attributes:
        block_sizes: Dimension of each PSD block
        objective: Dense symmetric objective matrix per block
        constraints: Linear equality constraints
        block_labels: Optional face index per block for reporting
        name: Free-form description
    """

    block_sizes: List[int]
    objective: List[np.ndarray]
    constraints: List[Constraint]
    block_labels: List[Optional[FaceIndex]] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        if len(self.objective) != len(self.block_sizes):
            raise DimensionMismatchError(
                f"{len(self.objective)} objective blocks for {len(self.block_sizes)} PSD blocks"
            )
        self.objective = [check_symmetric(c) for c in self.objective]
        for b, (size, c) in enumerate(zip(self.block_sizes, self.objective)):
            if c.shape != (size, size):
                raise DimensionMismatchError(f"Objective block {b} has shape {c.shape}, expected {size}x{size}")
        if not self.block_labels:
            self.block_labels = [None] * len(self.block_sizes)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def scaled(self, factor: float) -> "SdpProblem":
        """Same feasible set with the objective multiplied by factor."""
        return SdpProblem(
            list(self.block_sizes),
            [factor * c for c in self.objective],
            list(self.constraints),
            list(self.block_labels),
            self.name,
        )


@dataclass
class SolveReport:
    """Outcome of one ADMM solve; the solution is the cone-feasible iterate."""

    value: float
    blocks: List[np.ndarray]
    primal_residual: float
    dual_residual: float
    min_eigenvalue: float
    iterations: int
    status: str
    rho: float = 1.0
    dual_value: Optional[float] = None
    gap: Optional[float] = None
    psd_violation: float = 0.0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    @property
    def solution(self) -> np.ndarray:
        return self.blocks[0]

    def to_dict(self, include_solution: bool = False) -> Dict[str, Any]:
        data = {
            "value": self.value,
            "status": self.status,
            "iterations": self.iterations,
            "residuals": {
                "primal": self.primal_residual,
                "dual": self.dual_residual,
                "min_eigenvalue": self.min_eigenvalue,
                "psd": self.psd_violation,
            },
            "dual_value": self.dual_value,
            "gap": self.gap,
        }
        if include_solution:
            data["solution"] = [block.tolist() for block in self.blocks]
        return data


class _SvecLayout:
    """Offsets and scalings that map block matrices to one svec vector."""

    def __init__(self, block_sizes: Sequence[int]):
        self.block_sizes = list(block_sizes)
        self.offsets = []
        self.triu = []
        self.scale = []
        offset = 0
        for d in self.block_sizes:
            rows, cols = np.triu_indices(d)
            self.offsets.append(offset)
            self.triu.append((rows, cols))
            self.scale.append(np.where(rows == cols, 1.0, SQRT2))
            offset += d * (d + 1) // 2
        self.size = offset

    def position(self, block: int, i: int, j: int) -> int:
        d = self.block_sizes[block]
        if not (0 <= i < d and 0 <= j < d):
            raise DimensionMismatchError(f"Entry ({i}, {j}) outside block {block} of size {d}")
        if i > j:
            i, j = j, i
        return self.offsets[block] + i * d - i * (i - 1) // 2 + (j - i)

    def pack(self, blocks: Sequence[np.ndarray]) -> np.ndarray:
        vector = np.zeros(self.size)
        for b, matrix in enumerate(blocks):
            rows, cols = self.triu[b]
            start = self.offsets[b]
            vector[start:start + len(rows)] = matrix[rows, cols] * self.scale[b]
        return vector

    def unpack_block(self, vector: np.ndarray, b: int) -> np.ndarray:
        d = self.block_sizes[b]
        rows, cols = self.triu[b]
        start = self.offsets[b]
        matrix = np.zeros((d, d))
        matrix[rows, cols] = vector[start:start + len(rows)] / self.scale[b]
        return matrix + matrix.T - np.diag(np.diag(matrix))

    def unpack(self, vector: np.ndarray) -> List[np.ndarray]:
        return [self.unpack_block(vector, b) for b in range(len(self.block_sizes))]


class AdmmSolver:
    """ADMM solver with residual balancing of the penalty parameter."""

    def __init__(self, config: Dict[str, Any]):
        """
        Initialize the solver.

        Args:
            config (Dict[str, Any]): The `solver` configuration section
        """
        self.tol_feas = float(config.get("tol_feas", 1e-7))
        self.tol_psd = float(config.get("tol_psd", 1e-7))
        self.max_iter = int(config.get("max_iter", 200000))
        self.rho = float(config.get("rho", 1.0))
        self.rho_adapt_ratio = float(config.get("rho_adapt_ratio", 10.0))
        self.rho_adapt_factor = float(config.get("rho_adapt_factor", 2.0))
        self.divergence_threshold = float(config.get("divergence_threshold", 1e8))
        self.check_every = int(config.get("check_every", 10))
        self.eig_method = config.get("eig_method", "lapack")

        for name in ("tol_feas", "tol_psd", "rho"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"solver.{name} must be positive, got {getattr(self, name)}")
        if self.max_iter < 1 or self.check_every < 1:
            raise ConfigurationError("solver.max_iter and solver.check_every must be at least 1")
        if self.eig_method not in ("lapack", "jacobi"):
            raise ConfigurationError(f"Unknown solver.eig_method '{self.eig_method}'")

    def _constraint_matrix(self, problem: SdpProblem, layout: _SvecLayout):
        """Canonical sparse constraint rows: unit norm, duplicates removed."""
        rows: Dict[Tuple, float] = {}
        inconsistent = False
        for constraint in problem.constraints:
            accumulated: Dict[int, float] = {}
            for block, i, j, value in constraint.entries:
                pos = layout.position(block, i, j)
                coefficient = value if i == j else SQRT2 * value
                accumulated[pos] = accumulated.get(pos, 0.0) + coefficient
            accumulated = {p: v for p, v in accumulated.items() if v != 0.0}
            norm = np.sqrt(sum(v * v for v in accumulated.values()))
            if norm == 0.0:
                if constraint.rhs != 0.0:
                    logger.warning(f"Constraint '{constraint.label}' reads 0 = {constraint.rhs}")
                    inconsistent = True
                continue
            items = sorted(accumulated.items())
            sign = 1.0 if items[0][1] > 0 else -1.0
            key = tuple((p, round(sign * v / norm, 12)) for p, v in items)
            rhs = sign * constraint.rhs / norm
            if key in rows:
                if abs(rows[key] - rhs) > 1e-12:
                    inconsistent = True
                continue
            rows[key] = rhs

        data, indices, indptr, rhs = [], [], [0], []
        for key, value in rows.items():
            for p, v in key:
                indices.append(p)
                data.append(v)
            indptr.append(len(indices))
            rhs.append(value)
        matrix = sparse.csr_matrix((data, indices, indptr), shape=(len(rows), layout.size))
        return matrix, np.array(rhs), inconsistent

    def _normal_solver(self, matrix) -> Tuple[Callable[[np.ndarray], np.ndarray], bool]:
        """Factor A A^T once; returns (solve, exact)."""
        gram = (matrix @ matrix.T).tocsc()
        m = gram.shape[0]
        try:
            if m <= DENSE_NORMAL_LIMIT:
                try:
                    factor = sla.cho_factor(gram.toarray(), lower=True)
                except np.linalg.LinAlgError as e:
                    raise NotPositiveDefiniteError(str(e)) from e
                return (lambda rhs: sla.cho_solve(factor, rhs)), True
            lu = spla.splu(gram)
            return lu.solve, True
        except (NotPositiveDefiniteError, RuntimeError) as e:
            logger.warning(f"Normal matrix is singular ({e}); falling back to a pseudo-inverse")
            pinv = sla.pinvh(gram.toarray())
            return (lambda rhs: pinv @ rhs), False

    @staticmethod
    def _psd_violation(blocks: List[np.ndarray]) -> float:
        """Largest negative eigenvalue over the blocks of an affine iterate, as a positive number."""
        lowest = min((float(np.linalg.eigvalsh(block)[0]) for block in blocks if block.size), default=0.0)
        return max(0.0, -lowest)

    def solve(self, problem: SdpProblem) -> SolveReport:
        """
        Solve an SDP by ADMM.

        The run converges when the cone iterate meets the equalities within
        tol_feas and the affine iterate lies within tol_psd of the PSD cone,
        both in distance and in its smallest eigenvalue.

        Args:
            problem (SdpProblem): The program to solve

        Returns:
            SolveReport: Value of the cone-feasible iterate with residuals and status

        Raises:
            SolverError: If the problem has no constraints or non-finite data
        """
        if problem.num_constraints == 0:
            raise SolverError("SDP needs at least one constraint")
        for c in problem.objective:
            if not np.all(np.isfinite(c)):
                raise SolverError("Objective has non-finite entries")

        layout = _SvecLayout(problem.block_sizes)
        a, b, inconsistent = self._constraint_matrix(problem, layout)
        if not np.all(np.isfinite(b)):
            raise SolverError("Constraint data has non-finite entries")
        at = a.T.tocsr()
        c = layout.pack(problem.objective)
        normal_solve, exact = self._normal_solver(a)

        def project_affine(v: np.ndarray) -> np.ndarray:
            return v - at @ normal_solve(a @ v - b)

        logger.info(
            f"Solving SDP '{problem.name}': blocks {problem.block_sizes}, "
            f"{a.shape[0]} canonical constraints"
        )

        if not exact:
            residual = float(np.max(np.abs(a @ project_affine(np.zeros(layout.size)) - b), initial=0.0))
            if residual > self.tol_feas:
                inconsistent = True
        if inconsistent:
            logger.warning("Affine constraints are inconsistent")
            zero = [np.zeros((d, d)) for d in problem.block_sizes]
            return SolveReport(float("nan"), zero, float("inf"), float("inf"), 0.0, 0, INFEASIBLE, self.rho)

        rho = self.rho
        z = np.zeros(layout.size)
        u = np.zeros(layout.size)
        x = z
        status = MAX_ITER
        primal_residual = dual_residual = float("inf")
        best = None
        psd_violation = float("inf")
        iteration = 0

        for iteration in range(1, self.max_iter + 1):
            x = project_affine(z - u + c / rho)
            z_prev = z
            v = x + u
            z = np.empty_like(v)
            for blk in range(len(problem.block_sizes)):
                projected = psd_project(layout.unpack_block(v, blk), self.eig_method)
                rows, cols = layout.triu[blk]
                start = layout.offsets[blk]
                z[start:start + len(rows)] = projected[rows, cols] * layout.scale[blk]
            u = u + x - z

            if iteration % self.check_every and iteration != self.max_iter:
                continue

            primal_residual = float(np.max(np.abs(a @ z - b)))
            coupling = float(np.linalg.norm(x - z))
            dual_residual = rho * float(np.linalg.norm(z - z_prev))
            scale = max(1.0, float(np.linalg.norm(c)))

            if best is None or primal_residual < best[0]:
                best = (primal_residual, z.copy(), u.copy(), rho, dual_residual)

            if iteration % (100 * self.check_every) == 0:
                logger.debug(
                    f"iter {iteration}: value {c @ z:.9f} primal {primal_residual:.2e} "
                    f"coupling {coupling:.2e} dual {dual_residual:.2e} rho {rho:.3g}"
                )

            if primal_residual <= self.tol_feas and coupling <= self.tol_psd and dual_residual <= self.tol_feas * scale:
                psd_violation = self._psd_violation(layout.unpack(x))
                if psd_violation <= self.tol_psd:
                    status = CONVERGED
                    break

            if rho * float(np.linalg.norm(u)) > self.divergence_threshold:
                logger.warning(f"Scaled dual variable diverged at iteration {iteration}")
                status = INFEASIBLE
                break

            if coupling > self.rho_adapt_ratio * dual_residual:
                rho *= self.rho_adapt_factor
                u /= self.rho_adapt_factor
                logger.debug(f"iter {iteration}: rho increased to {rho:.3g}")
            elif dual_residual > self.rho_adapt_ratio * max(coupling, 1e-300):
                rho /= self.rho_adapt_factor
                u *= self.rho_adapt_factor
                logger.debug(f"iter {iteration}: rho decreased to {rho:.3g}")

        if status == MAX_ITER and best is not None:
            primal_residual, z, u, rho, dual_residual = best
            logger.warning(f"ADMM stopped at max_iter={self.max_iter} (primal residual {primal_residual:.2e})")
        if status != CONVERGED:
            psd_violation = self._psd_violation(layout.unpack(x))

        blocks = layout.unpack(z)
        min_eigenvalue = min(
            (float(sym_eig(block, "lapack").eigenvalues[0]) for block in blocks if block.size),
            default=0.0,
        )
        value = float(c @ z)

        dual_value = None
        gap = None
        if status != INFEASIBLE:
            slack = layout.pack([psd_project(block, "lapack") for block in layout.unpack(-rho * u)])
            multipliers = normal_solve(a @ (c + slack))
            dual_value = float(b @ multipliers)
            gap = dual_value - value

        logger.info(f"SDP '{problem.name}' finished: {status} after {iteration} iterations, value {value:.9f}")
        return SolveReport(
            value=value,
            blocks=blocks,
            primal_residual=primal_residual,
            dual_residual=dual_residual,
            min_eigenvalue=min_eigenvalue,
            iterations=iteration,
            status=status,
            rho=rho,
            dual_value=dual_value,
            gap=gap,
            psd_violation=psd_violation,
        )


def dual_eigenvalue_bound(
    objective: np.ndarray,
    certificate: np.ndarray,
    feasibility_check: Optional[Callable[[np.ndarray], Optional[str]]] = None,
) -> float:
    """
    Weak-duality bound lambda_max(L + T) for a dual certificate T.

    Args:
        objective: The objective matrix L of the primal program
        certificate: The matrix T
        feasibility_check: Returns a description of the first violated linear
            condition on T, or None when T is feasible

    Returns:
        float: The largest eigenvalue of L + T

    Raises:
        InfeasibleCertificateError: If the feasibility check reports a violation
    """
    objective = check_symmetric(objective)
    certificate = check_symmetric(certificate)
    if objective.shape != certificate.shape:
        raise DimensionMismatchError(f"Certificate shape {certificate.shape} does not match {objective.shape}")
    if feasibility_check is not None:
        violation = feasibility_check(certificate)
        if violation:
            raise InfeasibleCertificateError(f"Certificate is not dual feasible: {violation}", condition=violation)
    return lambda_max(objective + certificate, "lapack")


def to_sdpa(problem: SdpProblem, digits: int = 12) -> str:
    """
    Plain-text dump in an SDPA-sparse-like layout.

    Lines: number of constraints, number of blocks, block sizes, right-hand
    sides, then "matno block i j value" with 1-based indices and i <= j;
    matrix number 0 is the objective.
    """
    fmt = f"%.{digits}g"
    lines = [
        str(problem.num_constraints),
        str(len(problem.block_sizes)),
        " ".join(str(d) for d in problem.block_sizes),
        " ".join(fmt % constraint.rhs for constraint in problem.constraints),
    ]
    for b, matrix in enumerate(problem.objective):
        rows, cols = np.nonzero(np.triu(matrix))
        for i, j in zip(rows, cols):
            lines.append(f"0 {b + 1} {i + 1} {j + 1} {fmt % matrix[i, j]}")
    for number, constraint in enumerate(problem.constraints, start=1):
        for block, i, j, value in constraint.entries:
            i, j = min(i, j), max(i, j)
            lines.append(f"{number} {block + 1} {i + 1} {j + 1} {fmt % value}")
    return "\n".join(lines) + "\n"
