"""
Theta programs of a pure complex and the calculator that solves them.

The level-l program is indexed by Ind_{l-1}, the independent l-subsets; at
l = k this is every k-subset of the vertex set and the program is theta_k.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.complex.simplicial_complex import Complex, Face, FaceIndex, epsilon, graph_complex, make_face
from src.errors import PreconditionError, SolverDidNotConvergeError
from src.sdp.admm_solver import AdmmSolver, Constraint, SdpProblem, SolveReport, dual_eigenvalue_bound
from src.spectral.linalg import SymMatrix
from src.spectral.chain_operators import subset_down_laplacian

logger = logging.getLogger(__name__)

# Per-entry tolerance for the linear conditions on dual certificates.
CERTIFICATE_TOL = 1e-9


@dataclass
class ThetaInstance:
    """
    The level-l theta program of a complex before it is handed to the solver.

    Attributes:
        complex: The underlying complex
        level: l (equal to k for theta_k)
        index: Ind_{l-1}, rows and columns of Y
        objective: L_down_{l-1} of the independence complex over index
        admissible: Ind_l, the unions whose entries are tied by symmetry
        zero_pairs: Index pairs (a, b), a < b, with Y[a, b] = 0
        symmetry_classes: union H -> [(a, b, eps)] over pairs with F+F' = H
    """

    complex: Complex
    level: int
    index: FaceIndex
    objective: SymMatrix
    admissible: FrozenSet[Face]
    zero_pairs: List[Tuple[int, int]] = field(default_factory=list)
    symmetry_classes: Dict[Face, List[Tuple[int, int, int]]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.index)

    def constraints(self) -> List[Constraint]:
        """Trace normalization, zero pattern and one equality per non-canonical symmetric pair."""
        rows = [Constraint([(0, i, i, 1.0) for i in range(self.size)], 1.0, "trace")]
        for a, b in self.zero_pairs:
            rows.append(Constraint([(0, a, b, 1.0)], 0.0, f"zero {a},{b}"))
        for union, members in self.symmetry_classes.items():
            a0, b0, e0 = members[0]
            for a, b, e in members[1:]:
                rows.append(Constraint([(0, a0, b0, float(e0)), (0, a, b, float(-e))], 0.0, f"sym {union}"))
        return rows

    def to_problem(self) -> SdpProblem:
        return SdpProblem(
            [self.size],
            [self.objective.as_float()],
            self.constraints(),
            [self.index],
            f"theta level {self.level} n={self.complex.n} k={self.complex.k}",
        )

    def certificate_check(self, certificate: np.ndarray) -> Optional[str]:
        """
        Linear conditions on a dual certificate T.

        T must have zero diagonal and, for every admissible union H, the sum of
        eps(F, F') T[F, F'] over pairs with F+F' = H must vanish.

        Returns:
            Optional[str]: First violated condition, or None
        """
        t = np.asarray(certificate, dtype=float)
        if t.shape != (self.size, self.size):
            return f"shape {t.shape} does not match index of size {self.size}"
        tol = CERTIFICATE_TOL * max(1.0, float(np.max(np.abs(t), initial=0.0)))
        diagonal = np.abs(np.diag(t))
        if diagonal.size and diagonal.max() > tol:
            worst = int(np.argmax(diagonal))
            return f"nonzero diagonal at {self.index.faces[worst]}"
        for union, members in self.symmetry_classes.items():
            total = sum(e * t[a, b] for a, b, e in members)
            if abs(total) > tol:
                return f"sum condition fails for H={list(union)} ({total:.3e})"
        return None


def _independent_index(complex_: Complex, level: int) -> Tuple[FaceIndex, FrozenSet[Face]]:
    ind = complex_.independence_complex(level)
    return FaceIndex(level - 1, ind[level - 1]), frozenset(ind[level])


def build_theta_ell(complex_: Complex, level: int) -> ThetaInstance:
    """
    Assemble the level-l theta program.

    Args:
        complex_: The complex X
        level: l with k <= l <= alpha(X)

    Returns:
        ThetaInstance: Program over Ind_{l-1}

    Raises:
        PreconditionError: If l < k or no independent l-set exists
    """
    if complex_.k < 1:
        raise PreconditionError(f"theta programs need dimension k >= 1, got k={complex_.k}")
    if level < complex_.k:
        raise PreconditionError(f"level {level} is below the dimension k={complex_.k}")
    if level > complex_.n:
        raise PreconditionError(f"level {level} exceeds alpha (n={complex_.n})")
    index, admissible = _independent_index(complex_, level)
    if len(index) == 0:
        raise PreconditionError(f"level {level} exceeds alpha: no independent set of size {level}")

    objective = subset_down_laplacian(index)
    zero_pairs = []
    classes: Dict[Face, List[Tuple[int, int, int]]] = {}
    for a, b in combinations(range(len(index)), 2):
        first, second = index.faces[a], index.faces[b]
        union = make_face(set(first) | set(second))
        if len(union) == level + 1 and union in admissible:
            classes.setdefault(union, []).append((a, b, epsilon(first, second)))
        else:
            zero_pairs.append((a, b))

    logger.info(
        f"Built level-{level} theta program: {len(index)} rows, {len(zero_pairs)} zero pairs, "
        f"{len(classes)} symmetry classes"
    )
    return ThetaInstance(complex_, level, index, objective, admissible, zero_pairs, classes)


def build_theta_k(complex_: Complex) -> ThetaInstance:
    """The theta_k program, indexed by every k-subset of the vertex set."""
    return build_theta_ell(complex_, complex_.k)


def witness_matrix(complex_: Complex, independent: Sequence[int], level: int) -> Tuple[np.ndarray, Fraction, FaceIndex]:
    """
    The witness Y^S of an independent set S at level l.

    Y^S agrees with L_down_{l-1}(Ind) on pairs whose union lies inside S and
    is zero elsewhere. Scaled by the returned factor 1/(l * C(|S|, l)) it is a
    feasible level-l matrix with objective exactly |S|.

    Args:
        complex_: The complex X
        independent: Independent vertex set S with |S| >= l
        level: l

    Returns:
        tuple: (integer matrix over Ind_{l-1}, scale factor, index)
    """
    chosen = frozenset(independent)
    if not complex_.is_independent(chosen):
        raise PreconditionError(f"{sorted(chosen)} is not independent")
    if len(chosen) < level:
        raise PreconditionError(f"|S|={len(chosen)} is smaller than the level {level}")
    index, _ = _independent_index(complex_, level)
    laplacian = subset_down_laplacian(index).values
    inside = np.array([set(face) <= chosen for face in index], dtype=bool)
    mask = np.outer(inside, inside)
    witness = np.where(mask, laplacian, 0).astype(np.int64)
    return witness, Fraction(1, level * comb(len(chosen), level)), index


@dataclass
class ThetaResult:
    """A theta value with its solve report and certificate bracket."""

    complex: Complex
    level: int
    hat: bool
    report: SolveReport
    certificate_bound: Optional[float] = None

    @property
    def value(self) -> float:
        return self.report.value

    def to_dict(self) -> Dict[str, Any]:
        data = self.report.to_dict()
        residuals = data.pop("residuals")
        return {
            "complex": {"n": self.complex.n, "k": self.complex.k, "faces": len(self.complex.k_faces)},
            "level": self.level,
            "hat": self.hat,
            "value": data["value"],
            "status": data["status"],
            "iterations": data["iterations"],
            "residuals": residuals,
            "dual_value": data["dual_value"],
            "gap": data["gap"],
            "certificate_bound": self.certificate_bound,
        }


class ThetaCalculator:
    """Solves theta programs with a shared SDP solver."""

    def __init__(self, config: Dict[str, Any], solver: AdmmSolver):
        """
        Initialize the calculator.

        Args:
            config (Dict[str, Any]): The `theta` configuration section
            solver (AdmmSolver): Solver used for every program
        """
        self.solver = solver
        self.bracket_with_certificate = bool(config.get("bracket_with_certificate", True))
        self.require_convergence = bool(config.get("require_convergence", True))
        self._graph_cache: Dict[Tuple[int, FrozenSet[Tuple[int, int]]], float] = {}

    def theta_k(self, complex_: Complex) -> SolveReport:
        return self.solver.solve(build_theta_k(complex_).to_problem())

    def theta_ell(self, complex_: Complex, level: int) -> SolveReport:
        return self.solver.solve(build_theta_ell(complex_, level).to_problem())

    def theta_hat_ell(self, complex_: Complex, level: int) -> SolveReport:
        from src.theta.hierarchy import build_theta_hat_ell

        return self.solver.solve(build_theta_hat_ell(complex_, level))

    def lovasz_theta(self, graph: nx.Graph) -> float:
        """
        Lovasz theta of a simple graph.

        Results are cached per labelled edge set.

        Args:
            graph: networkx graph

        Returns:
            float: theta(G); 0 for the graph with no vertices
        """
        complex_, _ = graph_complex(graph)
        if complex_.n == 0:
            return 0.0
        key = (complex_.n, frozenset(complex_.k_faces))
        if key not in self._graph_cache:
            report = self.theta_k(complex_)
            self._check(report)
            self._graph_cache[key] = report.value
        return self._graph_cache[key]

    def _check(self, report: SolveReport):
        if self.require_convergence and not report.converged:
            raise SolverDidNotConvergeError(
                f"SDP solver stopped with status {report.status} "
                f"(primal residual {report.primal_residual:.2e})",
                report=report,
            )

    def evaluate(self, complex_: Complex, level: Optional[int] = None, hat: bool = False) -> ThetaResult:
        """
        Solve theta_k, theta_l or hat-theta_l and bracket the value.

        Args:
            complex_: The complex X
            level: l, defaults to k
            hat: Solve the strengthened program

        Returns:
            ThetaResult: Value, report and the best available dual bound

        Raises:
            SolverDidNotConvergeError: If convergence is required and not reached
        """
        level = complex_.k if level is None else level
        if hat:
            report = self.theta_hat_ell(complex_, level)
        else:
            report = self.theta_ell(complex_, level)
        self._check(report)

        bound = None
        if self.bracket_with_certificate and not hat and level == complex_.k:
            from src.theta.bounds import golubev_certificate

            bound = min(float(complex_.n), golubev_certificate(complex_))
            if report.value > bound + 1e-4:
                logger.warning(f"theta value {report.value:.6f} exceeds dual certificate {bound:.6f}")
        return ThetaResult(complex_, level, hat, report, bound)

    def certificate_bound(self, complex_: Complex, certificate: np.ndarray, level: Optional[int] = None) -> float:
        """Dual eigenvalue bound of a user certificate for the level-l program."""
        instance = build_theta_ell(complex_, complex_.k if level is None else level)
        return dual_eigenvalue_bound(instance.objective.as_float(), certificate, instance.certificate_check)
