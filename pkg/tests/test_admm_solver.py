"""
Tests for the ADMM semidefinite program solver.
"""

from itertools import combinations

import numpy as np
import pytest

# Import the module to test
from src.sdp.admm_solver import (
    CONVERGED,
    INFEASIBLE,
    MAX_ITER,
    AdmmSolver,
    Constraint,
    SdpProblem,
    _SvecLayout,
    dual_eigenvalue_bound,
    to_sdpa,
)
from src.errors import (
    ConfigurationError,
    DimensionMismatchError,
    InfeasibleCertificateError,
    SolverError,
)

# Sample test data
SAMPLE_CONFIG = {
    "tol_feas": 1e-8,
    "tol_psd": 1e-8,
    "max_iter": 50000,
    "rho": 1.0,
}

C5_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]


def trace_one(size):
    return Constraint([(0, i, i, 1.0) for i in range(size)], 1.0, "trace")


def lovasz_problem(size, edges):
    """max <J, X> over tr X = 1 with X zero on edges."""
    constraints = [trace_one(size)]
    constraints += [Constraint([(0, a, b, 1.0)], 0.0, f"edge {a},{b}") for a, b in edges]
    return SdpProblem([size], [np.ones((size, size))], constraints, name="lovasz")


@pytest.fixture
def solver():
    """Create a solver with tight tolerances."""
    return AdmmSolver(SAMPLE_CONFIG)


@pytest.mark.unit
class TestSdpProblem:
    """Test problem validation."""

    def test_block_count_mismatch(self):
        """Test that every block needs an objective."""
        with pytest.raises(DimensionMismatchError):
            SdpProblem([2, 2], [np.eye(2)], [trace_one(2)])

    def test_block_shape_mismatch(self):
        """Test that objective shapes must match block sizes."""
        with pytest.raises(DimensionMismatchError):
            SdpProblem([3], [np.eye(2)], [trace_one(3)])

    def test_scaled(self):
        """Test that scaling keeps constraints."""
        problem = lovasz_problem(3, [])
        scaled = problem.scaled(-1.0)
        assert np.array_equal(scaled.objective[0], -np.ones((3, 3)))
        assert scaled.num_constraints == problem.num_constraints
        assert scaled.block_labels == [None]


@pytest.mark.unit
class TestSvecLayout:
    """Test the symmetric vectorization."""

    def test_inner_product_is_preserved(self):
        """Test <A, B> = svec(A) . svec(B)."""
        rng = np.random.default_rng(3)
        a = rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4))
        a, b = a + a.T, b + b.T
        layout = _SvecLayout([4])
        assert layout.pack([a]) @ layout.pack([b]) == pytest.approx(np.sum(a * b))
        assert np.allclose(layout.unpack_block(layout.pack([a]), 0), a)

    def test_positions(self):
        """Test upper-triangular positions across blocks."""
        layout = _SvecLayout([2, 3])
        assert layout.size == 3 + 6
        assert layout.position(0, 1, 0) == layout.position(0, 0, 1) == 1
        assert layout.position(1, 0, 0) == 3
        assert layout.position(1, 2, 2) == 8
        with pytest.raises(DimensionMismatchError):
            layout.position(0, 2, 0)


@pytest.mark.unit
class TestAdmmSolver:
    """Test ADMM solves with known optima."""

    def test_configuration_errors(self):
        """Test that bad solver settings are rejected."""
        with pytest.raises(ConfigurationError):
            AdmmSolver({"tol_feas": 0})
        with pytest.raises(ConfigurationError):
            AdmmSolver({"max_iter": 0})
        with pytest.raises(ConfigurationError):
            AdmmSolver({"eig_method": "power"})

    def test_largest_eigenvalue(self, solver):
        """Test max <J, X> over the spectraplex equals lambda_max(J)."""
        report = solver.solve(lovasz_problem(3, []))
        assert report.status == CONVERGED
        assert report.converged
        assert report.value == pytest.approx(3.0, abs=1e-5)
        assert np.allclose(report.solution, np.full((3, 3), 1.0 / 3.0), atol=1e-4)
        assert report.min_eigenvalue >= -1e-8
        assert report.gap == pytest.approx(0.0, abs=1e-4)

    def test_pentagon(self, solver):
        """Test the Lovasz theta of C_5 is sqrt(5)."""
        report = solver.solve(lovasz_problem(5, C5_EDGES))
        assert report.converged
        assert report.value == pytest.approx(np.sqrt(5.0), abs=1e-4)
        assert report.primal_residual <= 1e-7

    def test_two_blocks(self, solver):
        """Test a linear program split over two 1x1 blocks."""
        problem = SdpProblem(
            [1, 1],
            [np.array([[1.0]]), np.array([[2.0]])],
            [Constraint([(0, 0, 0, 1.0), (1, 0, 0, 1.0)], 1.0, "sum")],
        )
        report = solver.solve(problem)
        assert report.value == pytest.approx(2.0, abs=1e-5)
        assert report.blocks[0][0, 0] == pytest.approx(0.0, abs=1e-4)

    def test_duplicate_constraints_collapse(self, solver):
        """Test that repeated and rescaled constraints are merged."""
        problem = lovasz_problem(3, [])
        problem.constraints.append(Constraint([(0, i, i, 2.0) for i in range(3)], 2.0, "trace twice"))
        assert solver.solve(problem).value == pytest.approx(3.0, abs=1e-5)

    def test_inconsistent_constraints(self, solver):
        """Test that contradictory equalities are reported as infeasible."""
        problem = lovasz_problem(2, [])
        problem.constraints.append(Constraint([(0, i, i, 1.0) for i in range(2)], 2.0, "trace two"))
        report = solver.solve(problem)
        assert report.status == INFEASIBLE
        assert np.isnan(report.value)

    def test_zero_row_with_nonzero_rhs(self, solver):
        """Test that 0 = 1 is infeasible."""
        problem = lovasz_problem(2, [])
        problem.constraints.append(Constraint([(0, 0, 1, 1.0), (0, 0, 1, -1.0)], 1.0, "empty"))
        assert solver.solve(problem).status == INFEASIBLE

    def test_no_constraints(self, solver):
        """Test that unconstrained programs are rejected."""
        with pytest.raises(SolverError):
            solver.solve(SdpProblem([2], [np.eye(2)], []))

    def test_non_finite_objective(self, solver):
        """Test that non-finite data is rejected."""
        with pytest.raises(SolverError):
            solver.solve(SdpProblem([1], [np.array([[np.inf]])], [trace_one(1)]))

    def test_max_iter(self):
        """Test that the iteration limit is reported."""
        report = AdmmSolver({**SAMPLE_CONFIG, "max_iter": 1}).solve(lovasz_problem(5, C5_EDGES))
        assert report.status == MAX_ITER
        assert report.iterations == 1
        assert not report.converged

    def test_psd_tolerance_is_enforced(self):
        """Test that converged solves respect tol_psd and a looser one stops no later."""
        tight = AdmmSolver({**SAMPLE_CONFIG, "tol_psd": 1e-8}).solve(lovasz_problem(5, C5_EDGES))
        loose = AdmmSolver({**SAMPLE_CONFIG, "tol_psd": 1e-2}).solve(lovasz_problem(5, C5_EDGES))
        assert tight.converged and loose.converged
        assert tight.psd_violation <= 1e-8
        assert loose.psd_violation <= 1e-2
        assert loose.iterations <= tight.iterations
        with pytest.raises(ConfigurationError):
            AdmmSolver({"tol_psd": 0.0})

    def test_sparse_normal_system(self, solver, monkeypatch):
        """Test the sparse LU path gives the same value."""
        monkeypatch.setattr("src.sdp.admm_solver.DENSE_NORMAL_LIMIT", 0)
        report = solver.solve(lovasz_problem(5, C5_EDGES))
        assert report.value == pytest.approx(np.sqrt(5.0), abs=1e-4)

    def test_report_to_dict(self, solver):
        """Test report serialization."""
        data = solver.solve(lovasz_problem(2, [])).to_dict(include_solution=True)
        assert data["status"] == CONVERGED
        assert set(data["residuals"]) == {"primal", "dual", "min_eigenvalue", "psd"}
        assert len(data["solution"][0]) == 2


@pytest.mark.unit
class TestSolverProperties:
    """Test invariances of the solver output."""

    @pytest.mark.parametrize("factor", [0.5, 2.0, 4.0])
    def test_objective_scaling(self, solver, factor):
        """Test that scaling the objective by c scales the value by c."""
        report = solver.solve(lovasz_problem(5, C5_EDGES).scaled(factor))
        assert report.converged
        assert report.value == pytest.approx(factor * np.sqrt(5.0), abs=1e-4 * factor)

    def test_repeated_solves_are_identical(self):
        """Test that two solves of the same problem agree bit for bit."""
        first = AdmmSolver(SAMPLE_CONFIG).solve(lovasz_problem(5, C5_EDGES))
        second = AdmmSolver(SAMPLE_CONFIG).solve(lovasz_problem(5, C5_EDGES))
        assert first.value == second.value
        assert first.iterations == second.iterations
        assert np.array_equal(first.solution, second.solution)
        assert first.dual_value == second.dual_value

    @pytest.mark.parametrize("problem", [
        lovasz_problem(3, []),
        lovasz_problem(4, [(0, 1), (2, 3)]),
        lovasz_problem(5, C5_EDGES),
        SdpProblem([1, 1], [np.array([[1.0]]), np.array([[2.0]])],
                   [Constraint([(0, 0, 0, 1.0), (1, 0, 0, 1.0)], 1.0, "sum")]),
    ])
    def test_weak_duality(self, solver, problem):
        """Test that the dual estimate is not below the primal value."""
        report = solver.solve(problem)
        assert report.converged
        assert report.dual_value >= report.value - 1e-5
        assert report.gap >= -1e-5


def random_graph_edges(seed, size, p=0.5):
    rng = np.random.default_rng(seed)
    return [(a, b) for a, b in combinations(range(size), 2) if rng.random() < p]


def subgradient_theta(size, edges, iterations=20000):
    """
    Minimize lambda_max(J + T) over T supported on the edges.

    Normalized subgradient steps 1/sqrt(i); every iterate is dual feasible, so
    the best value seen is an upper bound on theta.
    """
    rows = np.array([a for a, _ in edges], dtype=int)
    cols = np.array([b for _, b in edges], dtype=int)
    weights = np.zeros(len(edges))
    best = np.inf
    for i in range(1, iterations + 1):
        matrix = np.ones((size, size))
        matrix[rows, cols] += weights
        matrix[cols, rows] += weights
        values, vectors = np.linalg.eigh(matrix)
        best = min(best, values[-1])
        top = vectors[:, -1]
        gradient = 2.0 * top[rows] * top[cols]
        norm = np.linalg.norm(gradient)
        if norm == 0.0:
            break
        weights -= gradient / (norm * np.sqrt(i))
    return best


@pytest.mark.integration
@pytest.mark.slow
class TestIndependentDual:
    """Test ADMM values against a subgradient method on the dual."""

    @pytest.mark.parametrize("seed", range(20))
    def test_random_graphs(self, solver, seed):
        """Test theta of G(5, 1/2) samples against the subgradient dual."""
        edges = random_graph_edges(seed, 5)
        report = solver.solve(lovasz_problem(5, edges))
        reference = subgradient_theta(5, edges)
        assert report.converged
        assert report.value <= reference + 1e-4
        assert reference <= report.value + 0.05


@pytest.mark.unit
class TestDualBound:
    """Test the weak-duality eigenvalue bound."""

    def test_zero_certificate(self):
        """Test that T = 0 gives lambda_max of the objective."""
        assert dual_eigenvalue_bound(np.ones((3, 3)), np.zeros((3, 3))) == pytest.approx(3.0)

    def test_feasibility_check(self):
        """Test that a reported violation raises."""
        with pytest.raises(InfeasibleCertificateError) as exc_info:
            dual_eigenvalue_bound(np.ones((2, 2)), np.eye(2), lambda t: "nonzero diagonal")
        assert exc_info.value.condition == "nonzero diagonal"

    def test_shape_mismatch(self):
        """Test that certificate and objective must agree in shape."""
        with pytest.raises(DimensionMismatchError):
            dual_eigenvalue_bound(np.ones((2, 2)), np.zeros((3, 3)))


@pytest.mark.unit
def test_to_sdpa():
    """Test the plain-text problem dump."""
    text = to_sdpa(lovasz_problem(2, [(0, 1)]))
    lines = text.splitlines()
    assert lines[:4] == ["2", "1", "2", "1 0"]
    assert "0 1 1 2 1" in lines
    assert "2 1 1 2 1" in lines
    assert text.endswith("\n")
