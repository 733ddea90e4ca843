"""
Tests for the storage manager.
"""

import json

import numpy as np
import pytest

# Import the module to test
from src.storage.storage_manager import StorageManager
from src.complex.families import complete_tripartite
from src.errors import ComplexError, DimensionMismatchError
from src.random_lab.experiments import CSV_COLUMNS, ExperimentRow
from src.sdp.admm_solver import Constraint, SdpProblem

# Sample test data
SAMPLE_COMPLEX = {"n": 5, "k": 2, "k_faces": [[0, 1, 2], [1, 2, 3]]}

SAMPLE_LABELS = ["0-1", "0-2", "1-2"]

SAMPLE_ROWS = [
    ExperimentRow("theta_k", 8, 2, 0.5, 1, value=3.25, reference=2.0, ratio=1.625, status="converged"),
    ExperimentRow("theta_k", 8, 2, 0.5, 2, status="skipped_too_large"),
]


@pytest.fixture
def storage_manager(tmp_path):
    """Create a storage manager writing under a temporary directory."""
    return StorageManager({"results_dir": str(tmp_path / "results"), "float_digits": 12})


@pytest.mark.unit
class TestStorageManager:
    """Test the StorageManager class."""

    def test_init(self, tmp_path):
        """Test absolute and relative results directories."""
        manager = StorageManager({"results_dir": str(tmp_path)})
        assert manager.results_path == tmp_path
        assert manager.float_digits == 12
        relative = StorageManager({})
        assert relative.results_path == relative.base_path / "results"

    def test_dumps_is_deterministic(self, storage_manager):
        """Test sorted keys and fixed-precision floats."""
        text = storage_manager.dumps({"b": np.float64(1 / 3), "a": np.int64(2), "c": np.array([0.5, 1.0])})
        data = json.loads(text)
        assert list(data) == ["a", "b", "c"]
        assert data["a"] == 2
        assert data["b"] == 0.333333333333
        assert data["c"] == [0.5, 1.0]
        assert text == storage_manager.dumps({"c": [0.5, 1.0], "a": 2, "b": 1 / 3})

    def test_dumps_non_finite(self, storage_manager):
        """Test that infinities and NaN become strings."""
        data = json.loads(storage_manager.dumps({"gap": float("inf"), "value": float("nan"), "ok": True}))
        assert data == {"gap": "inf", "ok": True, "value": "nan"}

    def test_save_result(self, storage_manager, tmp_path):
        """Test that results are written with missing parents created."""
        path = storage_manager.save_result({"value": 2.0}, tmp_path / "out" / "result.json")
        assert json.loads(path.read_text()) == {"value": 2.0}


@pytest.mark.unit
class TestComplexFiles:
    """Test reading and writing complexes."""

    def test_load_complex(self, storage_manager, tmp_path):
        """Test loading a complex description."""
        path = tmp_path / "complex.json"
        path.write_text(json.dumps(SAMPLE_COMPLEX))
        complex_ = storage_manager.load_complex(path)
        assert complex_.n == 5
        assert complex_.k_faces == ((0, 1, 2), (1, 2, 3))

    def test_save_and_load(self, storage_manager, tmp_path):
        """Test that a saved complex loads back equal."""
        complex_ = complete_tripartite(2)
        path = storage_manager.save_complex(complex_, tmp_path / "tripartite.json")
        assert storage_manager.load_complex(path) == complex_

    def test_missing_file(self, storage_manager, tmp_path):
        """Test a missing complex file."""
        with pytest.raises(ComplexError):
            storage_manager.load_complex(tmp_path / "missing.json")

    @pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"k": 2}'])
    def test_invalid_file(self, storage_manager, tmp_path, content):
        """Test malformed complex files."""
        path = tmp_path / "bad.json"
        path.write_text(content)
        with pytest.raises(ComplexError):
            storage_manager.load_complex(path)


@pytest.mark.unit
class TestMatrixFiles:
    """Test labelled CSV matrices."""

    def test_matrix_csv(self, storage_manager):
        """Test the header row and label column."""
        text = storage_manager.matrix_csv(np.eye(3), SAMPLE_LABELS)
        lines = text.splitlines()
        assert lines[0] == ",0-1,0-2,1-2"
        assert lines[1] == "0-1,1,0,0"

    def test_shape_mismatch(self, storage_manager):
        """Test that labels must match the matrix size."""
        with pytest.raises(DimensionMismatchError):
            storage_manager.matrix_csv(np.eye(2), SAMPLE_LABELS)

    def test_save_and_load(self, storage_manager, tmp_path):
        """Test that a matrix loads back with its labels."""
        matrix = np.array([[2.0, -1.0, 0.5], [-1.0, 2.0, 0.0], [0.5, 0.0, 1.0]])
        path = storage_manager.save_matrix(matrix, SAMPLE_LABELS, tmp_path / "m.csv")
        loaded, labels = storage_manager.load_matrix(path, SAMPLE_LABELS)
        np.testing.assert_allclose(loaded, matrix)
        assert labels == SAMPLE_LABELS

    def test_unexpected_labels(self, storage_manager, tmp_path):
        """Test that a matrix over other faces is rejected."""
        path = storage_manager.save_matrix(np.eye(3), SAMPLE_LABELS, tmp_path / "m.csv")
        with pytest.raises(DimensionMismatchError):
            storage_manager.load_matrix(path, ["0-1", "0-2", "0-3"])

    @pytest.mark.parametrize("content", [
        "",
        ",0-1,0-2\n0-1,1,0\n",
        ",0-1,0-2\n0-1,1,0\n0-3,0,1\n",
        ",0-1,0-2\n0-1,1,x\n0-2,0,1\n",
    ])
    def test_malformed(self, storage_manager, tmp_path, content):
        """Test empty, short, mislabelled and non-numeric files."""
        path = tmp_path / "bad.csv"
        path.write_text(content)
        with pytest.raises(DimensionMismatchError):
            storage_manager.load_matrix(path)


@pytest.mark.unit
class TestExperimentFiles:
    """Test experiment tables and conic dumps."""

    def test_experiment_csv(self, storage_manager):
        """Test the column order and empty cells for missing values."""
        lines = storage_manager.experiment_csv(SAMPLE_ROWS).splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        first = dict(zip(CSV_COLUMNS, lines[1].split(",")))
        assert first["value"] == "3.25"
        assert first["ratio"] == "1.625"
        second = dict(zip(CSV_COLUMNS, lines[2].split(",")))
        assert second["value"] == ""
        assert second["status"] == "skipped_too_large"

    def test_save_experiment(self, storage_manager):
        """Test that the table and summary land in the results directory."""
        csv_path, summary_path = storage_manager.save_experiment(SAMPLE_ROWS, {"band": None}, "run")
        assert csv_path == storage_manager.results_path / "run.csv"
        assert json.loads(summary_path.read_text()) == {"band": None}

    def test_save_sdpa(self, storage_manager, tmp_path):
        """Test the conic dump of a small problem."""
        problem = SdpProblem([2], [np.ones((2, 2))], [Constraint([(0, 0, 0, 1.0), (0, 1, 1, 1.0)], 1.0, "trace")])
        path = storage_manager.save_sdpa(problem, tmp_path / "problem.dat-s")
        assert path.read_text().splitlines()[:2] == ["1", "1"]
